#include "gstmar/distributions.hpp"

#include <cmath>
#include <sstream>

#include "gstmar/error.hpp"

namespace gstmar {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_dims(std::size_t xd, const Vector& mean, const Matrix& cov) {
    if (mean.size() != cov.rows() || cov.rows() != cov.cols())
        throw DomainError("mean / covariance dimensions disagree");
    if (xd != mean.size())
        throw DomainError("evaluation point dimension does not match the distribution");
}

void check_dof(double dof) {
    if (!(dof > 2.0)) {
        std::ostringstream msg;
        msg << "degrees of freedom must exceed 2 (got " << dof << ")";
        throw DomainError(msg.str());
    }
}

Vector centered(const Vector& x, const Vector& mean) {
    Vector z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - mean[i];
    return z;
}

} // namespace

double log_t_normalizer(int d, double dof) {
    check_dof(dof);
    return std::lgamma(0.5 * (d + dof)) - std::lgamma(0.5 * dof) -
           0.5 * d * std::log(M_PI * (dof - 2.0));
}

double mvn_logpdf(const Vector& x, const MvnParams& params) {
    check_dims(x.size(), params.mean, params.cov);
    const Cholesky chol(params.cov);
    const double q = chol.quad_form(centered(x, params.mean));
    const double d = static_cast<double>(x.size());
    return -0.5 * (d * kLog2Pi + chol.log_det() + q);
}

double mvn_pdf(const Vector& x, const MvnParams& params) {
    return std::exp(mvn_logpdf(x, params));
}

double mvt_logpdf(const Vector& x, const MvtParams& params) {
    check_dims(x.size(), params.mean, params.cov);
    check_dof(params.dof);
    const Cholesky chol(params.cov);
    const double q = chol.quad_form(centered(x, params.mean));
    const int d = static_cast<int>(x.size());
    return log_t_normalizer(d, params.dof) - 0.5 * chol.log_det() -
           0.5 * (d + params.dof) * std::log1p(q / (params.dof - 2.0));
}

double mvt_pdf(const Vector& x, const MvtParams& params) {
    return std::exp(mvt_logpdf(x, params));
}

double norm_logpdf_1d(double x, double mean, double var) {
    const double z = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + z * z / var);
}

double t_logpdf_1d(double x, double mean, double var, double dof) {
    const double z = x - mean;
    return log_t_normalizer(1, dof) - 0.5 * std::log(var) -
           0.5 * (1.0 + dof) * std::log1p(z * z / (var * (dof - 2.0)));
}

double norm_cdf(double z) {
    return 0.5 * std::erfc(-z * M_SQRT1_2);
}

// Wichura (1988), algorithm AS 241, PPND16.
double norm_quantile(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        if (p == 0.0) return -HUGE_VAL;
        if (p == 1.0) return HUGE_VAL;
        throw DomainError("norm_quantile requires p in [0,1]");
    }
    const double q = p - 0.5;
    double r;
    if (std::fabs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                  3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
                4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
                2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
                5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("inc_beta requires positive shape parameters");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double t_cdf_1d(double x, double mu, double var, double dof) {
    if (!(var > 0.0)) throw DomainError("t_cdf_1d requires positive variance");
    check_dof(dof);
    if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
    // Classical (scale-parametrized) standardization.
    const double t = (x - mu) / std::sqrt(var * (dof - 2.0) / dof);
    const double w = dof / (dof + t * t);
    const double half_tail = 0.5 * inc_beta(0.5 * dof, 0.5, w);
    return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

PartitionedLaw::PartitionedLaw(const MvnParams& params, std::size_t d1) : d1_(d1) {
    init(params.mean, params.cov);
}

PartitionedLaw::PartitionedLaw(const MvtParams& params, std::size_t d1)
    : is_student_(true), dof_(params.dof), d1_(d1) {
    check_dof(dof_);
    init(params.mean, params.cov);
}

void PartitionedLaw::init(const Vector& mean, const Matrix& cov) {
    const std::size_t d = mean.size();
    if (d1_ < 1 || d1_ >= d)
        throw DomainError("partition split must satisfy 1 <= d1 < d");
    d2_ = d - d1_;
    mean1_.assign(mean.begin(), mean.begin() + d1_);
    mean2_.assign(mean.begin() + d1_, mean.end());
    cov11_ = cov.block(0, 0, d1_, d1_);
    cov12_ = cov.block(0, d1_, d1_, d2_);
    cov22_ = cov.block(d1_, d1_, d2_, d2_);
    chol22_ = std::make_unique<Cholesky>(cov22_);

    // regression = cov12 cov22^{-1}: solve column by column.
    regression_ = Matrix(d1_, d2_);
    for (std::size_t i = 0; i < d1_; ++i) {
        Vector row(d2_);
        for (std::size_t j = 0; j < d2_; ++j) row[j] = cov12_(i, j);
        Vector sol = chol22_->solve(row);
        for (std::size_t j = 0; j < d2_; ++j) regression_(i, j) = sol[j];
    }
    schur_ = cov11_ - regression_ * cov12_.transpose();
}

MvnParams PartitionedLaw::marginal_head_gaussian() const { return {mean1_, cov11_}; }
MvnParams PartitionedLaw::marginal_tail_gaussian() const { return {mean2_, cov22_}; }
MvtParams PartitionedLaw::marginal_head_student() const { return {mean1_, cov11_, dof_}; }
MvtParams PartitionedLaw::marginal_tail_student() const { return {mean2_, cov22_, dof_}; }

Vector PartitionedLaw::conditional_mean(const Vector& x2) const {
    Vector z = x2;
    for (std::size_t i = 0; i < d2_; ++i) z[i] -= mean2_[i];
    Vector shift = regression_ * z;
    for (std::size_t i = 0; i < d1_; ++i) shift[i] += mean1_[i];
    return shift;
}

Matrix PartitionedLaw::conditional_cov(const Vector& x2) const {
    if (!is_student_) return schur_;
    Vector z = x2;
    for (std::size_t i = 0; i < d2_; ++i) z[i] -= mean2_[i];
    const double q = chol22_->quad_form(z);
    const double scale = (dof_ - 2.0 + q) / (dof_ - 2.0 + static_cast<double>(d2_));
    Matrix out = schur_;
    for (std::size_t i = 0; i < d1_; ++i)
        for (std::size_t j = 0; j < d1_; ++j) out(i, j) *= scale;
    return out;
}

double PartitionedLaw::conditional_dof() const {
    if (!is_student_) throw DomainError("conditional_dof is defined for the t case only");
    return dof_ + static_cast<double>(d2_);
}

double PartitionedLaw::logpdf_conditional(const Vector& x1, const Vector& x2) const {
    const Vector mu = conditional_mean(x2);
    const Matrix cov = conditional_cov(x2);
    if (is_student_) return mvt_logpdf(x1, {mu, cov, conditional_dof()});
    return mvn_logpdf(x1, {mu, cov});
}

double PartitionedLaw::logpdf_marginal_tail(const Vector& x2) const {
    if (is_student_) return mvt_logpdf(x2, marginal_tail_student());
    return mvn_logpdf(x2, marginal_tail_gaussian());
}

} // namespace gstmar
