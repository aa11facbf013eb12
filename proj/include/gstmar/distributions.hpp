#ifndef GSTMAR_DISTRIBUTIONS_HPP
#define GSTMAR_DISTRIBUTIONS_HPP

#include <memory>

#include "gstmar/linalg.hpp"

namespace gstmar {

// Multivariate Gaussian with mean and covariance matrix.
struct MvnParams {
    Vector mean;
    Matrix cov;
};

// Multivariate Student's t parametrized by mean, *covariance* matrix and
// degrees of freedom nu > 2. Note the covariance parametrization: cov is
// the distribution's covariance, not the classical scale matrix, so the
// quadratic form is divided by (nu - 2) in the density.
struct MvtParams {
    Vector mean;
    Matrix cov;
    double dof = 0.0;
};

// log C_d(nu) = lgamma((d+nu)/2) - lgamma(nu/2) - (d/2) log(pi (nu-2)),
// the t-density normalizer in the covariance parametrization. Computed in
// log space so that nu up to 1e7 stays finite.
double log_t_normalizer(int d, double dof);

double mvn_logpdf(const Vector& x, const MvnParams& params);
double mvn_pdf(const Vector& x, const MvnParams& params);
double mvt_logpdf(const Vector& x, const MvtParams& params);
double mvt_pdf(const Vector& x, const MvtParams& params);

// Scalar shortcuts used in the likelihood inner loop.
double norm_logpdf_1d(double x, double mean, double var);
double t_logpdf_1d(double x, double mean, double var, double dof);

// Standard normal CDF and quantile (Wichura's PPND16).
double norm_cdf(double z);
double norm_quantile(double p);

// Regularized incomplete beta I_x(a, b) by continued fraction.
double inc_beta(double a, double b, double x);

// CDF of the 1-dim t with mean mu, variance var and dof nu > 2, in the
// covariance parametrization (standardize by sqrt(var (nu-2)/nu), then
// classical t CDF through the incomplete beta function).
double t_cdf_1d(double x, double mu, double var, double dof);

// Partition of a d-dimensional Gaussian or Student's t law into
// (X1, X2) with dim(X1) = d1. Exposes the marginal laws and the
// conditional law of X1 given X2 = x2.
class PartitionedLaw {
public:
    // Gaussian partition.
    PartitionedLaw(const MvnParams& params, std::size_t d1);
    // Student's t partition.
    PartitionedLaw(const MvtParams& params, std::size_t d1);

    bool is_student() const { return is_student_; }
    std::size_t d1() const { return d1_; }
    std::size_t d2() const { return d2_; }

    MvnParams marginal_head_gaussian() const;
    MvnParams marginal_tail_gaussian() const;
    MvtParams marginal_head_student() const;
    MvtParams marginal_tail_student() const;

    Vector conditional_mean(const Vector& x2) const;
    Matrix conditional_cov(const Vector& x2) const;
    double conditional_dof() const; // nu + d2, t case only

    double logpdf_conditional(const Vector& x1, const Vector& x2) const;
    double logpdf_marginal_tail(const Vector& x2) const;

private:
    void init(const Vector& mean, const Matrix& cov);

    bool is_student_ = false;
    double dof_ = 0.0;
    std::size_t d1_ = 0, d2_ = 0;
    Vector mean1_, mean2_;
    Matrix cov11_, cov12_, cov22_;
    Matrix schur_;      // cov11 - cov12 cov22^{-1} cov12'
    Matrix regression_; // cov12 cov22^{-1}
    std::unique_ptr<Cholesky> chol22_;
};

} // namespace gstmar

#endif
