#include <doctest.h>

#include <cmath>

#include "gstmar/distributions.hpp"
#include "gstmar/error.hpp"
#include "gstmar/rng.hpp"
#include "oracles.hpp"

using namespace gstmar;

namespace {

Matrix diag2(double a, double b) {
    Matrix m(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

// Random well-conditioned SPD matrix.
Matrix random_spd(int d, Rng& rng) {
    Matrix b(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b(i, j) = rng.normal() / std::sqrt(d);
    Matrix a = b * b.transpose();
    for (int i = 0; i < d; ++i) a(i, i) += 0.5;
    return a;
}

double norm_pdf_ref(double x, double mu, double var) {
    return std::exp(-0.5 * (x - mu) * (x - mu) / var) / std::sqrt(2.0 * M_PI * var);
}

} // namespace

TEST_CASE("standard normal density at the mode") {
    MvnParams params{{0.0}, Matrix::identity(1)};
    CHECK(mvn_pdf({0.0}, params) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
}

TEST_CASE("gaussian density at the mean for general covariance") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 1 + static_cast<int>(rng.uniform() * 5);
        Matrix cov = random_spd(d, rng);
        Vector mu(d);
        for (auto& v : mu) v = rng.normal();
        const Cholesky chol(cov);
        const double expected =
            std::pow(2.0 * M_PI, -0.5 * d) * std::exp(-0.5 * chol.log_det());
        CHECK(mvn_pdf(mu, {mu, cov}) == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("diagonal gaussian factorizes into univariate densities") {
    MvnParams params{{0.0, 0.0}, diag2(1.0, 4.0)};
    const double expected = norm_pdf_ref(1.0, 0.0, 1.0) * norm_pdf_ref(2.0, 0.0, 4.0);
    CHECK(mvn_pdf({1.0, 2.0}, params) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("non positive definite covariance raises a definiteness error") {
    Matrix cov(2, 2);
    cov(0, 0) = 1.0;
    cov(0, 1) = cov(1, 0) = 2.0;
    cov(1, 1) = 1.0;
    try {
        mvn_pdf({0.0, 0.0}, {{0.0, 0.0}, cov});
        FAIL("expected DefinitenessError");
    } catch (const DefinitenessError& e) {
        CHECK(e.pivot_index == 1);
        CHECK(e.pivot_value < 0.0);
    }
}

TEST_CASE("t density normalizer at the mode, dof 4") {
    // C_1(4) = Gamma(2.5) / (sqrt(2 pi) Gamma(2)) = 0.75 / sqrt(2)
    MvtParams params{{0.0}, Matrix::identity(1), 4.0};
    CHECK(mvt_pdf({0.0}, params) ==
          doctest::Approx(0.75 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bivariate t at the mean equals C_2(nu) det^{-1/2}") {
    Rng rng(5);
    Matrix cov = random_spd(2, rng);
    const double nu = 7.5;
    const Cholesky chol(cov);
    const double expected =
        std::exp(log_t_normalizer(2, nu) - 0.5 * chol.log_det());
    CHECK(mvt_pdf({0.3, -0.2}, {{0.3, -0.2}, cov, nu}) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("t density approaches the gaussian as dof grows") {
    const double nu = 1e6;
    double worst = 0.0;
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double t = mvt_pdf({x}, {{0.2}, Matrix::identity(1), nu});
        const double n = mvn_pdf({x}, {{0.2}, Matrix::identity(1)});
        worst = std::max(worst, std::fabs(t - n));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("t density rejects dof <= 2") {
    CHECK_THROWS_AS(mvt_pdf({0.0}, {{0.0}, Matrix::identity(1), 2.0}), DomainError);
    CHECK_THROWS_AS(t_cdf_1d(0.0, 0.0, 1.0, 1.5), DomainError);
}

TEST_CASE("log densities stay finite for huge dof") {
    const double lp = mvt_logpdf({3.0}, {{0.0}, Matrix::identity(1), 1e7});
    CHECK(std::isfinite(lp));
    CHECK(std::isfinite(log_t_normalizer(5, 1e7)));
}

TEST_CASE("univariate densities integrate to one") {
    for (double nu : {2.5, 4.0, 30.0}) {
        const double mass = oracles::integrate_real_line(
            [&](double x) {
                return mvt_pdf({x}, {{0.7}, Matrix::identity(1), nu});
            },
            0.7, 1.0);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
    const double mass_n = oracles::integrate_real_line(
        [&](double x) { return mvn_pdf({x}, {{-1.0}, Matrix::identity(1)}); }, -1.0,
        1.0);
    CHECK(mass_n == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("t cdf basics") {
    CHECK(t_cdf_1d(1.3, 1.3, 2.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t_cdf_1d(1.96, 0.0, 1.0, 1e6) == doctest::Approx(0.975).epsilon(1e-4));
    CHECK(t_cdf_1d(-HUGE_VAL, 0.0, 1.0, 5.0) == 0.0);
    CHECK(t_cdf_1d(HUGE_VAL, 0.0, 1.0, 5.0) == 1.0);

    double prev = -1.0;
    for (double x = -8.0; x <= 8.0; x += 0.05) {
        const double c = t_cdf_1d(x, 0.0, 1.3, 3.2);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("t cdf agrees with quadrature of the density, dof 5") {
    // F(1) for the unit-variance t with nu = 5 via the tan substitution.
    auto integrand = [](double u) {
        const double x = std::tan(u);
        const double jac = 1.0 + x * x;
        return mvt_pdf({x}, {{0.0}, Matrix::identity(1), 5.0}) * jac;
    };
    const double quad =
        oracles::adaptive_simpson(integrand, -M_PI / 2 + 1e-9, std::atan(1.0), 1e-12);
    CHECK(t_cdf_1d(1.0, 0.0, 1.0, 5.0) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("normal quantile inverts the normal cdf") {
    for (double p : {1e-10, 1e-4, 0.1, 0.5, 0.77, 1.0 - 1e-6}) {
        CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("gaussian partition: block diagonal means independence") {
    Matrix cov(3, 3);
    cov(0, 0) = 2.0;
    cov(1, 1) = 1.5;
    cov(2, 2) = 0.5;
    cov(1, 2) = cov(2, 1) = 0.3;
    const PartitionedLaw law(MvnParams{{1.0, -1.0, 0.5}, cov}, 1);
    for (double x2a : {-2.0, 0.0, 3.0}) {
        const Vector mu = law.conditional_mean({x2a, 0.1});
        CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-12));
        const Matrix c = law.conditional_cov({x2a, 0.1});
        CHECK(c(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("student partition at the tail mean reproduces the scale factor") {
    Rng rng(3);
    Matrix cov = random_spd(4, rng);
    Vector mu{0.1, -0.2, 0.3, 0.0};
    const double nu = 6.0;
    const PartitionedLaw law(MvtParams{mu, cov, nu}, 2);
    const Matrix cond = law.conditional_cov({mu[2], mu[3]});

    const PartitionedLaw gauss(MvnParams{mu, cov}, 2);
    const Matrix schur = gauss.conditional_cov({mu[2], mu[3]});
    const double factor = (nu - 2.0) / (nu - 2.0 + 2.0);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(cond(i, j) == doctest::Approx(factor * schur(i, j)).epsilon(1e-12));
    CHECK(law.conditional_dof() == doctest::Approx(nu + 2.0));
}

TEST_CASE("bivariate gaussian with correlation 0.5: conditional law") {
    Matrix cov(2, 2);
    cov(0, 0) = cov(1, 1) = 1.0;
    cov(0, 1) = cov(1, 0) = 0.5;
    const PartitionedLaw law(MvnParams{{0.0, 0.0}, cov}, 1);
    for (double x2 : {-1.5, 0.0, 2.0}) {
        CHECK(law.conditional_mean({x2})[0] == doctest::Approx(0.5 * x2).epsilon(1e-12));
        CHECK(law.conditional_cov({x2})(0, 0) == doctest::Approx(0.75).epsilon(1e-12));
    }
    // Factorization on a grid.
    for (double x1 = -2.0; x1 <= 2.0; x1 += 0.5) {
        for (double x2 = -2.0; x2 <= 2.0; x2 += 0.5) {
            const double joint = mvn_logpdf({x1, x2}, {{0.0, 0.0}, cov});
            const double split =
                law.logpdf_conditional({x1}, {x2}) + law.logpdf_marginal_tail({x2});
            CHECK(joint == doctest::Approx(split).epsilon(1e-11));
        }
    }
}

TEST_CASE("factorization identity holds for random laws of both families") {
    Rng rng(2024);
    for (int rep = 0; rep < 300; ++rep) {
        const int d = 2 + static_cast<int>(rng.uniform() * 5); // 2..6
        const int d1 = 1 + static_cast<int>(rng.uniform() * (d - 1));
        const Matrix cov = random_spd(d, rng);
        Vector mu(d), x(d);
        for (int i = 0; i < d; ++i) {
            mu[i] = rng.normal();
            x[i] = mu[i] + 2.0 * rng.normal();
        }
        const Vector x1(x.begin(), x.begin() + d1);
        const Vector x2(x.begin() + d1, x.end());

        const PartitionedLaw gauss(MvnParams{mu, cov}, d1);
        const double g_joint = mvn_logpdf(x, {mu, cov});
        const double g_split =
            gauss.logpdf_conditional(x1, x2) + gauss.logpdf_marginal_tail(x2);
        CHECK(std::fabs(g_joint - g_split) < 1e-10);

        const double nu = 2.3 + 20.0 * rng.uniform();
        const PartitionedLaw student(MvtParams{mu, cov, nu}, d1);
        const double t_joint = mvt_logpdf(x, {mu, cov, nu});
        const double t_split =
            student.logpdf_conditional(x1, x2) + student.logpdf_marginal_tail(x2);
        CHECK(std::fabs(t_joint - t_split) < 1e-10);
    }
}
