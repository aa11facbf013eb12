#include "gstmar/ar_stationary.hpp"

#include <cmath>
#include <sstream>

#include "gstmar/error.hpp"

namespace gstmar {

double max_ar_root_modulus(const Vector& coeffs) {
    const std::size_t p = coeffs.size();
    if (p == 0) return 0.0;
    if (p == 1) return std::fabs(coeffs[0]);
    // Companion polynomial z^p - phi_1 z^{p-1} - ... - phi_p.
    Vector monic(p);
    for (std::size_t i = 0; i < p; ++i) monic[i] = -coeffs[i];
    double max_mod = 0.0;
    for (const auto& root : poly_roots_monic(monic))
        max_mod = std::max(max_mod, std::abs(root));
    return max_mod;
}

bool is_stationary(const Vector& coeffs, double tol) {
    if (coeffs.empty()) return true;
    return max_ar_root_modulus(coeffs) < 1.0 - tol;
}

RegimeMoments stationary_moments(const ArCoefficients& ar) {
    const std::size_t p = ar.coeffs.size();
    if (!(ar.noise_var > 0.0))
        throw DomainError("stationary_moments requires positive noise variance");
    if (!is_stationary(ar.coeffs)) {
        std::ostringstream msg;
        msg << "AR coefficients are not stationary (max root modulus "
            << max_ar_root_modulus(ar.coeffs) << ")";
        throw StationarityError(msg.str());
    }

    double coeff_sum = 0.0;
    for (double c : ar.coeffs) coeff_sum += c;

    RegimeMoments mom;
    mom.mean = ar.intercept / (1.0 - coeff_sum);

    // Companion matrix Phi.
    Matrix phi(p, p);
    for (std::size_t j = 0; j < p; ++j) phi(0, j) = ar.coeffs[j];
    for (std::size_t i = 1; i < p; ++i) phi(i, i - 1) = 1.0;

    // (I - Phi (x) Phi) vec(Gamma_p) = iota sigma^2, column-stacked vec.
    const std::size_t n = p * p;
    Matrix system = Matrix::identity(n);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            for (std::size_t k = 0; k < p; ++k)
                for (std::size_t l = 0; l < p; ++l)
                    system(j * p + i, l * p + k) -= phi(i, k) * phi(j, l);
    Vector rhs(n, 0.0);
    rhs[0] = ar.noise_var;
    const Vector vec_gamma = gauss_solve(std::move(system), std::move(rhs));

    mom.gamma_p = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            mom.gamma_p(i, j) = vec_gamma[j * p + i];
    // Symmetrize away roundoff so downstream Cholesky sees an exact
    // symmetric matrix.
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            const double v = 0.5 * (mom.gamma_p(i, j) + mom.gamma_p(j, i));
            mom.gamma_p(i, j) = mom.gamma_p(j, i) = v;
        }

    // gamma_p vector = Gamma_p phi; gamma_0 from the Yule-Walker identity.
    const Vector gamma_vec = mom.gamma_p * ar.coeffs;
    double gamma0 = ar.noise_var;
    for (std::size_t i = 0; i < p; ++i) gamma0 += ar.coeffs[i] * gamma_vec[i];

    mom.gamma.resize(p + 1);
    mom.gamma[0] = gamma0;
    for (std::size_t i = 0; i < p; ++i) mom.gamma[i + 1] = gamma_vec[i];

    mom.gamma_p1 = Matrix(p + 1, p + 1);
    mom.gamma_p1(0, 0) = gamma0;
    for (std::size_t i = 0; i < p; ++i) {
        mom.gamma_p1(0, i + 1) = gamma_vec[i];
        mom.gamma_p1(i + 1, 0) = gamma_vec[i];
        for (std::size_t j = 0; j < p; ++j)
            mom.gamma_p1(i + 1, j + 1) = mom.gamma_p(i, j);
    }
    return mom;
}

Vector partials_to_ar(const Vector& partials) {
    const std::size_t p = partials.size();
    Vector a(p, 0.0), prev(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        const double r = partials[k];
        a[k] = r;
        for (std::size_t i = 0; i < k; ++i) a[i] = prev[i] - r * prev[k - 1 - i];
        prev = a;
    }
    return a;
}

Vector sample_stationary_coeffs(int p, Rng& rng, bool boundary, double delta) {
    // The partial-autocorrelation image is exactly the open stationarity
    // region, but draws can land within the eigenvalue tolerance of its
    // edge; those are rejected so the output always passes is_stationary.
    Vector partials(p);
    for (int attempt = 0; attempt < 200; ++attempt) {
        for (int k = 0; k < p; ++k) {
            if (boundary) {
                const double mag = rng.uniform(1.0 - delta, 1.0);
                partials[k] = (rng.uniform() < 0.5) ? -mag : mag;
            } else {
                partials[k] = rng.uniform(-1.0, 1.0);
            }
        }
        const Vector phi = partials_to_ar(partials);
        if (is_stationary(phi)) return phi;
    }
    // Pull the last draw inward until it clears the tolerance.
    for (;;) {
        for (auto& r : partials) r *= 0.9;
        const Vector phi = partials_to_ar(partials);
        if (is_stationary(phi)) return phi;
    }
}

} // namespace gstmar
