#ifndef GSTMAR_AR_STATIONARY_HPP
#define GSTMAR_AR_STATIONARY_HPP

#include "gstmar/linalg.hpp"
#include "gstmar/rng.hpp"

namespace gstmar {

// One linear AR(p) component: z_t = phi0 + sum_i phi_i z_{t-i} + sigma_t eps_t.
struct ArCoefficients {
    double intercept = 0.0;   // phi0
    Vector coeffs;            // phi_1 .. phi_p
    double noise_var = 1.0;   // sigma^2
};

// Stationary mean and autocovariance structure of an AR(p) component.
// gamma holds gamma_0 .. gamma_p; both Toeplitz matrices are kept because
// the mixture needs the p-dim law for mixing weights and the (p+1)-dim law
// for the joint distribution of (z_t, z_{t-1}).
struct RegimeMoments {
    double mean = 0.0;
    Vector gamma;           // length p+1
    Matrix gamma_p;         // p x p
    Matrix gamma_p1;        // (p+1) x (p+1)
};

// Eigenvalue moduli must stay below 1 - tol to count as stationary;
// near-unit-root vectors make Gamma_p numerically singular.
constexpr double kStationarityTol = 1e-8;

// Largest companion-matrix eigenvalue modulus of phi_1..phi_p.
double max_ar_root_modulus(const Vector& coeffs);

bool is_stationary(const Vector& coeffs, double tol = kStationarityTol);

// Solves vec(Gamma_p) = (I - Phi (x) Phi)^{-1} iota sigma^2 as a dense
// p^2 x p^2 system and assembles Gamma_{p+1} from (gamma_0, gamma_p, Gamma_p).
RegimeMoments stationary_moments(const ArCoefficients& ar);

// Maps partial autocorrelations in (-1,1)^p to AR coefficients
// (Levinson-Durbin recursion); the image is exactly the stationarity region.
Vector partials_to_ar(const Vector& partials);

// Draws a stationary coefficient vector. In boundary mode the partial
// autocorrelations are drawn with |r| in (1-delta, 1), which lands the
// vector near the edge of the stationarity region.
Vector sample_stationary_coeffs(int p, Rng& rng, bool boundary = false,
                                double delta = 0.01);

} // namespace gstmar

#endif
