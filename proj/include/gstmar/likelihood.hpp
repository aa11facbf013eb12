#ifndef GSTMAR_LIKELIHOOD_HPP
#define GSTMAR_LIKELIHOOD_HPP

#include "gstmar/model.hpp"

namespace gstmar {

enum class LikMode { exact, conditional };

// Time-varying mixing weights alpha_{m,t} given the lag window
// y_lag = (y_{t-1}, ..., y_{t-p}), most recent first. Computed in log
// space with max-subtraction and renormalized to sum exactly to one.
Vector mixing_weights(const GStmarModel& model, const Vector& y_lag);

// One-step conditional density of y given the lag window: a mixture of
// the Gaussian regimes' homoscedastic normals and the Student regimes'
// heteroscedastic t laws. The log version is the canonical implementation.
double conditional_logdensity(const GStmarModel& model, double y, const Vector& y_lag);
double conditional_density(const GStmarModel& model, double y, const Vector& y_lag);

// Conditional mean and the three-part conditional variance decomposition:
// Gaussian-regime part, Student-regime part and the dispersion of the
// regime means around the mixture mean.
struct ConditionalMoments {
    double mean = 0.0;
    double variance = 0.0;
    double var_gaussian_part = 0.0;
    double var_student_part = 0.0;
    double var_dispersion_part = 0.0;
    Vector regime_means;
    Vector regime_variances; // sigma_m^2 or sigma_{m,t}^2
    Vector weights;
};

ConditionalMoments conditional_moments(const GStmarModel& model, const Vector& y_lag);

// Conditional CDF of y given the lag window (mixture of Gaussian CDFs and
// 1-dim t CDFs); the probability integral transform of the diagnostics.
double conditional_cdf(const GStmarModel& model, double y, const Vector& y_lag);

// Stationary density of a window (y_t, ..., y_{t-h}) for any h+1 <= p+1:
// a constant-weight mixture of the regimes' marginal Gaussian/t laws,
// whose covariances are the leading Toeplitz blocks of Gamma_{p+1}.
double stationary_logdensity(const GStmarModel& model, const Vector& window);
double stationary_density(const GStmarModel& model, const Vector& window);

// Stationary CDF of a single observation (window length 1).
double stationary_cdf_1d(const GStmarModel& model, double y);

// Full evaluation pass over a series. The series is ordered oldest first
// and contains p initial values followed by T modelled observations.
struct LikelihoodEval {
    double loglik = 0.0;       // requested mode
    double initial_term = 0.0; // log stationary density of the first p values
    int n_obs_effective = 0;   // T
    Vector max_weights;        // per-regime max_t alpha_{m,t}
    bool finite = true;
};

// Serial reference implementation.
LikelihoodEval evaluate_likelihood(const GStmarModel& model, const Vector& series,
                                   LikMode mode);
// OpenMP kernel; identical output (per-observation terms are reduced in
// index order, so the sum matches the serial path bit for bit).
LikelihoodEval evaluate_likelihood_omp(const GStmarModel& model, const Vector& series,
                                       LikMode mode);

// Convenience wrappers returning only the total; they throw
// LikelihoodError (with the offending index) on non-finite terms.
double log_likelihood(const GStmarModel& model, const Vector& series, LikMode mode,
                      bool parallel = false);

// T x M matrix of mixing weights along the sample.
Matrix mixing_weight_series(const GStmarModel& model, const Vector& series);

} // namespace gstmar

#endif
