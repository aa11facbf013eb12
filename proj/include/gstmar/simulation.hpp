#ifndef GSTMAR_SIMULATION_HPP
#define GSTMAR_SIMULATION_HPP

#include <cstdint>

#include "gstmar/likelihood.hpp"
#include "gstmar/model.hpp"
#include "gstmar/rng.hpp"

namespace gstmar {

struct SimulationRequest {
    int length = 0;                 // T
    bool stationary_init = true;    // otherwise use init_window
    Vector init_window;             // (y_0, ..., y_{-p+1}), most recent first
    std::uint64_t seed = 1;
    int n_paths = 1;
};

// One simulated path: values, the regime that generated each observation
// and the mixing weights that were in force when it was drawn.
struct SimulatedPath {
    Vector y;                 // length T
    std::vector<int> regime;  // length T
    Matrix weights;           // T x M
};

struct SimulationResult {
    std::vector<SimulatedPath> paths;
};

// Draws one window from the stationary p-dim mixture law: pick a regime
// by its alpha_m, then a Gaussian draw or a chi-square scale-mixture t
// draw with the regime's Toeplitz covariance. Returned most recent first.
Vector sample_stationary_init(const GStmarModel& model, Rng& rng);

// Iterates the defining recursion: at each step the regime is drawn from
// the time-varying mixing weights, the Gaussian regimes add a constant
// variance shock and the Student regimes a heteroscedastic unit-variance
// t shock. Paths use independent derived streams, so the result does not
// depend on scheduling and is reproducible from the seed alone.
SimulationResult simulate(const GStmarModel& model, const SimulationRequest& req);

struct ForecastResult {
    Vector horizons_mean;      // length H
    Vector quantile_levels;    // requested levels
    Matrix quantiles;          // H x levels
    int n_paths = 0;
};

// Monte Carlo predictive distribution from the last p observations of
// history.
ForecastResult forecast(const GStmarModel& model, const Vector& history, int horizon,
                        int n_paths, const Vector& quantile_levels,
                        std::uint64_t seed);

} // namespace gstmar

#endif
