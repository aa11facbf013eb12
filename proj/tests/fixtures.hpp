// Shared model fixtures for the tests: the published three-regime spread
// models and a couple of small synthetic ones.

#ifndef GSTMAR_TESTS_FIXTURES_HPP
#define GSTMAR_TESTS_FIXTURES_HPP

#include "gstmar/model.hpp"

namespace fixtures {

using namespace gstmar;

// G-StMAR(5,1,2) point estimates (exact-likelihood fit to the 1954-2019
// TB3MS minus FEDFUNDS spread). sigma^2 of the Gaussian regime uses the
// full-precision value 3.070e-4.
inline GStmarModel spread_512() {
    std::vector<Regime> regimes(3);
    regimes[0].ar = {-0.013, {0.580, -0.079, 0.042, 0.006, 0.209}, 3.070e-4};
    regimes[1].ar = {-0.066, {0.845, -0.038, 0.127, -0.134, 0.073}, 0.541};
    regimes[1].dof = 2.196;
    regimes[2].ar = {-0.011, {0.720, -0.082, 0.151, 0.087, -0.062}, 0.015};
    regimes[2].dof = 4.320;
    return GStmarModel({5, 1, 2}, regimes, {0.043, 0.592, 0.365});
}

// G-StMAR(5,1,1) point estimates from the same application.
inline GStmarModel spread_511() {
    std::vector<Regime> regimes(2);
    regimes[0].ar = {-0.011, {0.587, -0.049, 0.041, 0.006, 0.224}, 3.237e-4};
    regimes[1].ar = {-0.009, {0.821, -0.051, 0.153, -0.052, 0.045}, 4.806};
    regimes[1].dof = 2.007;
    return GStmarModel({5, 1, 1}, regimes, {0.029, 0.971});
}

// Restricted G-StMAR(5,1,2)^r: the AR coefficients are common across
// regimes.
inline GStmarModel spread_512_restricted() {
    const Vector phi{0.782, -0.058, 0.134, -0.040, 0.036};
    std::vector<Regime> regimes(3);
    regimes[0].ar = {-0.007, phi, 3.593e-4};
    regimes[1].ar = {-0.079, phi, 0.256};
    regimes[1].dof = 2.499;
    regimes[2].ar = {-0.011, phi, 0.015};
    regimes[2].dof = 4.778;
    return GStmarModel({5, 1, 2}, regimes, {0.035, 0.600, 0.365}, true);
}

// Small well-separated two-regime model used all over the simulation and
// estimation tests.
inline GStmarModel simple_111(double nu = 5.0) {
    std::vector<Regime> regimes(2);
    regimes[0].ar = {1.2, {0.3}, 0.25};
    regimes[1].ar = {-1.5, {0.6}, 1.0};
    regimes[1].dof = nu;
    return GStmarModel({1, 1, 1}, regimes, {0.45, 0.55});
}

inline GStmarModel gmar_11() {
    std::vector<Regime> regimes(1);
    regimes[0].ar = {0.4, {0.5}, 1.0};
    return GStmarModel({1, 1, 0}, regimes, {1.0});
}

} // namespace fixtures

#endif
