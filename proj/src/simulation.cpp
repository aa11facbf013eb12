#include "gstmar/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "gstmar/error.hpp"

namespace gstmar {

Vector sample_stationary_init(const GStmarModel& model, Rng& rng) {
    const int p = model.order().p;
    const int m = static_cast<int>(rng.categorical(model.alphas()));
    const auto& mom = model.moments(m);
    const Matrix& l = model.chol_p(m).lower();

    Vector z(p);
    for (auto& v : z) v = rng.normal();
    double scale = 1.0;
    if (model.regime(m).is_student()) {
        const double nu = *model.regime(m).dof;
        const double w = rng.chi_square(nu);
        scale = std::sqrt((nu - 2.0) / w);
    }
    Vector out(p, mom.mean);
    for (int i = 0; i < p; ++i) {
        double s = 0.0;
        for (int j = 0; j <= i; ++j) s += l(i, j) * z[j];
        out[i] += scale * s;
    }
    return out;
}

namespace {

SimulatedPath simulate_one(const GStmarModel& model, const SimulationRequest& req,
                           Rng rng) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    SimulatedPath path;
    path.y.resize(req.length);
    path.regime.resize(req.length);
    path.weights = Matrix(req.length, m_total);

    Vector lag; // most recent first
    if (req.stationary_init) {
        lag = sample_stationary_init(model, rng);
    } else {
        if (static_cast<int>(req.init_window.size()) != p)
            throw DomainError("fixed init window must have length p");
        lag = req.init_window;
    }

    for (int t = 0; t < req.length; ++t) {
        const Vector w = mixing_weights(model, lag);
        const int m = static_cast<int>(rng.categorical(w));
        const Regime& reg = model.regime(m);

        double mu_t = reg.ar.intercept;
        for (int i = 0; i < p; ++i) mu_t += reg.ar.coeffs[i] * lag[i];

        double shock;
        if (reg.is_student()) {
            const double nu = *reg.dof;
            // sigma_{m,t}^2 needs the same stationary quadratic form used
            // by the mixing weights.
            const double mu = model.moments(m).mean;
            Vector z(p);
            for (int i = 0; i < p; ++i) z[i] = lag[i] - mu;
            const double q = model.chol_p(m).quad_form(z);
            const double var_t = (nu - 2.0 + q) / (nu - 2.0 + p) * reg.ar.noise_var;
            // unit-variance t(nu+p) shock: scale the classical draw
            const double eps =
                rng.student_t(nu + p) * std::sqrt((nu + p - 2.0) / (nu + p));
            shock = std::sqrt(var_t) * eps;
        } else {
            shock = std::sqrt(reg.ar.noise_var) * rng.normal();
        }

        const double y_t = mu_t + shock;
        path.y[t] = y_t;
        path.regime[t] = m;
        for (int j = 0; j < m_total; ++j) path.weights(t, j) = w[j];

        for (int i = p - 1; i > 0; --i) lag[i] = lag[i - 1];
        if (p > 0) lag[0] = y_t;
    }
    return path;
}

} // namespace

SimulationResult simulate(const GStmarModel& model, const SimulationRequest& req) {
    if (req.length < 1) throw DomainError("simulation length must be positive");
    if (req.n_paths < 1) throw DomainError("n_paths must be positive");

    SimulationResult result;
    result.paths.resize(req.n_paths);
#pragma omp parallel for schedule(dynamic) if (req.n_paths > 1)
    for (int k = 0; k < req.n_paths; ++k)
        result.paths[k] = simulate_one(model, req, Rng::derive(req.seed, k));
    return result;
}

ForecastResult forecast(const GStmarModel& model, const Vector& history, int horizon,
                        int n_paths, const Vector& quantile_levels,
                        std::uint64_t seed) {
    const int p = model.order().p;
    if (horizon < 1) throw DomainError("forecast horizon must be positive");
    if (static_cast<int>(history.size()) < p)
        throw DomainError("history shorter than the AR order");

    SimulationRequest req;
    req.length = horizon;
    req.stationary_init = false;
    req.init_window.resize(p);
    for (int i = 0; i < p; ++i) req.init_window[i] = history[history.size() - 1 - i];
    req.seed = seed;
    req.n_paths = n_paths;

    const SimulationResult sims = simulate(model, req);

    ForecastResult out;
    out.horizons_mean.assign(horizon, 0.0);
    out.quantile_levels = quantile_levels;
    out.quantiles = Matrix(horizon, quantile_levels.size());
    out.n_paths = n_paths;

    Vector column(n_paths);
    for (int h = 0; h < horizon; ++h) {
        double sum = 0.0;
        for (int k = 0; k < n_paths; ++k) {
            column[k] = sims.paths[k].y[h];
            sum += column[k];
        }
        out.horizons_mean[h] = sum / n_paths;
        std::sort(column.begin(), column.end());
        for (std::size_t qi = 0; qi < quantile_levels.size(); ++qi) {
            const double pos = quantile_levels[qi] * (n_paths - 1);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const std::size_t hi = std::min<std::size_t>(lo + 1, n_paths - 1);
            const double frac = pos - lo;
            out.quantiles(h, qi) = (1.0 - frac) * column[lo] + frac * column[hi];
        }
    }
    return out;
}

} // namespace gstmar
