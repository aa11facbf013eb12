#include "gstmar/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gstmar/error.hpp"

namespace gstmar {

namespace {

double log_sum_exp(const double* v, int n) {
    double mx = -HUGE_VAL;
    for (int i = 0; i < n; ++i) mx = std::max(mx, v[i]);
    if (mx == -HUGE_VAL || std::isnan(mx)) return mx;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(v[i] - mx);
    return mx + std::log(s);
}

struct Workspace {
    Vector z;       // centered lag window
    Vector scratch; // triangular-solve buffer
    Vector lw;      // log(alpha_m d_m)
    Vector lc;      // per-regime conditional log density
    Vector mix;     // lw + lc

    explicit Workspace(const ModelOrder& order)
        : z(order.p), scratch(order.p), lw(order.regimes()), lc(order.regimes()),
          mix(order.regimes()) {}
};

// Fills lw (log alpha_m + log d_m) for the lag window ending at series
// index t-1, i.e. (y_{t-p}, ..., y_{t-1}) oldest first. The stationary
// covariances are symmetric Toeplitz, so the quadratic form does not care
// about the window orientation. Also returns the per-regime quadratic
// forms needed by the Student conditional variances.
void weight_terms(const GStmarModel& model, const double* window, Workspace& ws,
                  Vector& quad) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    for (int m = 0; m < m_total; ++m) {
        const double mu = model.moments(m).mean;
        for (int i = 0; i < p; ++i) ws.z[i] = window[i] - mu;
        const double q = model.chol_p(m).quad_form_into(ws.z.data(), ws.scratch.data());
        quad[m] = q;
        double log_dm;
        if (model.regime(m).is_student()) {
            const double nu = *model.regime(m).dof;
            log_dm = model.log_dm_const(m) -
                     0.5 * (p + nu) * std::log1p(q / (nu - 2.0));
        } else {
            log_dm = model.log_dm_const(m) - 0.5 * q;
        }
        ws.lw[m] = model.log_alpha(m) + log_dm;
    }
}

// Per-regime conditional log densities of y given the lag window
// (y_{t-1}, ..., y_{t-p}); the window pointer is oldest first so the
// conditional mean indexes it back to front.
void conditional_terms(const GStmarModel& model, double y, const double* window,
                       const Vector& quad, Workspace& ws) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    for (int m = 0; m < m_total; ++m) {
        const Regime& reg = model.regime(m);
        double mu_t = reg.ar.intercept;
        for (int i = 0; i < p; ++i) mu_t += reg.ar.coeffs[i] * window[p - 1 - i];
        const double resid = y - mu_t;
        if (reg.is_student()) {
            const double nu = *reg.dof;
            const double var_t =
                (nu - 2.0 + quad[m]) / (nu - 2.0 + p) * reg.ar.noise_var;
            ws.lc[m] = model.log_cond_const(m) - 0.5 * std::log(var_t) -
                       0.5 * (1.0 + nu + p) *
                           std::log1p(resid * resid / (var_t * (nu + p - 2.0)));
        } else {
            ws.lc[m] = model.log_cond_const(m) -
                       0.5 * resid * resid / reg.ar.noise_var;
        }
    }
}

LikelihoodEval evaluate_impl(const GStmarModel& model, const Vector& series,
                             LikMode mode, bool parallel) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    if (static_cast<int>(series.size()) < p + 1)
        throw DomainError("series must contain at least p+1 observations");
    const int t_count = static_cast<int>(series.size()) - p;

    LikelihoodEval eval;
    eval.n_obs_effective = t_count;
    eval.max_weights.assign(m_total, 0.0);

    Vector per_obs(t_count);
    Vector max_w(m_total, 0.0);

#ifdef _OPENMP
    const int n_threads = parallel ? omp_get_max_threads() : 1;
#else
    const int n_threads = 1;
    (void)parallel;
#endif

    std::vector<Vector> thread_max(n_threads, Vector(m_total, 0.0));

#pragma omp parallel num_threads(n_threads) if (parallel)
    {
#ifdef _OPENMP
        const int tid = omp_get_thread_num();
#else
        const int tid = 0;
#endif
        Workspace ws(model.order());
        Vector quad(m_total);
        Vector& local_max = thread_max[tid];

#pragma omp for schedule(static)
        for (int k = 0; k < t_count; ++k) {
            const int t = p + k;
            const double* window = series.data() + (t - p);
            weight_terms(model, window, ws, quad);
            conditional_terms(model, series[t], window, quad, ws);
            const double denom = log_sum_exp(ws.lw.data(), m_total);
            for (int m = 0; m < m_total; ++m) {
                ws.mix[m] = ws.lw[m] + ws.lc[m];
                const double w = std::exp(ws.lw[m] - denom);
                if (w > local_max[m]) local_max[m] = w;
            }
            per_obs[k] = log_sum_exp(ws.mix.data(), m_total) - denom;
        }
    }

    for (const auto& tm : thread_max)
        for (int m = 0; m < m_total; ++m) max_w[m] = std::max(max_w[m], tm[m]);
    eval.max_weights = std::move(max_w);

    double total = 0.0;
    for (int k = 0; k < t_count; ++k) {
        if (!std::isfinite(per_obs[k])) {
            eval.finite = false;
            eval.loglik = -HUGE_VAL;
            return eval;
        }
        total += per_obs[k];
    }

    if (mode == LikMode::exact) {
        Vector head(series.begin(), series.begin() + p);
        eval.initial_term = stationary_logdensity(model, head);
        if (!std::isfinite(eval.initial_term)) {
            eval.finite = false;
            eval.loglik = -HUGE_VAL;
            return eval;
        }
        total += eval.initial_term;
    }
    eval.loglik = total;
    return eval;
}

} // namespace

Vector mixing_weights(const GStmarModel& model, const Vector& y_lag) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    if (static_cast<int>(y_lag.size()) != p)
        throw DomainError("lag window length must equal p");
    Workspace ws(model.order());
    Vector quad(m_total);
    // weight_terms expects oldest first; the quadratic form is orientation
    // free so the reversed copy only matters for readability.
    Vector window(y_lag.rbegin(), y_lag.rend());
    weight_terms(model, window.data(), ws, quad);
    const double denom = log_sum_exp(ws.lw.data(), m_total);
    if (!std::isfinite(denom))
        throw LikelihoodError("all regime densities vanished in mixing_weights", -1);
    Vector w(m_total);
    double sum = 0.0;
    for (int m = 0; m < m_total; ++m) {
        w[m] = std::exp(ws.lw[m] - denom);
        sum += w[m];
    }
    for (auto& v : w) v /= sum;
    return w;
}

double conditional_logdensity(const GStmarModel& model, double y, const Vector& y_lag) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    if (static_cast<int>(y_lag.size()) != p)
        throw DomainError("lag window length must equal p");
    Workspace ws(model.order());
    Vector quad(m_total);
    Vector window(y_lag.rbegin(), y_lag.rend());
    weight_terms(model, window.data(), ws, quad);
    conditional_terms(model, y, window.data(), quad, ws);
    const double denom = log_sum_exp(ws.lw.data(), m_total);
    for (int m = 0; m < m_total; ++m) ws.mix[m] = ws.lw[m] + ws.lc[m];
    return log_sum_exp(ws.mix.data(), m_total) - denom;
}

double conditional_density(const GStmarModel& model, double y, const Vector& y_lag) {
    return std::exp(conditional_logdensity(model, y, y_lag));
}

ConditionalMoments conditional_moments(const GStmarModel& model, const Vector& y_lag) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    const int m1 = model.order().m1;
    ConditionalMoments out;
    out.weights = mixing_weights(model, y_lag);
    out.regime_means.resize(m_total);
    out.regime_variances.resize(m_total);

    Workspace ws(model.order());
    Vector quad(m_total);
    Vector window(y_lag.rbegin(), y_lag.rend());
    weight_terms(model, window.data(), ws, quad);

    for (int m = 0; m < m_total; ++m) {
        const Regime& reg = model.regime(m);
        double mu_t = reg.ar.intercept;
        for (int i = 0; i < p; ++i) mu_t += reg.ar.coeffs[i] * y_lag[i];
        out.regime_means[m] = mu_t;
        if (reg.is_student()) {
            const double nu = *reg.dof;
            out.regime_variances[m] =
                (nu - 2.0 + quad[m]) / (nu - 2.0 + p) * reg.ar.noise_var;
        } else {
            out.regime_variances[m] = reg.ar.noise_var;
        }
        out.mean += out.weights[m] * mu_t;
    }
    for (int m = 0; m < m_total; ++m) {
        const double dev = out.regime_means[m] - out.mean;
        out.var_dispersion_part += out.weights[m] * dev * dev;
        if (m < m1)
            out.var_gaussian_part += out.weights[m] * out.regime_variances[m];
        else
            out.var_student_part += out.weights[m] * out.regime_variances[m];
    }
    out.variance = out.var_gaussian_part + out.var_student_part + out.var_dispersion_part;
    return out;
}

double conditional_cdf(const GStmarModel& model, double y, const Vector& y_lag) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    Workspace ws(model.order());
    Vector quad(m_total);
    Vector window(y_lag.rbegin(), y_lag.rend());
    weight_terms(model, window.data(), ws, quad);
    const double denom = log_sum_exp(ws.lw.data(), m_total);
    double cdf = 0.0;
    for (int m = 0; m < m_total; ++m) {
        const Regime& reg = model.regime(m);
        const double w = std::exp(ws.lw[m] - denom);
        double mu_t = reg.ar.intercept;
        for (int i = 0; i < p; ++i) mu_t += reg.ar.coeffs[i] * y_lag[i];
        if (reg.is_student()) {
            const double nu = *reg.dof;
            const double var_t =
                (nu - 2.0 + quad[m]) / (nu - 2.0 + p) * reg.ar.noise_var;
            cdf += w * t_cdf_1d(y, mu_t, var_t, nu + p);
        } else {
            cdf += w * norm_cdf((y - mu_t) / std::sqrt(reg.ar.noise_var));
        }
    }
    return std::min(1.0, std::max(0.0, cdf));
}

double stationary_logdensity(const GStmarModel& model, const Vector& window) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    const int d = static_cast<int>(window.size());
    if (d < 1 || d > p + 1)
        throw DomainError("stationary window length must be in [1, p+1]");

    Vector terms(m_total);
    if (d == p) {
        Workspace ws(model.order());
        Vector quad(m_total);
        weight_terms(model, window.data(), ws, quad);
        for (int m = 0; m < m_total; ++m) terms[m] = ws.lw[m];
    } else {
        for (int m = 0; m < m_total; ++m) {
            const auto& mom = model.moments(m);
            Vector mean(d, mom.mean);
            Matrix cov = mom.gamma_p1.block(0, 0, d, d);
            double logpdf;
            if (model.regime(m).is_student())
                logpdf = mvt_logpdf(window, {mean, cov, *model.regime(m).dof});
            else
                logpdf = mvn_logpdf(window, {mean, cov});
            terms[m] = model.log_alpha(m) + logpdf;
        }
    }
    return log_sum_exp(terms.data(), m_total);
}

double stationary_density(const GStmarModel& model, const Vector& window) {
    return std::exp(stationary_logdensity(model, window));
}

double stationary_cdf_1d(const GStmarModel& model, double y) {
    const int m_total = model.order().regimes();
    double cdf = 0.0;
    for (int m = 0; m < m_total; ++m) {
        const auto& mom = model.moments(m);
        if (model.regime(m).is_student())
            cdf += model.alphas()[m] * t_cdf_1d(y, mom.mean, mom.gamma[0], *model.regime(m).dof);
        else
            cdf += model.alphas()[m] * norm_cdf((y - mom.mean) / std::sqrt(mom.gamma[0]));
    }
    return cdf;
}

LikelihoodEval evaluate_likelihood(const GStmarModel& model, const Vector& series,
                                   LikMode mode) {
    return evaluate_impl(model, series, mode, false);
}

LikelihoodEval evaluate_likelihood_omp(const GStmarModel& model, const Vector& series,
                                       LikMode mode) {
    return evaluate_impl(model, series, mode, true);
}

double log_likelihood(const GStmarModel& model, const Vector& series, LikMode mode,
                      bool parallel) {
    const LikelihoodEval eval = evaluate_impl(model, series, mode, parallel);
    if (!eval.finite) {
        // Re-run serially to locate the failing observation for the report.
        const int p = model.order().p;
        for (int t = p; t < static_cast<int>(series.size()); ++t) {
            Vector lag(p);
            for (int i = 0; i < p; ++i) lag[i] = series[t - 1 - i];
            const double lt = conditional_logdensity(model, series[t], lag);
            if (!std::isfinite(lt)) {
                std::ostringstream msg;
                msg << "non-finite conditional log-density at observation " << t;
                throw LikelihoodError(msg.str(), t);
            }
        }
        throw LikelihoodError("non-finite initial stationary term", 0);
    }
    return eval.loglik;
}

Matrix mixing_weight_series(const GStmarModel& model, const Vector& series) {
    const int p = model.order().p;
    const int m_total = model.order().regimes();
    const int t_count = static_cast<int>(series.size()) - p;
    if (t_count < 1) throw DomainError("series must contain at least p+1 observations");
    Matrix w(t_count, m_total);
    Workspace ws(model.order());
    Vector quad(m_total);
    for (int k = 0; k < t_count; ++k) {
        const double* window = series.data() + k;
        weight_terms(model, window, ws, quad);
        const double denom = log_sum_exp(ws.lw.data(), m_total);
        for (int m = 0; m < m_total; ++m) w(k, m) = std::exp(ws.lw[m] - denom);
    }
    return w;
}

} // namespace gstmar
