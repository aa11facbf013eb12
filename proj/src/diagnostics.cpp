#include "gstmar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gstmar/error.hpp"

namespace gstmar {

namespace {
constexpr double kPitClamp = 1e-12;
}

QuantileResiduals quantile_residuals(const GStmarModel& model, const Vector& series) {
    const int p = model.order().p;
    const int t_count = static_cast<int>(series.size()) - p;
    if (t_count < 1) throw DomainError("series must contain at least p+1 observations");

    QuantileResiduals qr;
    qr.pit.resize(t_count);
    qr.values.resize(t_count);
    Vector lag(p);
    for (int k = 0; k < t_count; ++k) {
        const int t = p + k;
        for (int i = 0; i < p; ++i) lag[i] = series[t - 1 - i];
        double u = conditional_cdf(model, series[t], lag);
        u = std::min(1.0 - kPitClamp, std::max(kPitClamp, u));
        qr.pit[k] = u;
        qr.values[k] = norm_quantile(u);
    }
    return qr;
}

AcfResult residual_acf(const Vector& values, int max_lag) {
    const int n = static_cast<int>(values.size());
    if (max_lag >= n) throw DomainError("max_lag must be smaller than the sample size");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mn == *mx)
        throw DomainError("degenerate input: constant series, ACF undefined");
    double c0 = 0.0;
    for (double v : values) c0 += (v - mean) * (v - mean);
    c0 /= n;
    if (!(c0 > 0.0))
        throw DomainError("degenerate input: sample variance is zero, ACF undefined");

    AcfResult out;
    out.acf.resize(max_lag);
    out.band = 1.96 / std::sqrt(static_cast<double>(n));
    for (int lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (int t = lag; t < n; ++t) c += (values[t] - mean) * (values[t - lag] - mean);
        out.acf[lag - 1] = c / (n * c0);
    }
    return out;
}

InfoCriteria information_criteria(double loglik, int n_params, int n_obs) {
    if (n_params < 1) throw DomainError("information criteria need n_params >= 1");
    if (n_obs <= 1) throw DomainError("information criteria need n_obs > 1");
    const double t = static_cast<double>(n_obs);
    InfoCriteria ic;
    ic.aic = -2.0 * loglik + 2.0 * n_params;
    ic.bic = -2.0 * loglik + n_params * std::log(t);
    ic.hqic = -2.0 * loglik + 2.0 * n_params * std::log(std::log(t));
    return ic;
}

NormalitySummary normality_summary(const Vector& values) {
    const double n = static_cast<double>(values.size());
    if (n < 4) throw DomainError("normality summary needs at least 4 observations");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    NormalitySummary out;
    out.skewness = m3 / std::pow(m2, 1.5);
    out.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    out.jarque_bera =
        n / 6.0 * (out.skewness * out.skewness +
                   0.25 * out.excess_kurtosis * out.excess_kurtosis);
    out.jb_pvalue = std::exp(-0.5 * out.jarque_bera); // chi^2(2) upper tail
    return out;
}

double ks_statistic(Vector sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, sum));
}

FitReport fit_report(const GStmarModel& model, const Vector& series, double loglik,
                     LikMode mode, int acf_lags, double dof_threshold) {
    FitReport report;
    report.loglik = loglik;
    report.mode = mode == LikMode::exact ? "exact" : "conditional";
    report.n_params = model.order().param_count(model.shared_ar());
    report.n_obs = static_cast<int>(series.size()) - model.order().p;
    report.ic = information_criteria(loglik, report.n_params, report.n_obs);

    const QuantileResiduals qr = quantile_residuals(model, series);
    const AcfResult acf = residual_acf(qr.values, acf_lags);
    Vector squared(qr.values.size());
    for (std::size_t i = 0; i < squared.size(); ++i)
        squared[i] = qr.values[i] * qr.values[i];
    const AcfResult acf_sq = residual_acf(squared, acf_lags);
    report.acf_resid = acf.acf;
    report.acf_sq_resid = acf_sq.acf;
    report.acf_band = acf.band;
    report.normality = normality_summary(qr.values);
    for (int m = model.order().m1; m < model.order().regimes(); ++m)
        report.large_dof_flags.push_back(*model.regime(m).dof > dof_threshold);
    report.caveat =
        "normality and autocorrelation summaries are descriptive only; they do "
        "not adjust for parameter estimation uncertainty";
    return report;
}

namespace {

SelectionCell fit_cell(const Vector& series, const ModelOrder& order,
                       const SelectionConfig& cfg) {
    SelectionCell cell;
    cell.order = order;
    try {
        const EstimationResult est =
            estimate(series, order, cfg.n_rounds, cfg.ga, cfg.mode);
        cell.ok = true;
        cell.loglik = est.loglik;
        cell.ic = information_criteria(est.loglik, order.param_count(false),
                                       est.n_obs_effective);
        cell.boundary_flagged = est.boundary_flagged;
        for (int m = order.m1; m < order.regimes(); ++m)
            cell.dof_estimates.push_back(*est.model.regime(m).dof);
        cell.model = est.model;
    } catch (const Error& e) {
        cell.error = e.what();
    }
    return cell;
}

} // namespace

SelectionResult select_model(const Vector& series, const std::vector<int>& p_grid,
                             const std::vector<int>& m_grid, const SelectionConfig& cfg) {
    if (p_grid.empty() || m_grid.empty())
        throw DomainError("select_model needs nonempty order grids");

    SelectionResult result;
    for (int p : p_grid) {
        for (int m : m_grid) {
            ModelOrder order{p, 0, m}; // StMAR(p, M) == G-StMAR(p, 0, M)
            SelectionCell cell = fit_cell(series, order, cfg);
            std::ostringstream line;
            line << "StMAR(" << p << "," << m << "): ";
            if (cell.ok) {
                line << "loglik=" << cell.loglik << " BIC=" << cell.ic.bic;
                for (std::size_t i = 0; i < cell.dof_estimates.size(); ++i)
                    line << " nu" << (i + 1) << "=" << cell.dof_estimates[i];
                if (cell.boundary_flagged) line << " [near stationarity boundary]";
            } else {
                line << "failed: " << cell.error;
            }
            result.trace.push_back(line.str());
            result.stmar_fits.push_back(std::move(cell));
        }
    }

    // Rank the StMAR grid by BIC; ties and failures sink to the back.
    std::vector<int> ranking(result.stmar_fits.size());
    for (std::size_t i = 0; i < ranking.size(); ++i) ranking[i] = static_cast<int>(i);
    std::sort(ranking.begin(), ranking.end(), [&](int a, int b) {
        const auto& ca = result.stmar_fits[a];
        const auto& cb = result.stmar_fits[b];
        if (ca.ok != cb.ok) return ca.ok;
        if (ca.ic.bic != cb.ic.bic) return ca.ic.bic < cb.ic.bic;
        return a < b;
    });

    // The recommendation follows the top-ranked usable StMAR cell: its
    // G-StMAR conversion when it carries large dof estimates, the cell
    // itself otherwise. Lower-ranked cells with large dof are converted
    // too so the report shows the whole path.
    int top_cell = -1;
    for (int idx : ranking)
        if (result.stmar_fits[idx].ok) { top_cell = idx; break; }

    for (int idx : ranking) {
        const SelectionCell& stmar = result.stmar_fits[idx];
        if (!stmar.ok) continue;
        int n_large = 0;
        for (double nu : stmar.dof_estimates)
            if (nu > cfg.dof_threshold) ++n_large;
        if (n_large == 0) {
            if (idx == top_cell) {
                result.recommended = idx;
                result.recommended_is_gstmar = false;
                std::ostringstream line;
                line << "recommend StMAR(" << stmar.order.p << "," << stmar.order.m2
                     << "): no large dof estimates";
                result.trace.push_back(line.str());
            }
            continue;
        }
        ModelOrder converted{stmar.order.p, n_large, stmar.order.regimes() - n_large};
        SelectionCell cell = fit_cell(series, converted, cfg);
        std::ostringstream line;
        line << "large dof in StMAR(" << stmar.order.p << "," << stmar.order.m2
             << ") -> G-StMAR(" << converted.p << "," << converted.m1 << ","
             << converted.m2 << "): ";
        line << (cell.ok ? "ok" : ("failed: " + cell.error));
        if (cell.ok) line << " loglik=" << cell.loglik << " BIC=" << cell.ic.bic;
        result.trace.push_back(line.str());
        const bool usable = cell.ok;
        result.gstmar_fits.push_back(std::move(cell));
        if (idx == top_cell) {
            if (usable) {
                result.recommended = static_cast<int>(result.gstmar_fits.size()) - 1;
                result.recommended_is_gstmar = true;
            } else {
                result.recommended = idx;
                result.recommended_is_gstmar = false;
            }
        }
    }
    return result;
}

const SelectionCell* recommended_cell(const SelectionResult& result) {
    if (result.recommended < 0) return nullptr;
    if (result.recommended_is_gstmar)
        return &result.gstmar_fits[result.recommended];
    return &result.stmar_fits[result.recommended];
}

} // namespace gstmar
