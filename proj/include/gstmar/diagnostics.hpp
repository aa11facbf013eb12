#ifndef GSTMAR_DIAGNOSTICS_HPP
#define GSTMAR_DIAGNOSTICS_HPP

#include <functional>
#include <optional>
#include <string>

#include "gstmar/estimation.hpp"
#include "gstmar/likelihood.hpp"
#include "gstmar/model.hpp"

namespace gstmar {

// Quantile residuals: standard-normal inverse CDF of the conditional
// probability integral transform. Under the true model they are
// approximately IID standard normal.
struct QuantileResiduals {
    Vector values; // Phi^{-1}(pit)
    Vector pit;    // conditional CDF evaluations, clamped into (0,1)
};

QuantileResiduals quantile_residuals(const GStmarModel& model, const Vector& series);

struct AcfResult {
    Vector acf;        // lags 1..L
    double band = 0.0; // +-1.96/sqrt(T)
};

AcfResult residual_acf(const Vector& values, int max_lag);

struct InfoCriteria {
    double aic = 0.0;
    double hqic = 0.0;
    double bic = 0.0;
};

// T is the effective sample size: observations entering the conditional
// sum, i.e. series length minus p.
InfoCriteria information_criteria(double loglik, int n_params, int n_obs);

// Descriptive normality summary. The Jarque-Bera statistic here is a
// plain descriptive quantity; it does not adjust for parameter
// estimation uncertainty.
struct NormalitySummary {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double jarque_bera = 0.0;
    double jb_pvalue = 1.0;
};

NormalitySummary normality_summary(const Vector& values);

// Kolmogorov-Smirnov distance of a sample against a CDF, plus the
// asymptotic p-value of the one-sample statistic.
double ks_statistic(Vector sample, const std::function<double(double)>& cdf);
double ks_pvalue(double d, std::size_t n);

struct FitReport {
    double loglik = 0.0;
    std::string mode; // "exact" | "conditional"
    int n_params = 0;
    int n_obs = 0; // effective T
    InfoCriteria ic;
    Vector acf_resid;
    Vector acf_sq_resid;
    double acf_band = 0.0;
    NormalitySummary normality;
    std::vector<bool> large_dof_flags; // one per Student regime
    std::string caveat;
};

FitReport fit_report(const GStmarModel& model, const Vector& series, double loglik,
                     LikMode mode, int acf_lags = 12, double dof_threshold = 100.0);

// StMAR-first model selection: fit StMAR(p, M) over the grid, rank by the
// information criteria, and re-estimate as a G-StMAR model whenever a dof
// estimate exceeds the threshold.
struct SelectionConfig {
    double dof_threshold = 100.0;
    int n_rounds = 4;
    GaConfig ga;
    LikMode mode = LikMode::exact;
};

struct SelectionCell {
    ModelOrder order;
    bool ok = false;
    double loglik = -HUGE_VAL;
    InfoCriteria ic;
    Vector dof_estimates;
    bool boundary_flagged = false;
    std::string error;
    std::optional<GStmarModel> model;
};

struct SelectionResult {
    std::vector<SelectionCell> stmar_fits;
    std::vector<SelectionCell> gstmar_fits;
    int recommended = -1; // index into gstmar_fits if any, else stmar_fits
    bool recommended_is_gstmar = false;
    std::vector<std::string> trace;
};

SelectionResult select_model(const Vector& series, const std::vector<int>& p_grid,
                             const std::vector<int>& m_grid, const SelectionConfig& cfg);

const SelectionCell* recommended_cell(const SelectionResult& result);

} // namespace gstmar

#endif
