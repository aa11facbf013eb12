// Command-line front end: fit / simulate / diagnose / select / forecast /
// ingest. CSV in, JSON and CSV out; everything deterministic under a
// fixed --seed. Thread count follows OMP_NUM_THREADS.

#include <cmath>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gstmar/error.hpp"
#include "gstmar/estimation.hpp"
#include "gstmar/io.hpp"
#include "gstmar/model.hpp"

using namespace gstmar;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitConstraint = 2;

std::string now_iso() {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

Vector parse_quantiles(const std::string& csv) {
    Vector out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const double q = std::stod(tok);
        if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile levels must lie in (0,1)");
        out.push_back(q);
    }
    if (out.empty()) throw DomainError("no quantile levels given");
    return out;
}

int run_fit(const std::string& data_path, int p, int m1, int m2,
            const std::string& mode_str, int rounds, std::uint64_t seed,
            bool shared_ar, const std::string& config_path,
            const std::string& out_path, const std::string& report_path,
            bool verbose) {
    const ModelOrder order{p, m1, m2};
    if (!order.valid()) {
        std::cerr << "usage error: need p >= 1 and m1 + m2 >= 1\n";
        return kExitParse;
    }
    const SeriesFile data = load_series_csv(data_path);
    const LikMode mode = mode_str == "conditional" ? LikMode::conditional : LikMode::exact;

    GaConfig cfg;
    if (!config_path.empty()) cfg = ga_config_from_json(read_text_file(config_path));
    cfg.seed = seed;
    cfg.verbose = verbose;

    const EstimationResult est = estimate(data.values, order, rounds, cfg, mode, shared_ar);

    ModelMeta meta{now_iso(), seed, data_hash(data.values)};
    write_text_file(out_path, model_to_json(est.model, meta));

    FitReport report = fit_report(est.model, data.values, est.loglik, mode);
    if (!report_path.empty()) write_text_file(report_path, fit_report_to_json(report));

    std::printf("loglik=%.6f aic=%.3f hqic=%.3f bic=%.3f identified=%s hessian_ok=%s\n",
                est.loglik, report.ic.aic, report.ic.hqic, report.ic.bic,
                est.identified ? "yes" : "no", est.hessian_ok ? "yes" : "no");
    if (est.std_errors) {
        std::printf("std_errors:");
        for (double se : *est.std_errors) std::printf(" %.4g", se);
        std::printf("\n");
    }
    if (est.model.dof_clamped())
        std::fprintf(stderr, "warning: a dof estimate was clamped at %g\n", kMaxDof);
    return est.identified ? kExitOk : kExitConstraint;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian / Student's t mixture autoregression toolkit"};
    app.require_subcommand(1);

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "two-phase maximum likelihood estimation");
    std::string fit_data, fit_mode = "exact", fit_config, fit_out = "model.json",
                fit_report_path;
    int fit_p = 1, fit_m1 = 0, fit_m2 = 0, fit_rounds = 20;
    std::uint64_t fit_seed = 1;
    bool fit_shared = false, fit_verbose = false;
    fit->add_option("--data", fit_data, "series CSV")->required();
    fit->add_option("--p", fit_p, "AR order")->required();
    fit->add_option("--m1", fit_m1, "Gaussian regimes")->required();
    fit->add_option("--m2", fit_m2, "Student regimes")->required();
    fit->add_option("--mode", fit_mode, "exact|conditional")
        ->check(CLI::IsMember({"exact", "conditional"}));
    fit->add_option("--rounds", fit_rounds, "estimation rounds");
    fit->add_option("--seed", fit_seed, "RNG seed");
    fit->add_flag("--shared-ar", fit_shared, "force common AR coefficients");
    fit->add_option("--config", fit_config, "GA config JSON");
    fit->add_option("--out", fit_out, "model JSON output");
    fit->add_option("--report", fit_report_path, "fit report JSON output");
    fit->add_flag("--verbose", fit_verbose, "GA progress to stderr");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "sample paths from a model");
    std::string sim_model, sim_init = "stationary", sim_out = "simulation.csv";
    int sim_length = 100, sim_paths = 1;
    std::uint64_t sim_seed = 1;
    sim->add_option("--model", sim_model, "model JSON")->required();
    sim->add_option("--length", sim_length, "observations per path");
    sim->add_option("--paths", sim_paths, "number of paths");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--init", sim_init, "stationary | last:<data.csv>");
    sim->add_option("--out", sim_out, "CSV output");

    // ---- diagnose ----
    auto* diag = app.add_subcommand("diagnose", "quantile residual diagnostics");
    std::string diag_model, diag_data, diag_out = "diagnostics.csv", diag_report;
    int diag_lags = 12;
    diag->add_option("--model", diag_model, "model JSON")->required();
    diag->add_option("--data", diag_data, "series CSV")->required();
    diag->add_option("--lags", diag_lags, "ACF lags");
    diag->add_option("--out", diag_out, "tidy plot CSV output");
    diag->add_option("--report", diag_report, "fit report JSON output");

    // ---- select ----
    auto* sel = app.add_subcommand("select", "StMAR-first model selection");
    std::string sel_data, sel_out = "selection.txt";
    int sel_pmax = 3, sel_mmax = 2, sel_rounds = 4;
    std::uint64_t sel_seed = 1;
    double sel_dof = 100.0;
    sel->add_option("--data", sel_data, "series CSV")->required();
    sel->add_option("--pmax", sel_pmax, "largest AR order");
    sel->add_option("--mmax", sel_mmax, "largest regime count");
    sel->add_option("--rounds", sel_rounds, "estimation rounds per cell");
    sel->add_option("--seed", sel_seed, "RNG seed");
    sel->add_option("--dof-threshold", sel_dof, "large-dof trigger");
    sel->add_option("--out", sel_out, "trace output");

    // ---- forecast ----
    auto* fc = app.add_subcommand("forecast", "Monte Carlo predictive bands");
    std::string fc_model, fc_data, fc_out = "forecast.csv",
                fc_quant = "0.025,0.25,0.5,0.75,0.975";
    int fc_h = 12, fc_paths = 5000;
    std::uint64_t fc_seed = 1;
    fc->add_option("--model", fc_model, "model JSON")->required();
    fc->add_option("--data", fc_data, "series CSV")->required();
    fc->add_option("--horizon", fc_h, "forecast horizon");
    fc->add_option("--paths", fc_paths, "Monte Carlo paths");
    fc->add_option("--quantiles", fc_quant, "comma separated levels");
    fc->add_option("--seed", fc_seed, "RNG seed");
    fc->add_option("--out", fc_out, "CSV output");

    // ---- ingest ----
    auto* ing = app.add_subcommand("ingest", "build a spread series from two rate files");
    std::string ing_a, ing_b, ing_first, ing_last, ing_out = "spread.csv";
    ing->add_option("--a", ing_a, "first series CSV")->required();
    ing->add_option("--b", ing_b, "second series CSV")->required();
    ing->add_option("--first", ing_first, "first month YYYY-MM");
    ing->add_option("--last", ing_last, "last month YYYY-MM");
    ing->add_option("--out", ing_out, "spread CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit)
            return run_fit(fit_data, fit_p, fit_m1, fit_m2, fit_mode, fit_rounds,
                           fit_seed, fit_shared, fit_config, fit_out, fit_report_path,
                           fit_verbose);

        if (*sim) {
            const GStmarModel model = model_from_json(read_text_file(sim_model));
            SimulationRequest req;
            req.length = sim_length;
            req.n_paths = sim_paths;
            req.seed = sim_seed;
            if (sim_init == "stationary") {
                req.stationary_init = true;
            } else if (sim_init.rfind("last:", 0) == 0) {
                const SeriesFile data = load_series_csv(sim_init.substr(5));
                const int p = model.order().p;
                if (static_cast<int>(data.values.size()) < p)
                    throw DomainError("init data shorter than the model order");
                req.stationary_init = false;
                req.init_window.resize(p);
                for (int i = 0; i < p; ++i)
                    req.init_window[i] = data.values[data.values.size() - 1 - i];
            } else {
                std::cerr << "usage error: --init must be 'stationary' or 'last:<csv>'\n";
                return kExitParse;
            }
            write_text_file(sim_out, simulation_csv(simulate(model, req)));
            return kExitOk;
        }

        if (*diag) {
            const GStmarModel model = model_from_json(read_text_file(diag_model));
            const SeriesFile data = load_series_csv(diag_data);
            if (static_cast<int>(data.values.size()) <= model.order().p)
                throw ConstraintError("series shorter than the model order", {});
            write_text_file(diag_out, diagnostics_csv(model, data.values, diag_lags));
            if (!diag_report.empty()) {
                const double ll =
                    log_likelihood(model, data.values, LikMode::exact, true);
                write_text_file(diag_report,
                                fit_report_to_json(fit_report(model, data.values, ll,
                                                              LikMode::exact, diag_lags)));
            }
            return kExitOk;
        }

        if (*sel) {
            const SeriesFile data = load_series_csv(sel_data);
            SelectionConfig cfg;
            cfg.dof_threshold = sel_dof;
            cfg.n_rounds = sel_rounds;
            cfg.ga.seed = sel_seed;
            std::vector<int> p_grid, m_grid;
            for (int p = 1; p <= sel_pmax; ++p) p_grid.push_back(p);
            for (int m = 1; m <= sel_mmax; ++m) m_grid.push_back(m);
            const SelectionResult res = select_model(data.values, p_grid, m_grid, cfg);
            std::ostringstream os;
            for (const auto& line : res.trace) os << line << '\n';
            if (const SelectionCell* rec = recommended_cell(res)) {
                os << "recommendation: G-StMAR(" << rec->order.p << "," << rec->order.m1
                   << "," << rec->order.m2 << ") loglik=" << rec->loglik
                   << " bic=" << rec->ic.bic << '\n';
            } else {
                os << "recommendation: none (all cells failed)\n";
            }
            write_text_file(sel_out, os.str());
            std::cout << os.str();
            return kExitOk;
        }

        if (*fc) {
            const GStmarModel model = model_from_json(read_text_file(fc_model));
            const SeriesFile data = load_series_csv(fc_data);
            if (static_cast<int>(data.values.size()) < model.order().p)
                throw ConstraintError("series shorter than the model order", {});
            const Vector levels = parse_quantiles(fc_quant);
            const ForecastResult res =
                forecast(model, data.values, fc_h, fc_paths, levels, fc_seed);
            write_text_file(fc_out, forecast_csv(res));
            return kExitOk;
        }

        if (*ing) {
            const SeriesFile a = load_series_csv(ing_a);
            const SeriesFile b = load_series_csv(ing_b);
            const SeriesFile spread = ingest_spread(a, b, ing_first, ing_last);
            save_series_csv(spread, ing_out);
            std::printf("wrote %zu observations (%s .. %s)\n", spread.values.size(),
                        spread.dates.front().c_str(), spread.dates.back().c_str());
            return kExitOk;
        }
    } catch (const IngestError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const ConstraintError& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (const auto& v : e.violations) std::cerr << "  - " << v << '\n';
        return kExitConstraint;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConstraint;
    }
    return kExitParse;
}
