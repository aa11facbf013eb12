// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails. Criteria 1, 10 and 11 evaluate against the
// vendored spread snapshot in data/ (see data/README_data.md for its
// provenance and data/refresh_fred_spread.py for regenerating it from
// the primary source).

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gstmar/diagnostics.hpp"
#include "gstmar/error.hpp"
#include "gstmar/estimation.hpp"
#include "gstmar/io.hpp"
#include "gstmar/likelihood.hpp"
#include "gstmar/model.hpp"
#include "gstmar/simulation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gstmar;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Vector spread_series(const std::string& data_dir) {
    return load_series_csv(data_dir + "/tbff_spread_1954_2019.csv").values;
}

Vector simulate_series(const GStmarModel& model, int length, std::uint64_t seed) {
    SimulationRequest req;
    req.length = length;
    req.seed = seed;
    return simulate(model, req).paths[0].y;
}

// ---------------------------------------------------------------------------

// Shared 20-round re-estimation of the three-regime model on the
// vendored spread (used by criteria 1 and 11).
const EstimationResult* spread_refit(const Vector& spread) {
    static const EstimationResult* cached = [&]() -> const EstimationResult* {
        GaConfig cfg;
        cfg.seed = 20240501;
        cfg.generations = 300;
        cfg.smart_mutation_start = 180;
        try {
            return new EstimationResult(
                estimate(spread, {5, 1, 2}, 20, cfg, LikMode::exact));
        } catch (const Error& e) {
            std::fprintf(stderr, "spread re-estimation failed: %s\n", e.what());
            return nullptr;
        }
    }();
    return cached;
}

void criterion_1(const Vector& spread) {
    const GStmarModel model = fixtures::spread_512();
    const double at_published = log_likelihood(model, spread, LikMode::exact, true);
    const bool a = std::fabs(at_published - 322.121) <= 2.0;

    const EstimationResult* est = spread_refit(spread);
    const bool b = est && est->loglik >= 321.0;

    std::ostringstream os;
    os << "Likelihood reproduction: exact loglik at the published estimates = "
       << at_published << " (target 322.121 +- 2); 20-round re-estimation best = "
       << (est ? est->loglik : std::nan("")) << " (target >= 321)";
    report(1, a && b, os.str());
}

void criterion_2() {
    const InfoCriteria ic = information_criteria(322.121, 25, 776);
    const bool a = std::round(ic.aic) == -594.0 && std::round(ic.hqic) == -549.0 &&
                   std::round(ic.bic) == -478.0;
    const InfoCriteria ic2 = information_criteria(309.165, 17, 776);
    const double discrepancy = std::fabs(std::round(ic2.aic) - (-586.0));
    const bool b = discrepancy <= 3.0;
    std::ostringstream os;
    os << "Information criteria: (AIC,HQIC,BIC)(322.121,25,776) rounds to (" << ic.aic
       << "," << ic.hqic << "," << ic.bic << ") -> (-594,-549,-478); "
       << "G-StMAR(5,1,1) k=17 AIC discrepancy = " << discrepancy
       << " (<= 3, documented; k=16 reproduces -586 exactly)";
    report(2, a && b, os.str());
}

void criterion_3() {
    const UnconditionalMoments um = unconditional_moments(fixtures::spread_512());
    const bool pass = std::fabs(um.regime_means[0] - (-0.055)) <= 0.002 &&
                      std::fabs(um.mean - (-0.331)) <= 0.002 &&
                      std::fabs(um.autocov[0] - 1.313) <= 0.002;
    std::ostringstream os;
    os << "Published-model stationary statistics: mu_1 = " << um.regime_means[0]
       << " (-0.055 +- 0.002), mu_y = " << um.mean << " (-0.331 +- 0.002), gamma_0 = "
       << um.autocov[0] << " (1.313 +- 0.002)";
    report(3, pass, os.str());
}

void criterion_4() {
    // Fast-mixing two-regime model so that Monte Carlo errors over one
    // path are meaningful.
    std::vector<Regime> regimes(2);
    regimes[0].ar = {0.2, {0.3}, 1.0};
    regimes[1].ar = {-0.2, {0.4}, 1.5};
    regimes[1].dof = 6.0;
    const GStmarModel model({1, 1, 1}, regimes, {0.45, 0.55});

    const int n = 1000000;
    const Vector y = simulate_series(model, n, 404);
    const UnconditionalMoments um = unconditional_moments(model);

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= n;

    // Batch-means standard errors account for serial dependence.
    const int batch = 5000, nb = n / batch;
    double se_mean = 0.0, se_var = 0.0;
    for (int b = 0; b < nb; ++b) {
        double bm = 0.0, bv = 0.0;
        for (int i = 0; i < batch; ++i) {
            const double v = y[b * batch + i];
            bm += v;
            bv += (v - mean) * (v - mean);
        }
        bm /= batch;
        bv /= batch;
        se_mean += (bm - mean) * (bm - mean);
        se_var += (bv - var) * (bv - var);
    }
    se_mean = std::sqrt(se_mean / nb / nb);
    se_var = std::sqrt(se_var / nb / nb);

    const double ks =
        ks_statistic(y, [&](double v) { return stationary_cdf_1d(model, v); });

    const bool pass = std::fabs(mean - um.mean) < 4.0 * se_mean &&
                      std::fabs(var - um.autocov[0]) < 4.0 * se_var && ks < 0.005;
    std::ostringstream os;
    os << "Stationary law: mean " << mean << " vs " << um.mean << " (4 MC SE "
       << 4.0 * se_mean << "), var " << var << " vs " << um.autocov[0] << " (4 MC SE "
       << 4.0 * se_var << "), KS distance " << ks << " (< 0.005)";
    report(4, pass, os.str());
}

void criterion_5(const Vector& spread) {
    // Convert the Gaussian regime of the published model into a Student
    // regime with nu = 1e6 and compare the per-observation conditional
    // log densities over the spread series.
    const GStmarModel gauss = fixtures::spread_512();
    std::vector<Regime> regimes;
    for (const auto& r : gauss.regimes()) regimes.push_back(r);
    regimes[0].dof = 1e6;
    const GStmarModel student({5, 0, 3}, regimes, gauss.alphas());

    const int p = 5;
    double worst = 0.0;
    Vector lag(p);
    for (int t = p; t < static_cast<int>(spread.size()); ++t) {
        for (int i = 0; i < p; ++i) lag[i] = spread[t - 1 - i];
        const double a = conditional_logdensity(gauss, spread[t], lag);
        const double b = conditional_logdensity(student, spread[t], lag);
        worst = std::max(worst, std::fabs(a - b));
    }
    std::ostringstream os;
    os << "Limiting case: max |log f_GMAR - log f_StMAR(nu=1e6)| over the spread = "
       << worst << " (< 1e-3)";
    report(5, worst < 1e-3, os.str());
}

void criterion_6() {
    // (a) mixing weights sum to one on 1e4 random model/window pairs.
    Rng rng(606);
    bool weights_ok = true;
    double worst_sum = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int p = 1 + static_cast<int>(rng.uniform() * 3);
        const int m1 = static_cast<int>(rng.uniform() * 3);
        const int m2 = (m1 == 0) ? 1 + static_cast<int>(rng.uniform() * 2)
                                 : static_cast<int>(rng.uniform() * 2);
        const int m_total = m1 + m2;
        std::vector<Regime> regimes(m_total);
        Vector alphas(m_total);
        double sum = 0.0;
        for (int m = 0; m < m_total; ++m) {
            regimes[m].ar = {rng.normal(), sample_stationary_coeffs(p, rng),
                             0.1 + 2.0 * rng.uniform()};
            if (m >= m1) regimes[m].dof = 2.2 + 20.0 * rng.uniform();
            alphas[m] = 0.05 + rng.uniform();
            sum += alphas[m];
        }
        for (auto& a : alphas) a /= sum;
        const GStmarModel model({p, m1, m2}, regimes, alphas);
        Vector lag(p);
        for (auto& v : lag) v = 5.0 * rng.normal();
        const Vector w = mixing_weights(model, lag);
        double total = 0.0;
        for (double v : w) total += v;
        worst_sum = std::max(worst_sum, std::fabs(total - 1.0));
        if (std::fabs(total - 1.0) > 1e-12) weights_ok = false;
    }

    // (b) conditional and stationary densities integrate to one.
    bool quad_ok = true;
    double worst_mass = 0.0;
    Rng rng2(607);
    for (int rep = 0; rep < 6; ++rep) {
        const int p = 1 + static_cast<int>(rng2.uniform() * 2);
        const int m1 = rep % 2;
        const int m2 = 3 - m1 - 1; // M = 3 regimes in total
        std::vector<Regime> regimes(m1 + m2);
        Vector alphas(m1 + m2);
        double sum = 0.0;
        for (int m = 0; m < m1 + m2; ++m) {
            regimes[m].ar = {rng2.normal(), sample_stationary_coeffs(p, rng2),
                             0.2 + rng2.uniform()};
            if (m >= m1) regimes[m].dof = 2.4 + 8.0 * rng2.uniform();
            alphas[m] = 0.1 + rng2.uniform();
            sum += alphas[m];
        }
        for (auto& a : alphas) a /= sum;
        const GStmarModel model({p, m1, m2}, regimes, alphas);

        Vector lag(p);
        for (auto& v : lag) v = rng2.normal();
        const ConditionalMoments cm = conditional_moments(model, lag);
        const double mass_cond = oracles::integrate_real_line(
            [&](double y) { return conditional_density(model, y, lag); }, cm.mean,
            std::sqrt(cm.variance), 1e-11);
        worst_mass = std::max(worst_mass, std::fabs(mass_cond - 1.0));

        const UnconditionalMoments um = unconditional_moments(model);
        double mass_stat;
        if (p == 1) {
            mass_stat = oracles::integrate_real_line(
                [&](double y) { return stationary_density(model, {y}); }, um.mean,
                std::sqrt(um.autocov[0]), 1e-11);
        } else {
            mass_stat = oracles::integrate_plane(
                [&](double a, double b) { return stationary_density(model, {a, b}); },
                um.mean, um.mean, std::sqrt(um.autocov[0]), std::sqrt(um.autocov[0]),
                1e-9);
        }
        worst_mass = std::max(worst_mass, std::fabs(mass_stat - 1.0));
        if (std::fabs(mass_cond - 1.0) > 1e-6 || std::fabs(mass_stat - 1.0) > 1e-6)
            quad_ok = false;
    }

    std::ostringstream os;
    os << "Normalization: worst |sum w - 1| = " << worst_sum
       << " over 1e4 pairs (<= 1e-12); worst quadrature |mass - 1| = " << worst_mass
       << " (<= 1e-6)";
    report(6, weights_ok && quad_ok, os.str());
}

void criterion_7() {
    Rng rng(707);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 2 + static_cast<int>(rng.uniform() * 5);
        const int d1 = 1 + static_cast<int>(rng.uniform() * (d - 1));
        Matrix b(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b(i, j) = rng.normal() / std::sqrt(d);
        Matrix cov = b * b.transpose();
        for (int i = 0; i < d; ++i) cov(i, i) += 0.5;
        Vector mu(d), x(d);
        for (int i = 0; i < d; ++i) {
            mu[i] = rng.normal();
            x[i] = mu[i] + 2.0 * rng.normal();
        }
        const Vector x1(x.begin(), x.begin() + d1);
        const Vector x2(x.begin() + d1, x.end());

        const PartitionedLaw gauss(MvnParams{mu, cov}, d1);
        worst = std::max(worst, std::fabs(mvn_logpdf(x, {mu, cov}) -
                                          gauss.logpdf_conditional(x1, x2) -
                                          gauss.logpdf_marginal_tail(x2)));
        const double nu = 2.3 + 30.0 * rng.uniform();
        const PartitionedLaw student(MvtParams{mu, cov, nu}, d1);
        worst = std::max(worst, std::fabs(mvt_logpdf(x, {mu, cov, nu}) -
                                          student.logpdf_conditional(x1, x2) -
                                          student.logpdf_marginal_tail(x2)));
    }
    std::ostringstream os;
    os << "Partition identities: worst |log pdf_d - log(pdf_cond pdf_marg)| = "
       << worst << " over 1000 instances, d <= 6 (< 1e-10)";
    report(7, worst < 1e-10, os.str());
}

void criterion_8() {
    // Well-separated but frequently switching two-regime model.
    std::vector<Regime> truth_regimes(2);
    truth_regimes[0].ar = {0.7, {0.3}, 0.5};
    truth_regimes[1].ar = {-0.6, {0.5}, 1.5};
    truth_regimes[1].dof = 6.0;
    const GStmarModel truth({1, 1, 1}, truth_regimes, {0.5, 0.5});
    const Vector theta_true = pack(truth);

    const int n_reps = 50;
    int covered = 0, hessian_fail = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const Vector series = simulate_series(truth, 5000, 8000 + rep);
        GaConfig cfg;
        cfg.generations = 100;
        cfg.population_size = 60;
        cfg.smart_mutation_start = 60;
        cfg.seed = 999 + rep;
        bool ok = false;
        try {
            // Four independent rounds: a type-swapped labelling (the
            // Gaussian regime capturing the Student data) is a genuine
            // inferior local maximum that single rounds sometimes pick.
            const EstimationResult est =
                estimate(series, {1, 1, 1}, 4, cfg, LikMode::conditional);
            if (est.hessian_ok && est.identified) {
                const Vector theta_hat = pack(est.model);
                ok = true;
                for (std::size_t i = 0; i < theta_true.size(); ++i)
                    if (std::fabs(theta_hat[i] - theta_true[i]) >
                        5.0 * (*est.std_errors)[i])
                        ok = false;
            } else {
                ++hessian_fail;
            }
        } catch (const Error&) {
        }
        if (ok) ++covered;
    }
    const double coverage = static_cast<double>(covered) / n_reps;

    // Pure AR(1): the reported SE matches the asymptotic formula.
    const GStmarModel ar1 = fixtures::gmar_11();
    const int t_len = 20000;
    const Vector big = simulate_series(ar1, t_len, 321);
    const oracles::Ar1Mle mle = oracles::ar1_conditional_mle(big);
    const GStmarModel at_mle = unpack({mle.phi0, mle.phi1, mle.sigma2}, {1, 1, 0});
    const StdErrorReport se = std_errors(big, at_mle, LikMode::conditional);
    bool se_ok = false;
    double rel = HUGE_VAL;
    if (se.hessian_ok) {
        const double asym = std::sqrt((1.0 - mle.phi1 * mle.phi1) / (t_len - 1));
        rel = std::fabs((*se.se)[1] - asym) / asym;
        se_ok = rel < 0.2;
    }

    std::ostringstream os;
    os << "Estimator consistency: " << covered << "/" << n_reps
       << " replications with every parameter inside 5 SEs (need >= 90%; "
       << hessian_fail << " Hessian failures); AR(1) SE(phi1) relative error = "
       << rel << " (< 0.2)";
    report(8, coverage >= 0.9 && se_ok, os.str());
}

void criterion_9() {
    const GStmarModel model = fixtures::simple_111();
    const int n_reps = 100;
    int accepted = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const Vector series = simulate_series(model, 2000, 9000 + rep);
        const QuantileResiduals qr = quantile_residuals(model, series);
        const double d = ks_statistic(
            qr.pit, [](double u) { return std::min(1.0, std::max(0.0, u)); });
        if (ks_pvalue(d, qr.pit.size()) > 0.01) ++accepted;
    }
    std::ostringstream os;
    os << "Quantile residuals: PIT uniformity KS not rejected at 1% in " << accepted
       << "/" << n_reps << " replications (need >= 95); the asymptotic "
       << "parameter-uncertainty-adjusted residual tests are out of scope "
       << "and NOT reproduced";
    report(9, accepted >= 95, os.str());
}

void criterion_10(const Vector& spread) {
    // Synthetic part: Gaussian AR(1) data, StMAR(1,1) fit carries a huge
    // dof estimate and the selection procedure strips the Student regime.
    const GStmarModel truth = fixtures::gmar_11();
    const int n_reps = 20;
    int reduced = 0;
    for (int rep = 0; rep < n_reps; ++rep) {
        const Vector series = simulate_series(truth, 20000, 10000 + rep);
        SelectionConfig cfg;
        cfg.n_rounds = 2;
        cfg.ga.generations = 50;
        cfg.ga.population_size = 40;
        cfg.ga.smart_mutation_start = 30;
        cfg.ga.seed = 150 + rep;
        cfg.mode = LikMode::conditional;
        try {
            const SelectionResult res = select_model(series, {1}, {1}, cfg);
            const SelectionCell* rec = recommended_cell(res);
            if (rec && res.stmar_fits[0].ok &&
                res.stmar_fits[0].dof_estimates[0] > 100.0 && rec->order.m2 == 0 &&
                rec->order.m1 == 1)
                ++reduced;
        } catch (const Error&) {
        }
    }

    // Spread part: the pipeline reaches a G-StMAR(5,1,2) candidate from
    // the StMAR(5,3) fit.
    bool spread_candidate = false;
    std::string spread_note = "no G-StMAR(5,1,2) candidate";
    try {
        SelectionConfig cfg;
        cfg.n_rounds = 4;
        cfg.ga.seed = 220;
        cfg.mode = LikMode::exact;
        const SelectionResult res = select_model(spread, {5}, {3}, cfg);
        for (const auto& cell : res.gstmar_fits) {
            if (cell.ok && cell.order.p == 5 && cell.order.m1 == 1 &&
                cell.order.m2 == 2) {
                spread_candidate = true;
                std::ostringstream note;
                note << "G-StMAR(5,1,2) candidate reached, loglik = " << cell.loglik;
                spread_note = note.str();
            }
        }
        if (!spread_candidate && !res.stmar_fits.empty() && res.stmar_fits[0].ok) {
            std::ostringstream note;
            note << "StMAR(5,3) dofs:";
            for (double nu : res.stmar_fits[0].dof_estimates) note << " " << nu;
            spread_note = note.str();
        }
    } catch (const Error& e) {
        spread_note = std::string("selection failed: ") + e.what();
    }

    std::ostringstream os;
    os << "Model selection: synthetic m2-reduction in " << reduced << "/" << n_reps
       << " replications (need >= 90%); spread pipeline: " << spread_note;
    report(10, reduced >= 18 && spread_candidate, os.str());
}

void criterion_11(const Vector& spread, const EstimationResult* refit) {
    // A StMAR model with a dof pinned at the cap has a numerically
    // singular observed information.
    const GStmarModel gauss = fixtures::spread_512();
    std::vector<Regime> regimes;
    for (const auto& r : gauss.regimes()) regimes.push_back(r);
    regimes[0].dof = kMaxDof;
    const GStmarModel clamped({5, 0, 3}, regimes, gauss.alphas());
    const StdErrorReport singular = std_errors(spread, clamped, LikMode::exact);

    // The corresponding G-StMAR model has finite standard errors, with
    // SE(phi_{2,1}) close to the published 0.055. The Hessian is taken at
    // the model's own optimum on the vendored data (the published point
    // is only a maximizer of the source-vintage likelihood).
    bool se_ok = false;
    bool hessian_ok = false;
    double se_phi21 = std::nan("");
    if (refit && refit->hessian_ok && refit->std_errors) {
        hessian_ok = true;
        // packed layout: regime 2 phi_1 sits right after its phi0
        se_phi21 = (*refit->std_errors)[(gauss.order().p + 2) + 1];
        se_ok = se_phi21 >= 0.055 / 1.5 && se_phi21 <= 0.055 * 1.5;
    }
    std::ostringstream os;
    os << "Singularity diagnosis: clamped-dof StMAR hessian_ok = "
       << (singular.hessian_ok ? "true" : "false") << " (want false); refitted "
       << "G-StMAR hessian_ok = " << (hessian_ok ? "true" : "false")
       << ", SE(phi_21) = " << se_phi21 << " (0.055 within factor 1.5)";
    report(11, !singular.hessian_ok && se_ok, os.str());
}

} // namespace

int main(int argc, char** argv) {
    const std::string data_dir = argc > 1 ? argv[1] : "data";
    Vector spread;
    try {
        spread = spread_series(data_dir);
    } catch (const Error& e) {
        std::fprintf(stderr, "cannot load the vendored spread series: %s\n", e.what());
        return 64;
    }

    // Optional criterion numbers on the command line restrict the run.
    std::vector<bool> wanted(12, argc <= 2);
    for (int i = 2; i < argc; ++i) {
        const int c = std::atoi(argv[i]);
        if (c >= 1 && c <= 11) wanted[c] = true;
    }

    std::printf("acceptance suite: %zu spread observations from %s\n", spread.size(),
                data_dir.c_str());

    if (wanted[2]) criterion_2();
    if (wanted[3]) criterion_3();
    if (wanted[7]) criterion_7();
    if (wanted[5]) criterion_5(spread);
    if (wanted[6]) criterion_6();
    if (wanted[4]) criterion_4();
    if (wanted[9]) criterion_9();
    if (wanted[8]) criterion_8();
    if (wanted[10]) criterion_10(spread);
    if (wanted[1]) criterion_1(spread);
    if (wanted[11]) criterion_11(spread, spread_refit(spread));

    std::printf("%d criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
