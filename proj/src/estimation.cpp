#include "gstmar/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "gstmar/error.hpp"
#include "gstmar/optim.hpp"
#include "gstmar/rng.hpp"

namespace gstmar {

// ---------------------------------------------------------------------------
// Packing
// ---------------------------------------------------------------------------

int packed_length(const ModelOrder& order, bool shared_ar) {
    return order.param_count(shared_ar);
}

Vector pack(const GStmarModel& model) {
    const ModelOrder& order = model.order();
    const int m_total = order.regimes();
    Vector theta;
    theta.reserve(packed_length(order, model.shared_ar()));
    for (int m = 0; m < m_total; ++m) {
        const Regime& reg = model.regime(m);
        theta.push_back(reg.ar.intercept);
        if (!model.shared_ar())
            theta.insert(theta.end(), reg.ar.coeffs.begin(), reg.ar.coeffs.end());
        theta.push_back(reg.ar.noise_var);
    }
    if (model.shared_ar()) {
        const auto& phi = model.regime(0).ar.coeffs;
        theta.insert(theta.end(), phi.begin(), phi.end());
    }
    for (int m = 0; m + 1 < m_total; ++m) theta.push_back(model.alphas()[m]);
    for (int m = order.m1; m < m_total; ++m) theta.push_back(*model.regime(m).dof);
    return theta;
}

namespace {

struct PackedView {
    // Index helpers over the packed layout.
    const ModelOrder order;
    const bool shared_ar;

    int p() const { return order.p; }
    int m_total() const { return order.regimes(); }
    int block() const { return shared_ar ? 2 : order.p + 2; }
    int phi0_at(int m) const { return m * block(); }
    int phi_at(int m) const { return shared_ar ? m_total() * 2 : m * block() + 1; }
    int sigma2_at(int m) const { return m * block() + (shared_ar ? 1 : order.p + 1); }
    int alpha_at(int m) const {
        return m_total() * block() + (shared_ar ? order.p : 0) + m;
    }
    int nu_at(int m) const { return alpha_at(m_total() - 1) + (m - order.m1); }
    int length() const { return packed_length(order, shared_ar); }
};

} // namespace

std::vector<std::string> packed_violations(const Vector& theta, const ModelOrder& order,
                                           bool shared_ar) {
    std::vector<std::string> out;
    const PackedView view{order, shared_ar};
    if (static_cast<int>(theta.size()) != view.length()) {
        std::ostringstream msg;
        msg << "packed length " << theta.size() << " != expected " << view.length();
        out.push_back(msg.str());
        return out;
    }
    for (double v : theta)
        if (!std::isfinite(v)) {
            out.push_back("non-finite entry in parameter vector");
            return out;
        }

    const int p = order.p;
    const int m_total = order.regimes();
    for (int m = 0; m < m_total; ++m) {
        const int phi_base = view.phi_at(shared_ar ? 0 : m);
        Vector phi(theta.begin() + phi_base, theta.begin() + phi_base + p);
        if (!is_stationary(phi)) {
            std::ostringstream msg;
            msg << "regime " << (m + 1) << ": AR coefficients outside the stationarity region"
                << " (max root modulus " << max_ar_root_modulus(phi) << ")";
            out.push_back(msg.str());
            if (shared_ar) break; // same vector for every regime
        }
    }
    for (int m = 0; m < m_total; ++m) {
        const double s2 = theta[view.sigma2_at(m)];
        if (!(s2 > 0.0)) {
            std::ostringstream msg;
            msg << "regime " << (m + 1) << ": sigma^2 = " << s2 << " must be positive";
            out.push_back(msg.str());
        }
    }
    double alpha_sum = 0.0;
    bool alphas_individually_ok = true;
    for (int m = 0; m + 1 < m_total; ++m) {
        const double a = theta[view.alpha_at(m)];
        if (!(a > 0.0) || !(a < 1.0)) {
            std::ostringstream msg;
            msg << "alpha_" << (m + 1) << " = " << a << " outside (0,1)";
            out.push_back(msg.str());
            alphas_individually_ok = false;
        }
        alpha_sum += a;
    }
    if (m_total > 1 && alphas_individually_ok && !(alpha_sum < 1.0)) {
        std::ostringstream msg;
        msg << "alpha_1..alpha_" << (m_total - 1) << " sum to " << alpha_sum
            << "; alpha_" << m_total << " would not be positive";
        out.push_back(msg.str());
    }
    for (int m = order.m1; m < m_total; ++m) {
        const double nu = theta[view.nu_at(m)];
        if (!(nu > 2.0)) {
            std::ostringstream msg;
            msg << "regime " << (m + 1) << ": nu = " << nu << " must exceed 2";
            out.push_back(msg.str());
        }
    }
    return out;
}

GStmarModel unpack(const Vector& theta, const ModelOrder& order, bool shared_ar) {
    auto violations = packed_violations(theta, order, shared_ar);
    if (!violations.empty())
        throw ConstraintError("parameter vector outside the parameter space",
                              std::move(violations));
    const PackedView view{order, shared_ar};
    const int p = order.p;
    const int m_total = order.regimes();

    std::vector<Regime> regimes(m_total);
    for (int m = 0; m < m_total; ++m) {
        Regime& reg = regimes[m];
        reg.ar.intercept = theta[view.phi0_at(m)];
        const int phi_base = view.phi_at(shared_ar ? 0 : m);
        reg.ar.coeffs.assign(theta.begin() + phi_base, theta.begin() + phi_base + p);
        reg.ar.noise_var = theta[view.sigma2_at(m)];
        if (m >= order.m1) reg.dof = theta[view.nu_at(m)];
    }
    Vector alphas(m_total, 1.0);
    if (m_total > 1) {
        double sum = 0.0;
        for (int m = 0; m + 1 < m_total; ++m) {
            alphas[m] = theta[view.alpha_at(m)];
            sum += alphas[m];
        }
        alphas[m_total - 1] = 1.0 - sum;
    }
    return GStmarModel(order, std::move(regimes), std::move(alphas), shared_ar);
}

// ---------------------------------------------------------------------------
// Fitness evaluation shared by the GA and the local optimizer
// ---------------------------------------------------------------------------

namespace {

struct FitnessValue {
    double loglik = -HUGE_VAL; // conditional or exact, unscaled
    bool valid = false;
    bool identified = false;
    int redundant = 0;
};

FitnessValue eval_packed(const Vector& theta, const Vector& series,
                         const ModelOrder& order, bool shared_ar, LikMode mode,
                         double redundancy_threshold) {
    FitnessValue fv;
    if (!packed_violations(theta, order, shared_ar).empty()) return fv;
    try {
        const GStmarModel model = unpack(theta, order, shared_ar);
        const LikelihoodEval eval = evaluate_likelihood(model, series, mode);
        if (!eval.finite) return fv;
        fv.loglik = eval.loglik;
        fv.valid = true;
        fv.identified = true;
        for (double w : eval.max_weights)
            if (w < redundancy_threshold) {
                fv.identified = false;
                ++fv.redundant;
            }
    } catch (const Error&) {
        // leave invalid
    }
    return fv;
}

// ---------------------------------------------------------------------------
// Coordinate transforms
// ---------------------------------------------------------------------------

enum class CoordKind { free_real, log_positive, logit_unit, log_dof };

std::vector<CoordKind> coord_kinds(const ModelOrder& order, bool shared_ar,
                                   bool transform_all) {
    const PackedView view{order, shared_ar};
    std::vector<CoordKind> kinds(view.length(), CoordKind::free_real);
    const int m_total = order.regimes();
    for (int m = 0; m < m_total; ++m)
        if (transform_all) kinds[view.sigma2_at(m)] = CoordKind::log_positive;
    for (int m = 0; m + 1 < m_total; ++m)
        if (transform_all) kinds[view.alpha_at(m)] = CoordKind::logit_unit;
    for (int m = order.m1; m < m_total; ++m) kinds[view.nu_at(m)] = CoordKind::log_dof;
    return kinds;
}

double to_transformed(double v, CoordKind kind) {
    switch (kind) {
        case CoordKind::log_positive: return std::log(v);
        case CoordKind::logit_unit: return std::log(v / (1.0 - v));
        case CoordKind::log_dof: return std::log(v - 2.0);
        default: return v;
    }
}

double from_transformed(double v, CoordKind kind) {
    switch (kind) {
        case CoordKind::log_positive: return std::exp(v);
        case CoordKind::logit_unit: return 1.0 / (1.0 + std::exp(-v));
        case CoordKind::log_dof: return 2.0 + std::exp(v);
        default: return v;
    }
}

Vector transform_vec(const Vector& raw, const std::vector<CoordKind>& kinds) {
    Vector out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = to_transformed(raw[i], kinds[i]);
    return out;
}

Vector untransform_vec(const Vector& z, const std::vector<CoordKind>& kinds) {
    Vector out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = from_transformed(z[i], kinds[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Genetic algorithm internals
// ---------------------------------------------------------------------------

struct Individual {
    Vector genome; // GA coordinates: raw packed vector with nu in log(nu-2)
    double fitness = -HUGE_VAL;
    bool evaluated = false;  // fitness comes from a real likelihood call
    bool inherited = false;  // fitness interpolated from the parents
    bool identified = false;
    int redundant = 0;
};

struct SeriesStats {
    double mean = 0.0;
    double sd = 1.0;
    double var = 1.0;
};

SeriesStats series_stats(const Vector& series) {
    SeriesStats st;
    const double n = static_cast<double>(series.size());
    for (double v : series) st.mean += v;
    st.mean /= n;
    double ss = 0.0;
    for (double v : series) ss += (v - st.mean) * (v - st.mean);
    st.var = ss / std::max(1.0, n - 1.0);
    st.sd = std::sqrt(st.var);
    return st;
}

class CandidateFactory {
public:
    CandidateFactory(const ModelOrder& order, bool shared_ar, const SeriesStats& stats,
                     const GaConfig& cfg)
        : view_{order, shared_ar}, stats_(stats), cfg_(cfg) {}

    // Random genome in GA coordinates, valid by construction.
    Vector random(Rng& rng, bool force_boundary = false) const {
        const ModelOrder& order = view_.order;
        const int p = order.p;
        const int m_total = order.regimes();
        Vector theta(view_.length(), 0.0);
        const bool boundary =
            force_boundary || rng.uniform() < cfg_.boundary_mutation_prob;
        if (view_.shared_ar) {
            const Vector phi = sample_stationary_coeffs(p, rng, boundary);
            for (int i = 0; i < p; ++i) theta[view_.phi_at(0) + i] = phi[i];
        }
        for (int m = 0; m < m_total; ++m) {
            theta[view_.phi0_at(m)] = stats_.mean + stats_.sd * rng.normal();
            if (!view_.shared_ar) {
                const Vector phi = sample_stationary_coeffs(p, rng, boundary);
                for (int i = 0; i < p; ++i) theta[view_.phi_at(m) + i] = phi[i];
            }
            // Log-uniform over four decades below the sample variance:
            // regimes like a near-zero-variance bound period sit orders of
            // magnitude under it and must be representable in the initial
            // population.
            theta[view_.sigma2_at(m)] =
                stats_.var * std::exp(rng.uniform(std::log(1e-4), std::log(1.5)));
        }
        if (m_total > 1) {
            Vector alpha(m_total);
            double sum = 0.0;
            for (auto& a : alpha) {
                a = -std::log(rng.uniform()); // Dirichlet(1,..,1)
                sum += a;
            }
            for (auto& a : alpha) a /= sum;
            // Identification ordering within each type block.
            std::sort(alpha.begin(), alpha.begin() + order.m1, std::greater<>());
            std::sort(alpha.begin() + order.m1, alpha.end(), std::greater<>());
            for (int m = 0; m + 1 < m_total; ++m) theta[view_.alpha_at(m)] = alpha[m];
        }
        for (int m = order.m1; m < m_total; ++m) {
            const double nu = 2.0 + 10.0 * (-std::log(rng.uniform())); // 2 + Exp(10)
            theta[view_.nu_at(m)] = std::log(nu - 2.0); // GA keeps log(nu-2)
        }
        return theta;
    }

    // Gaussian perturbation around an anchor genome; deviations are halved
    // until the candidate is admissible, which terminates because the
    // anchor itself is.
    Vector smart(const Vector& anchor, Rng& rng) const {
        Vector cand(anchor.size());
        for (std::size_t i = 0; i < anchor.size(); ++i) {
            const double sd = 0.1 * std::fabs(anchor[i]) + 0.01;
            cand[i] = anchor[i] + sd * rng.normal();
        }
        for (int halvings = 0; halvings < 40; ++halvings) {
            if (admissible(cand)) return cand;
            for (std::size_t i = 0; i < cand.size(); ++i)
                cand[i] = anchor[i] + 0.5 * (cand[i] - anchor[i]);
        }
        return anchor;
    }

    // Exchanges the parameters of a Gaussian slot and a Student slot of
    // the anchor (the Student slot keeps a dof). The type assignment is a
    // combinatorial label that Gaussian perturbations cannot cross, yet
    // the best fit may need e.g. the lowest-variance cluster in the
    // Gaussian block.
    Vector type_swap(const Vector& anchor, Rng& rng) const {
        const ModelOrder& order = view_.order;
        if (order.m1 == 0 || order.m2 == 0) return anchor;
        Vector cand = anchor;
        const int g = static_cast<int>(rng.uniform() * order.m1);
        const int st = order.m1 + static_cast<int>(rng.uniform() * order.m2);
        std::swap(cand[view_.phi0_at(g)], cand[view_.phi0_at(st)]);
        std::swap(cand[view_.sigma2_at(g)], cand[view_.sigma2_at(st)]);
        if (!view_.shared_ar)
            for (int i = 0; i < order.p; ++i)
                std::swap(cand[view_.phi_at(g) + i], cand[view_.phi_at(st) + i]);
        // Swap the mixing weights of the two slots (alpha_M is implied).
        const int m_total = view_.m_total();
        Vector alpha(m_total, 0.0);
        double head = 0.0;
        for (int m = 0; m + 1 < m_total; ++m) {
            alpha[m] = cand[view_.alpha_at(m)];
            head += alpha[m];
        }
        alpha[m_total - 1] = 1.0 - head;
        std::swap(alpha[g], alpha[st]);
        for (int m = 0; m + 1 < m_total; ++m) cand[view_.alpha_at(m)] = alpha[m];
        // The migrated Student slot keeps its dof; occasionally redraw it.
        if (rng.uniform() < 0.5) {
            const double nu = 2.0 + 10.0 * (-std::log(rng.uniform()));
            cand[view_.nu_at(st)] = std::log(nu - 2.0);
        }
        if (!admissible(cand)) return anchor;
        return cand;
    }

    bool admissible(const Vector& genome) const {
        return packed_violations(to_raw(genome), view_.order, view_.shared_ar).empty();
    }

    Vector to_raw(const Vector& genome) const {
        Vector raw = genome;
        for (int m = view_.order.m1; m < view_.m_total(); ++m) {
            const int idx = view_.nu_at(m);
            raw[idx] = 2.0 + std::exp(genome[idx]);
        }
        return raw;
    }

    Vector from_raw(const Vector& raw) const {
        Vector genome = raw;
        for (int m = view_.order.m1; m < view_.m_total(); ++m) {
            const int idx = view_.nu_at(m);
            genome[idx] = std::log(raw[idx] - 2.0);
        }
        return genome;
    }

    const PackedView& view() const { return view_; }

private:
    PackedView view_;
    SeriesStats stats_;
    GaConfig cfg_;
};

// Builds a candidate by combining well-fitting regimes from different
// individuals: regimes are ranked by the weight mass they claim in their
// own model, and the best distinct ones fill the type blocks.
Vector combine_regimes(const std::vector<Individual>& pop, const CandidateFactory& factory,
                       const Vector& series, const ModelOrder& order, bool shared_ar,
                       Rng& rng) {
    const PackedView& view = factory.view();
    struct Donor {
        double mass;
        int individual;
        int regime;
    };
    std::vector<Donor> gaussian_donors, student_donors;

    // Look at the better half of the population only.
    std::vector<int> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return pop[a].fitness > pop[b].fitness; });
    const std::size_t scan = std::max<std::size_t>(2, pop.size() / 2);
    for (std::size_t r = 0; r < scan && r < idx.size(); ++r) {
        const Individual& ind = pop[idx[r]];
        if (!ind.evaluated || !std::isfinite(ind.fitness)) continue;
        try {
            const GStmarModel model =
                unpack(factory.to_raw(ind.genome), order, shared_ar);
            const LikelihoodEval ev =
                evaluate_likelihood(model, series, LikMode::conditional);
            for (int m = 0; m < order.regimes(); ++m) {
                const Donor d{ev.max_weights[m], idx[r], m};
                if (m < order.m1) gaussian_donors.push_back(d);
                else student_donors.push_back(d);
            }
        } catch (const Error&) {
            continue;
        }
    }
    auto by_mass = [](const Donor& a, const Donor& b) { return a.mass > b.mass; };
    std::sort(gaussian_donors.begin(), gaussian_donors.end(), by_mass);
    std::sort(student_donors.begin(), student_donors.end(), by_mass);

    Vector cand = factory.random(rng);
    auto copy_regime = [&](const Donor& d, int dest) {
        const Vector& src = pop[d.individual].genome;
        cand[view.phi0_at(dest)] = src[view.phi0_at(d.regime)];
        cand[view.sigma2_at(dest)] = src[view.sigma2_at(d.regime)];
        if (!shared_ar)
            for (int i = 0; i < order.p; ++i)
                cand[view.phi_at(dest) + i] = src[view.phi_at(d.regime) + i];
        if (dest >= order.m1 && d.regime >= order.m1)
            cand[view.nu_at(dest)] = src[view.nu_at(d.regime)];
    };
    for (int m = 0; m < order.m1 && m < static_cast<int>(gaussian_donors.size()); ++m)
        copy_regime(gaussian_donors[m], m);
    for (int m = 0; m < order.m2 && m < static_cast<int>(student_donors.size()); ++m)
        copy_regime(student_donors[m], order.m1 + m);
    if (!factory.admissible(cand)) return factory.random(rng);
    return cand;
}

} // namespace

// ---------------------------------------------------------------------------
// Genetic search
// ---------------------------------------------------------------------------

GaResult genetic_search(const Vector& series, const ModelOrder& order,
                        const GaConfig& cfg, bool shared_ar) {
    if (!order.valid()) throw DomainError("invalid model order");
    const int n_params = packed_length(order, shared_ar);
    if (static_cast<int>(series.size()) <= order.p + n_params)
        throw DomainError("series too short for the requested model order");

    int pop_size = cfg.population_size > 0 ? cfg.population_size : 10 * n_params;
    if (pop_size < 2) pop_size = 2;
    if (pop_size % 2 != 0) ++pop_size;

    Rng rng(cfg.seed);
    const SeriesStats stats = series_stats(series);
    const CandidateFactory factory(order, shared_ar, stats, cfg);

    GaResult result;

    auto evaluate = [&](Individual& ind) {
        const FitnessValue fv =
            eval_packed(factory.to_raw(ind.genome), series, order, shared_ar,
                        LikMode::conditional, cfg.redundancy_threshold);
        ind.fitness = fv.valid ? fv.loglik : -HUGE_VAL;
        ind.evaluated = true;
        ind.inherited = false;
        ind.identified = fv.identified;
        ind.redundant = fv.redundant;
        ++result.likelihood_evals;
    };

    std::vector<Individual> pop(pop_size);
    for (auto& ind : pop) {
        ind.genome = factory.random(rng);
        evaluate(ind);
    }

    Vector best_genome;
    double best_fitness = -HUGE_VAL;
    Vector best_identified_genome;
    double best_identified_fitness = -HUGE_VAL;

    auto update_best = [&](const Individual& ind) {
        if (!ind.evaluated || ind.inherited) return; // inherited never promotes
        if (ind.fitness > best_fitness) {
            best_fitness = ind.fitness;
            best_genome = ind.genome;
        }
        if (ind.identified && ind.fitness > best_identified_fitness) {
            best_identified_fitness = ind.fitness;
            best_identified_genome = ind.genome;
        }
    };
    for (const auto& ind : pop) update_best(ind);

    // Admissible crossover cut points: block boundaries of the packed
    // layout (after each regime's parameters, the shared AR vector if
    // any, and each alpha / nu entry).
    std::vector<int> cut_points;
    {
        const PackedView view{order, shared_ar};
        const int block = view.block();
        for (int m = 1; m < order.regimes(); ++m) cut_points.push_back(m * block);
        const int alpha0 = view.alpha_at(0);
        if (shared_ar) cut_points.push_back(order.regimes() * block);
        for (int i = alpha0; i < n_params; ++i) cut_points.push_back(i);
        if (cut_points.empty()) cut_points.push_back(n_params / 2 > 0 ? n_params / 2 : 1);
    }
    const std::vector<double> cut_weights(cut_points.size(), 1.0);

    std::vector<int> order_idx(pop_size);
    for (int gen = 0; gen < cfg.generations; ++gen) {
        // Fitness statistics for the adaptive rates.
        double f_max = -HUGE_VAL, f_min = HUGE_VAL, f_sum = 0.0;
        int finite_count = 0;
        for (const auto& ind : pop) {
            if (!std::isfinite(ind.fitness)) continue;
            f_max = std::max(f_max, ind.fitness);
            f_min = std::min(f_min, ind.fitness);
            f_sum += ind.fitness;
            ++finite_count;
        }
        const double f_mean = finite_count ? f_sum / finite_count : -HUGE_VAL;
        const double spread_guard = std::max(1e-12, f_max - f_mean);

        // Premature convergence: flatten of the fitness landscape triggers
        // a mass mutation that keeps only the best individual.
        if (finite_count == pop_size && f_max - f_min < 1e-3 &&
            gen + 1 < cfg.generations) {
            std::size_t keep = 0;
            for (std::size_t i = 1; i < pop.size(); ++i)
                if (pop[i].fitness > pop[keep].fitness) keep = i;
            for (std::size_t i = 0; i < pop.size(); ++i) {
                if (i == keep) continue;
                pop[i].genome = factory.random(rng);
                evaluate(pop[i]);
                update_best(pop[i]);
            }
            continue;
        }

        // Selection: exponential ranking, scaled down by 0.5 per redundant
        // regime.
        std::iota(order_idx.begin(), order_idx.end(), 0);
        std::sort(order_idx.begin(), order_idx.end(),
                  [&](int a, int b) { return pop[a].fitness > pop[b].fitness; });
        std::vector<double> sel_weight(pop_size);
        for (int rank = 0; rank < pop_size; ++rank) {
            const Individual& ind = pop[order_idx[rank]];
            double w = std::pow(0.9, rank);
            w *= std::pow(0.5, ind.redundant);
            if (!std::isfinite(ind.fitness)) w = 1e-12;
            sel_weight[order_idx[rank]] = w;
        }
        std::vector<Individual> next;
        next.reserve(pop_size);
        for (int i = 0; i < pop_size; ++i)
            next.push_back(pop[rng.categorical(sel_weight)]);

        // Crossover on consecutive pairs, adaptive rate per Patnaik-Srinivas
        // with the 40% floor.
        for (int i = 0; i + 1 < pop_size; i += 2) {
            Individual& a = next[i];
            Individual& b = next[i + 1];
            const double f_better = std::max(a.fitness, b.fitness);
            double pc;
            if (!std::isfinite(f_better) || f_better < f_mean)
                pc = 1.0;
            else
                pc = (f_max - f_better) / spread_guard;
            pc = std::min(1.0, std::max(cfg.min_crossover_rate, pc));
            if (rng.uniform() >= pc) continue;

            // Cut points sit on parameter-block boundaries (regime
            // blocks, the shared AR vector, each alpha and nu), so regimes
            // travel between individuals as units.
            const int n = static_cast<int>(a.genome.size());
            const int cut = cut_points[rng.categorical(cut_weights)];
            for (int j = cut; j < n; ++j) std::swap(a.genome[j], b.genome[j]);
            const double w_head = static_cast<double>(cut) / n;

            const double fa = a.fitness, fb = b.fitness;
            for (Individual* child : {&a, &b}) {
                const bool inherit =
                    std::isfinite(fa) && std::isfinite(fb) &&
                    rng.uniform() < cfg.fitness_inheritance_prob;
                if (inherit) {
                    const double own = child == &a ? fa : fb;
                    const double other = child == &a ? fb : fa;
                    child->fitness = w_head * own + (1.0 - w_head) * other;
                    child->evaluated = true;
                    child->inherited = true;
                    ++result.inherited_evals;
                } else {
                    child->evaluated = false;
                }
            }
        }

        // Mutation: full replacement by a random vector, or a smart
        // perturbation of the best identified vector late in the run.
        const bool smart_phase =
            gen >= cfg.smart_mutation_start && !best_identified_genome.empty();
        if (gen >= cfg.smart_mutation_start && best_identified_genome.empty() &&
            order.regimes() > 1) {
            // No identified vector yet: keep stitching regimes from
            // different individuals alongside the random search.
            Vector combined = combine_regimes(pop, factory, series, order, shared_ar, rng);
            next[pop_size - 1].genome = std::move(combined);
            next[pop_size - 1].evaluated = false;
        }
        for (auto& ind : next) {
            double pm;
            if (!std::isfinite(ind.fitness) || ind.fitness < f_mean)
                pm = 0.5;
            else
                pm = 0.5 * (f_max - ind.fitness) / spread_guard;
            if (rng.uniform() >= pm) continue;
            if (smart_phase) {
                const bool swap_types = order.m1 > 0 && order.m2 > 0 &&
                                        rng.uniform() < 0.25;
                ind.genome = swap_types
                                 ? factory.type_swap(best_identified_genome, rng)
                                 : factory.smart(best_identified_genome, rng);
            } else {
                ind.genome = factory.random(rng);
            }
            ind.evaluated = false;
        }

        for (auto& ind : next) {
            if (!ind.evaluated) evaluate(ind);
            update_best(ind);
        }
        pop.swap(next);

        if (cfg.verbose && (gen % 25 == 0 || gen + 1 == cfg.generations))
            std::fprintf(stderr, "round=%d gen=%d best=%.6f\n", cfg.round_index, gen,
                         best_fitness);
    }

    if (!best_identified_genome.empty()) {
        result.best = factory.to_raw(best_identified_genome);
        result.best_loglik = best_identified_fitness;
        result.identified = true;
    } else {
        result.best = factory.to_raw(best_genome);
        result.best_loglik = best_fitness;
        result.identified = false;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Local refinement
// ---------------------------------------------------------------------------

RefineResult local_refine(const Vector& series, const ModelOrder& order,
                          const Vector& start, LikMode mode, bool shared_ar) {
    if (!packed_violations(start, order, shared_ar).empty())
        throw DomainError("local_refine start vector lies outside the parameter space");

    const auto kinds = coord_kinds(order, shared_ar, /*transform_all=*/true);
    auto objective = [&](const Vector& z) {
        const Vector raw = untransform_vec(z, kinds);
        const FitnessValue fv = eval_packed(raw, series, order, shared_ar, mode, 0.0);
        return fv.valid ? fv.loglik : -HUGE_VAL;
    };

    const BfgsResult opt = bfgs_maximize(objective, transform_vec(start, kinds));

    RefineResult result;
    result.x = untransform_vec(opt.x, kinds);
    result.loglik = opt.f;
    result.converged = opt.converged;
    result.iterations = opt.iterations;
    result.grad_inf_norm = opt.grad_inf_norm;
    return result;
}

// ---------------------------------------------------------------------------
// Standard errors from the numerical Hessian
// ---------------------------------------------------------------------------

StdErrorReport std_errors(const Vector& series, const GStmarModel& model, LikMode mode) {
    StdErrorReport report;
    const ModelOrder& order = model.order();
    const bool shared_ar = model.shared_ar();
    const Vector theta = pack(model);
    const int n = static_cast<int>(theta.size());

    auto f = [&](const Vector& x) {
        const FitnessValue fv = eval_packed(x, series, order, shared_ar, mode, 0.0);
        return fv.valid ? fv.loglik : std::nan("");
    };

    constexpr double kStep = 6e-6;
    Vector h(n);
    for (int i = 0; i < n; ++i) h[i] = kStep * std::max(1.0, std::fabs(theta[i]));

    const double f0 = f(theta);
    if (!std::isfinite(f0)) {
        report.note = "log-likelihood not finite at the estimate";
        return report;
    }

    Matrix hessian(n, n);
    Vector probe = theta;
    for (int i = 0; i < n; ++i) {
        probe[i] = theta[i] + h[i];
        const double fp = f(probe);
        probe[i] = theta[i] - h[i];
        const double fm = f(probe);
        probe[i] = theta[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            report.note = "Hessian probe left the parameter space";
            return report;
        }
        hessian(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            probe[i] = theta[i] + h[i];
            probe[j] = theta[j] + h[j];
            const double fpp = f(probe);
            probe[j] = theta[j] - h[j];
            const double fpm = f(probe);
            probe[i] = theta[i] - h[i];
            const double fmm = f(probe);
            probe[j] = theta[j] + h[j];
            const double fmp = f(probe);
            probe[i] = theta[i];
            probe[j] = theta[j];
            if (!std::isfinite(fpp) || !std::isfinite(fpm) || !std::isfinite(fmp) ||
                !std::isfinite(fmm)) {
                report.note = "Hessian probe left the parameter space";
                return report;
            }
            const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
            hessian(i, j) = v;
            hessian(j, i) = v;
        }
    }

    Matrix neg(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) neg(i, j) = -hessian(i, j);

    try {
        const Cholesky chol(neg);
        Vector se(n);
        Vector unit(n, 0.0);
        for (int i = 0; i < n; ++i) {
            unit[i] = 1.0;
            const Vector col = chol.solve(unit);
            unit[i] = 0.0;
            if (!(col[i] > 0.0)) {
                report.note = "negative variance estimate on the diagonal";
                return report;
            }
            se[i] = std::sqrt(col[i]);
        }
        report.se = std::move(se);
        report.hessian_ok = true;
    } catch (const DefinitenessError& e) {
        std::ostringstream msg;
        msg << "observed information is numerically singular (" << e.what()
            << "); this is the expected failure mode for weakly identified "
               "parameters such as very large dof";
        report.note = msg.str();
    }
    return report;
}

// ---------------------------------------------------------------------------
// Full two-phase estimation
// ---------------------------------------------------------------------------

EstimationResult estimate(const Vector& series, const ModelOrder& order, int n_rounds,
                          GaConfig cfg, LikMode mode, bool shared_ar) {
    if (n_rounds < 1) throw DomainError("n_rounds must be positive");

    struct RoundOutcome {
        RoundTrace trace;
        Vector x;
        bool usable = false;
    };
    std::vector<RoundOutcome> outcomes(n_rounds);

#pragma omp parallel for schedule(dynamic) if (n_rounds > 1)
    for (int r = 0; r < n_rounds; ++r) {
        RoundOutcome& out = outcomes[r];
        out.trace.round = r;
        try {
            GaConfig round_cfg = cfg;
            std::uint64_t stream = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (r + 1));
            round_cfg.seed = splitmix64(stream);
            round_cfg.round_index = r;
            const GaResult ga = genetic_search(series, order, round_cfg, shared_ar);
            out.trace.ga_loglik = ga.best_loglik;

            RefineResult refined = local_refine(series, order, ga.best, mode, shared_ar);

            // Type rationalization: the GA can converge with the roles of
            // a Gaussian and a Student slot exchanged (e.g. the smallest
            // variance cluster sitting in a Student slot with enormous
            // dof). Re-refining the slot-swapped candidates is cheap and
            // keeps whichever assignment the likelihood prefers.
            if (order.m1 > 0 && order.m2 > 0) {
                const PackedView view{order, shared_ar};
                for (int g = 0; g < order.m1; ++g) {
                    for (int st = order.m1; st < order.regimes(); ++st) {
                        Vector cand = refined.x;
                        std::swap(cand[view.phi0_at(g)], cand[view.phi0_at(st)]);
                        std::swap(cand[view.sigma2_at(g)], cand[view.sigma2_at(st)]);
                        if (!shared_ar)
                            for (int i = 0; i < order.p; ++i)
                                std::swap(cand[view.phi_at(g) + i],
                                          cand[view.phi_at(st) + i]);
                        Vector alpha(order.regimes(), 0.0);
                        double head = 0.0;
                        for (int m = 0; m + 1 < order.regimes(); ++m) {
                            alpha[m] = cand[view.alpha_at(m)];
                            head += alpha[m];
                        }
                        alpha[order.regimes() - 1] = 1.0 - head;
                        std::swap(alpha[g], alpha[st]);
                        for (int m = 0; m + 1 < order.regimes(); ++m)
                            cand[view.alpha_at(m)] = alpha[m];
                        if (!packed_violations(cand, order, shared_ar).empty())
                            continue;
                        const RefineResult alt =
                            local_refine(series, order, cand, mode, shared_ar);
                        if (alt.loglik > refined.loglik) refined = alt;
                    }
                }
            }
            out.trace.refined_loglik = refined.loglik;
            out.trace.converged = refined.converged;

            const FitnessValue fv = eval_packed(refined.x, series, order, shared_ar,
                                                mode, cfg.redundancy_threshold);
            out.trace.identified = fv.valid && fv.identified;

            double max_root = 0.0;
            const GStmarModel refined_model = unpack(refined.x, order, shared_ar);
            for (const auto& reg : refined_model.regimes())
                max_root = std::max(max_root, max_ar_root_modulus(reg.ar.coeffs));
            out.trace.boundary_flagged = max_root > 1.0 - 1e-3;

            out.x = refined.x;
            out.usable = fv.valid;
        } catch (const Error&) {
            out.usable = false;
        }
    }

    // Deterministic winner: prefer identified non-boundary rounds, then
    // identified ones, ranked by the requested likelihood with the round
    // index breaking ties.
    auto pick = [&](bool need_identified, bool allow_boundary) -> int {
        int best = -1;
        for (int r = 0; r < n_rounds; ++r) {
            const auto& o = outcomes[r];
            if (!o.usable) continue;
            if (need_identified && !o.trace.identified) continue;
            if (!allow_boundary && o.trace.boundary_flagged) continue;
            if (best < 0 || o.trace.refined_loglik > outcomes[best].trace.refined_loglik)
                best = r;
        }
        return best;
    };
    int winner = pick(true, false);
    if (winner < 0) winner = pick(true, true);
    if (winner < 0) {
        std::ostringstream msg;
        msg << "no estimation round produced an identified model; trace:";
        for (const auto& o : outcomes)
            msg << " [round " << o.trace.round << " ga=" << o.trace.ga_loglik
                << " refined=" << o.trace.refined_loglik
                << (o.trace.identified ? " identified" : " unidentified")
                << (o.trace.boundary_flagged ? " boundary" : "") << "]";
        throw Error(msg.str());
    }

    Vector winner_x = outcomes[winner].x;
    double winner_loglik = outcomes[winner].trace.refined_loglik;

    // The dof coordinates are weakly identified: the refinement can park a
    // Student regime at an enormous dof when a moderate value fits better
    // (or the other way around), because the likelihood is almost flat in
    // between. Re-refining the winner from a small dof grid walks across
    // that flat stretch for the price of a few local searches.
    if (order.m2 > 0) {
        const PackedView view{order, shared_ar};
        for (int m = order.m1; m < order.regimes(); ++m) {
            for (double nu : {3.0, 5.0, 10.0, 50.0}) {
                Vector cand = winner_x;
                cand[view.nu_at(m)] = nu;
                if (!packed_violations(cand, order, shared_ar).empty()) continue;
                try {
                    const RefineResult alt =
                        local_refine(series, order, cand, mode, shared_ar);
                    const FitnessValue fv =
                        eval_packed(alt.x, series, order, shared_ar, mode,
                                    cfg.redundancy_threshold);
                    if (fv.valid && fv.identified && alt.loglik > winner_loglik) {
                        double max_root = 0.0;
                        const GStmarModel alt_model = unpack(alt.x, order, shared_ar);
                        for (const auto& reg : alt_model.regimes())
                            max_root = std::max(max_root,
                                                max_ar_root_modulus(reg.ar.coeffs));
                        if (max_root <= 1.0 - 1e-3) {
                            winner_x = alt.x;
                            winner_loglik = alt.loglik;
                        }
                    }
                } catch (const Error&) {
                }
            }
        }
    }

    GStmarModel model = canonicalize(unpack(winner_x, order, shared_ar));
    EstimationResult result{std::move(model), winner_loglik,
                            mode, std::nullopt, false, {}, 0, false, false};
    result.identified = outcomes[winner].trace.identified;
    result.boundary_flagged = outcomes[winner].trace.boundary_flagged;
    result.n_obs_effective = static_cast<int>(series.size()) - order.p;
    for (const auto& o : outcomes) result.rounds.push_back(o.trace);

    const StdErrorReport se = std_errors(series, result.model, mode);
    result.hessian_ok = se.hessian_ok;
    if (se.hessian_ok) result.std_errors = se.se;
    return result;
}

} // namespace gstmar
