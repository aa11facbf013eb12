#ifndef GSTMAR_ESTIMATION_HPP
#define GSTMAR_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gstmar/likelihood.hpp"
#include "gstmar/model.hpp"

namespace gstmar {

// Genetic-algorithm knobs. Zero population size means 10x the packed
// parameter count.
struct GaConfig {
    int population_size = 0;
    int generations = 200;
    double min_crossover_rate = 0.4;
    int smart_mutation_start = 120;
    double redundancy_threshold = 0.05;
    double boundary_mutation_prob = 0.1;
    double fitness_inheritance_prob = 0.5;
    std::uint64_t seed = 1;
    bool verbose = false;
    int round_index = 0; // labels progress lines when rounds run in parallel
};

// Packed parameter vector layout (theta):
//   unrestricted: (phi0_m, phi_m1..phi_mp, sigma2_m) for m = 1..M,
//                 alpha_1..alpha_{M-1}, nu_{M1+1}..nu_M
//   shared AR:    (phi0_m, sigma2_m) for m = 1..M, common phi_1..phi_p,
//                 alpha_1..alpha_{M-1}, nu_{M1+1}..nu_M
int packed_length(const ModelOrder& order, bool shared_ar);
Vector pack(const GStmarModel& model);
GStmarModel unpack(const Vector& theta, const ModelOrder& order, bool shared_ar = false);
// Empty when theta lies inside the parameter space; otherwise one line
// per violated restriction. unpack throws ConstraintError carrying this
// list.
std::vector<std::string> packed_violations(const Vector& theta, const ModelOrder& order,
                                           bool shared_ar = false);

struct GaResult {
    Vector best;              // packed, raw coordinates
    double best_loglik = -HUGE_VAL; // conditional log-likelihood, unscaled
    bool identified = false;
    long likelihood_evals = 0;
    long inherited_evals = 0;
};

// Modified genetic algorithm: exponential-rank selection with redundant
// regimes penalized, individually adaptive crossover/mutation rates with
// a 40% crossover floor, whole-vector replacement mutations (sometimes
// near the stationarity boundary), fitness inheritance, mass mutation on
// premature convergence and late-stage smart mutations around the best
// identified vector.
GaResult genetic_search(const Vector& series, const ModelOrder& order,
                        const GaConfig& cfg, bool shared_ar = false);

struct RefineResult {
    Vector x;      // packed, raw coordinates
    double loglik = -HUGE_VAL;
    bool converged = false;
    int iterations = 0;
    double grad_inf_norm = HUGE_VAL; // in the optimizer's transformed space
};

// Quasi-Newton (BFGS) ascent with central-difference gradients in
// transformed coordinates (log sigma^2, logit alpha, log(nu - 2)); steps
// that leave the parameter space evaluate to -inf and are backtracked.
RefineResult local_refine(const Vector& series, const ModelOrder& order,
                          const Vector& start, LikMode mode, bool shared_ar = false);

struct StdErrorReport {
    std::optional<Vector> se; // aligned to the packed vector
    bool hessian_ok = false;
    std::string note;
};

// Central-difference Hessian of the unscaled log-likelihood at the
// estimate; absent standard errors (with a singularity note) are the
// documented outcome for weakly identified parameters such as huge dof.
StdErrorReport std_errors(const Vector& series, const GStmarModel& model, LikMode mode);

struct RoundTrace {
    int round = 0;
    double ga_loglik = -HUGE_VAL;
    double refined_loglik = -HUGE_VAL;
    bool converged = false;
    bool identified = false;
    bool boundary_flagged = false;
};

struct EstimationResult {
    GStmarModel model;
    double loglik = -HUGE_VAL;
    LikMode mode = LikMode::exact;
    std::optional<Vector> std_errors;
    bool hessian_ok = false;
    std::vector<RoundTrace> rounds;
    int n_obs_effective = 0;
    bool identified = false;
    bool boundary_flagged = false;
};

// Two-phase estimation: n_rounds independent GA + refinement rounds (run
// in parallel, each on its own derived seed), non-identified and
// near-unit-root solutions discarded, winner canonicalized and equipped
// with standard errors.
EstimationResult estimate(const Vector& series, const ModelOrder& order, int n_rounds,
                          GaConfig cfg, LikMode mode, bool shared_ar = false);

} // namespace gstmar

#endif
