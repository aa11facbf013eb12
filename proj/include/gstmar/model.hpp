#ifndef GSTMAR_MODEL_HPP
#define GSTMAR_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "gstmar/ar_stationary.hpp"
#include "gstmar/distributions.hpp"
#include "gstmar/linalg.hpp"

namespace gstmar {

// Model order: AR order p, number of Gaussian-type regimes m1, number of
// Student-t-type regimes m2.
struct ModelOrder {
    int p = 1;
    int m1 = 0;
    int m2 = 0;

    int regimes() const { return m1 + m2; }
    // Free parameters: M(p+3) + M2 - 1 unrestricted, with the common AR
    // vector counted once under the shared-AR restriction.
    int param_count(bool shared_ar = false) const {
        const int m = regimes();
        int k = m * (p + 3) + m2 - 1;
        if (shared_ar) k -= (m - 1) * p;
        return k;
    }
    bool valid() const { return p >= 1 && m1 >= 0 && m2 >= 0 && regimes() >= 1; }
};

// One mixture component. Gaussian regimes have no dof; Student regimes
// carry dof > 2.
struct Regime {
    ArCoefficients ar;
    std::optional<double> dof;

    bool is_student() const { return dof.has_value(); }
};

// Admitted dof values are capped here; larger values are numerically
// indistinguishable from a Gaussian regime and wreck the Hessian.
constexpr double kMaxDof = 1e7;

// Immutable G-StMAR model. Construction validates the parameter space
// (stationarity, positive variances, dof > 2, mixing weights summing to
// one) and precomputes the per-regime stationary moments and Cholesky
// factors that the likelihood re-uses at every observation.
class GStmarModel {
public:
    GStmarModel(ModelOrder order, std::vector<Regime> regimes, Vector alphas,
                bool shared_ar = false);

    const ModelOrder& order() const { return order_; }
    const std::vector<Regime>& regimes() const { return regimes_; }
    const Regime& regime(int m) const { return regimes_[m]; }
    const Vector& alphas() const { return alphas_; }
    bool shared_ar() const { return shared_ar_; }
    bool dof_clamped() const { return dof_clamped_; }

    const RegimeMoments& moments(int m) const { return caches_[m].moments; }
    const Cholesky& chol_p(int m) const { return caches_[m].chol_p; }
    double log_alpha(int m) const { return caches_[m].log_alpha; }
    // log of the constant part of the p-dim stationary density d_m.
    double log_dm_const(int m) const { return caches_[m].log_dm_const; }
    // log of the constant part of the 1-dim conditional density.
    double log_cond_const(int m) const { return caches_[m].log_cond_const; }

    // Stationary p-dim law of regime m as distribution parameters.
    MvnParams regime_stationary_gaussian(int m) const;
    MvtParams regime_stationary_student(int m) const;

private:
    struct RegimeCache {
        RegimeMoments moments;
        Cholesky chol_p;
        double log_alpha;
        double log_dm_const;
        double log_cond_const;
        RegimeCache(RegimeMoments mom, Cholesky chol)
            : moments(std::move(mom)), chol_p(std::move(chol)),
              log_alpha(0), log_dm_const(0), log_cond_const(0) {}
    };

    ModelOrder order_;
    std::vector<Regime> regimes_;
    Vector alphas_;
    bool shared_ar_ = false;
    bool dof_clamped_ = false;
    std::vector<RegimeCache> caches_;
};

// Unconditional (stationary) moments of the mixture process.
struct UnconditionalMoments {
    double mean = 0.0;
    Vector autocov;        // gamma_0 .. gamma_p of the process
    Vector regime_means;   // mu_m
    Vector regime_var;     // gamma_{m,0}
};

UnconditionalMoments unconditional_moments(const GStmarModel& model);

// Reorders regimes into the identified form: descending alpha within the
// Gaussian block and within the Student block. Exact alpha ties break by
// ascending sigma^2, then ascending dof.
GStmarModel canonicalize(const GStmarModel& model);

bool is_canonical(const GStmarModel& model);

// JSON document round-trip (schema documented in the README).
struct ModelMeta {
    std::string created;
    std::uint64_t seed = 0;
    std::string data_hash;
};

std::string model_to_json(const GStmarModel& model, const ModelMeta& meta);
GStmarModel model_from_json(const std::string& text);

} // namespace gstmar

#endif
