#include "gstmar/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gstmar/error.hpp"

namespace gstmar {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

GStmarModel::GStmarModel(ModelOrder order, std::vector<Regime> regimes, Vector alphas,
                         bool shared_ar)
    : order_(order), regimes_(std::move(regimes)), alphas_(std::move(alphas)),
      shared_ar_(shared_ar) {
    if (!order_.valid())
        throw DomainError("invalid model order: need p >= 1 and at least one regime");
    const int m_total = order_.regimes();
    if (static_cast<int>(regimes_.size()) != m_total)
        throw DomainError("regime count does not match the model order");
    if (static_cast<int>(alphas_.size()) != m_total)
        throw DomainError("mixing-weight parameter count does not match the model order");

    double alpha_sum = 0.0;
    for (int m = 0; m < m_total; ++m) {
        const double a = alphas_[m];
        if (!(a > 0.0) || !(a < 1.0 + 1e-12) || (m_total > 1 && !(a < 1.0))) {
            std::ostringstream msg;
            msg << "alpha_" << (m + 1) << " = " << a << " outside (0,1)";
            throw DomainError(msg.str());
        }
        alpha_sum += a;
    }
    if (std::fabs(alpha_sum - 1.0) > 1e-8) {
        std::ostringstream msg;
        msg << "mixing weights sum to " << alpha_sum << ", expected 1";
        throw DomainError(msg.str());
    }
    // Renormalize only when the sum drifts measurably; keeping the input
    // bits stable makes canonical forms of permuted models identical.
    if (std::fabs(alpha_sum - 1.0) > 1e-12)
        for (auto& a : alphas_) a /= alpha_sum;

    for (int m = 0; m < m_total; ++m) {
        Regime& reg = regimes_[m];
        if (static_cast<int>(reg.ar.coeffs.size()) != order_.p)
            throw DomainError("regime AR coefficient count does not match p");
        if (!(reg.ar.noise_var > 0.0)) {
            std::ostringstream msg;
            msg << "sigma^2 of regime " << (m + 1) << " must be positive";
            throw DomainError(msg.str());
        }
        const bool want_student = m >= order_.m1;
        if (reg.is_student() != want_student)
            throw DomainError("regime type does not match the (m1, m2) layout");
        if (reg.is_student()) {
            if (!(*reg.dof > 2.0)) {
                std::ostringstream msg;
                msg << "dof of regime " << (m + 1) << " must exceed 2 (got " << *reg.dof << ")";
                throw DomainError(msg.str());
            }
            if (*reg.dof > kMaxDof) {
                reg.dof = kMaxDof;
                dof_clamped_ = true;
            }
        }
        if (!is_stationary(reg.ar.coeffs)) {
            std::ostringstream msg;
            msg << "regime " << (m + 1) << " AR coefficients are not stationary";
            throw StationarityError(msg.str());
        }
    }
    if (shared_ar_) {
        for (int m = 1; m < m_total; ++m)
            if (regimes_[m].ar.coeffs != regimes_[0].ar.coeffs)
                throw DomainError("shared-AR model has differing AR coefficient vectors");
    }

    caches_.reserve(m_total);
    const double p = static_cast<double>(order_.p);
    for (int m = 0; m < m_total; ++m) {
        RegimeMoments mom = stationary_moments(regimes_[m].ar);
        Cholesky chol(mom.gamma_p);
        RegimeCache cache(std::move(mom), std::move(chol));
        cache.log_alpha = std::log(alphas_[m]);
        if (regimes_[m].is_student()) {
            const double nu = *regimes_[m].dof;
            cache.log_dm_const = log_t_normalizer(order_.p, nu) - 0.5 * cache.chol_p.log_det();
            cache.log_cond_const = log_t_normalizer(1, nu + p);
        } else {
            cache.log_dm_const = -0.5 * (p * kLog2Pi + cache.chol_p.log_det());
            cache.log_cond_const =
                -0.5 * (kLog2Pi + std::log(regimes_[m].ar.noise_var));
        }
        caches_.push_back(std::move(cache));
    }
}

MvnParams GStmarModel::regime_stationary_gaussian(int m) const {
    const auto& mom = moments(m);
    Vector mean(order_.p, mom.mean);
    return {std::move(mean), mom.gamma_p};
}

MvtParams GStmarModel::regime_stationary_student(int m) const {
    const auto& mom = moments(m);
    Vector mean(order_.p, mom.mean);
    return {std::move(mean), mom.gamma_p, *regimes_[m].dof};
}

UnconditionalMoments unconditional_moments(const GStmarModel& model) {
    const int m_total = model.order().regimes();
    const int p = model.order().p;
    UnconditionalMoments out;
    out.regime_means.resize(m_total);
    out.regime_var.resize(m_total);
    for (int m = 0; m < m_total; ++m) {
        out.regime_means[m] = model.moments(m).mean;
        out.regime_var[m] = model.moments(m).gamma[0];
    }
    out.mean = 0.0;
    for (int m = 0; m < m_total; ++m) out.mean += model.alphas()[m] * out.regime_means[m];
    // The between-regime dispersion term enters every lag with the same
    // weight; only the within-regime autocovariances depend on j.
    out.autocov.assign(p + 1, 0.0);
    for (int j = 0; j <= p; ++j) {
        double v = 0.0;
        for (int m = 0; m < m_total; ++m) {
            const double dm = out.regime_means[m] - out.mean;
            v += model.alphas()[m] * (model.moments(m).gamma[j] + dm * dm);
        }
        out.autocov[j] = v;
    }
    return out;
}

namespace {

std::vector<int> canonical_permutation(const GStmarModel& model) {
    const int m1 = model.order().m1;
    const int m_total = model.order().regimes();
    std::vector<int> perm(m_total);
    std::iota(perm.begin(), perm.end(), 0);
    auto cmp = [&](int a, int b) {
        const double aa = model.alphas()[a], ab = model.alphas()[b];
        if (aa != ab) return aa > ab;
        const double va = model.regime(a).ar.noise_var, vb = model.regime(b).ar.noise_var;
        if (va != vb) return va < vb;
        const double da = model.regime(a).dof.value_or(0.0);
        const double db = model.regime(b).dof.value_or(0.0);
        return da < db;
    };
    std::sort(perm.begin(), perm.begin() + m1, cmp);
    std::sort(perm.begin() + m1, perm.end(), cmp);
    return perm;
}

} // namespace

GStmarModel canonicalize(const GStmarModel& model) {
    const auto perm = canonical_permutation(model);
    std::vector<Regime> regimes;
    Vector alphas;
    regimes.reserve(perm.size());
    alphas.reserve(perm.size());
    for (int idx : perm) {
        regimes.push_back(model.regime(idx));
        alphas.push_back(model.alphas()[idx]);
    }
    return GStmarModel(model.order(), std::move(regimes), std::move(alphas),
                       model.shared_ar());
}

bool is_canonical(const GStmarModel& model) {
    const auto perm = canonical_permutation(model);
    for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != static_cast<int>(i)) return false;
    return true;
}

std::string model_to_json(const GStmarModel& model, const ModelMeta& meta) {
    nlohmann::json doc;
    doc["order"] = {{"p", model.order().p}, {"m1", model.order().m1}, {"m2", model.order().m2}};
    doc["regimes"] = nlohmann::json::array();
    for (const auto& reg : model.regimes()) {
        nlohmann::json r;
        r["phi0"] = reg.ar.intercept;
        r["phi"] = reg.ar.coeffs;
        r["sigma2"] = reg.ar.noise_var;
        if (reg.is_student()) r["nu"] = *reg.dof;
        doc["regimes"].push_back(std::move(r));
    }
    doc["alphas"] = model.alphas();
    doc["constraints"] = {{"shared_ar", model.shared_ar()}};
    doc["meta"] = {{"created", meta.created}, {"seed", meta.seed}, {"data_hash", meta.data_hash}};
    return doc.dump(2);
}

GStmarModel model_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IngestError(std::string("model JSON parse error: ") + e.what());
    }
    ModelOrder order;
    order.p = doc.at("order").at("p").get<int>();
    order.m1 = doc.at("order").at("m1").get<int>();
    order.m2 = doc.at("order").at("m2").get<int>();
    std::vector<Regime> regimes;
    for (const auto& r : doc.at("regimes")) {
        Regime reg;
        reg.ar.intercept = r.at("phi0").get<double>();
        reg.ar.coeffs = r.at("phi").get<Vector>();
        reg.ar.noise_var = r.at("sigma2").get<double>();
        if (r.contains("nu")) reg.dof = r.at("nu").get<double>();
        regimes.push_back(std::move(reg));
    }
    Vector alphas = doc.at("alphas").get<Vector>();
    bool shared_ar = false;
    if (doc.contains("constraints") && doc["constraints"].contains("shared_ar"))
        shared_ar = doc["constraints"]["shared_ar"].get<bool>();
    return GStmarModel(order, std::move(regimes), std::move(alphas), shared_ar);
}

} // namespace gstmar
