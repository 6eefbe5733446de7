#include "exclqa/config.hpp"

#include <cmath>

namespace exclqa {

namespace {

std::string cost_kind_name(CostKind::Type t) {
    switch (t) {
    case CostKind::Type::GroundState: return "ground_state";
    case CostKind::Type::InversePenalty: return "inverse_penalty";
    case CostKind::Type::ExpPenalty: return "exp_penalty";
    }
    return "ground_state";
}

CostKind::Type cost_kind_from_name(const std::string& name) {
    if (name == "ground_state") return CostKind::Type::GroundState;
    if (name == "inverse_penalty") return CostKind::Type::InversePenalty;
    if (name == "exp_penalty") return CostKind::Type::ExpPenalty;
    throw ValidationError("unknown cost_kind: " + name);
}

Json rescale_to_json(const RescaleRule& r) {
    switch (r.mode) {
    case RescaleRule::Mode::GramNorm: return Json("gram_norm");
    case RescaleRule::Mode::GramNormOver50: return Json("gram_norm/50");
    case RescaleRule::Mode::Fixed: return Json(r.fixed);
    }
    return Json(1.0);
}

RescaleRule rescale_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "gram_norm") return RescaleRule::gram_norm();
        if (s == "gram_norm/50") return RescaleRule::gram_norm_over_50();
        throw ValidationError("unknown rescale rule M: " + s);
    }
    const double v = j.get<double>();
    if (!(v > 0.0)) {
        throw ValidationError("rescale factor M must be positive");
    }
    return RescaleRule::fixed_value(v);
}

int local_bits_from_dim(std::int64_t dim) {
    if (dim < 2) {
        throw ValidationError("local_dim must be a power of two >= 2");
    }
    int bits = 0;
    std::int64_t v = dim;
    while (v > 1) {
        if (v % 2 != 0) {
            throw ValidationError("local_dim must be a power of two >= 2");
        }
        v /= 2;
        ++bits;
    }
    return bits;
}

} // namespace

Json hyper_to_json(const HyperParams& h) {
    Json j{{"N", h.steps},
           {"gamma", h.gamma},
           {"beta", h.beta},
           {"mu", h.mu},
           {"eta", h.eta},
           {"f", h.f},
           {"M", rescale_to_json(h.rescale)},
           {"cost_kind", cost_kind_name(h.cost)},
           {"local_dim", std::int64_t{1} << h.local_bits}};
    if (h.cost == CostKind::Type::InversePenalty) {
        j["alpha"] = h.alpha;
    }
    if (h.cost == CostKind::Type::ExpPenalty) {
        j["s"] = h.s;
        j["r_factor"] = h.r_factor;
    }
    return j;
}

HyperParams hyper_from_json(const Json& j, HyperParams base) {
    if (j.contains("N")) base.steps = j.at("N").get<int>();
    if (j.contains("gamma")) base.gamma = j.at("gamma").get<double>();
    if (j.contains("beta")) base.beta = j.at("beta").get<double>();
    if (j.contains("mu")) base.mu = j.at("mu").get<double>();
    if (j.contains("eta")) base.eta = j.at("eta").get<double>();
    if (j.contains("f")) base.f = j.at("f").get<double>();
    if (j.contains("M")) base.rescale = rescale_from_json(j.at("M"));
    if (j.contains("alpha")) base.alpha = j.at("alpha").get<double>();
    if (j.contains("s")) base.s = j.at("s").get<double>();
    if (j.contains("r_factor")) base.r_factor = j.at("r_factor").get<double>();
    if (j.contains("cost_kind")) base.cost = cost_kind_from_name(j.at("cost_kind").get<std::string>());
    if (j.contains("local_dim")) base.local_bits = local_bits_from_dim(j.at("local_dim").get<std::int64_t>());
    return base;
}

Json experiment_to_json(const ExperimentConfig& cfg) {
    Json j = hyper_to_json(cfg.hyper);
    j["profile"] = Json{{"q", cfg.profile.q}, {"d", cfg.profile.d}, {"k", cfg.profile.k}};
    j["ranks"] = cfg.ranks;
    j["instances_per_rank"] = cfg.instances_per_rank;
    j["max_shots"] = cfg.max_shots;
    j["method"] = solver_name(cfg.solver);
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    j["tune_alpha"] = cfg.tune_alpha_per_instance;
    j["iterations"] = cfg.metropolis_iterations;
    j["temperature"] = cfg.metropolis_temperature;
    j["enum_timeout"] = cfg.enum_timeout_seconds;
    return j;
}

ExperimentConfig experiment_from_json(const Json& j, ExperimentConfig base) {
    base.hyper = hyper_from_json(j, base.hyper);
    if (j.contains("profile")) {
        const Json& p = j.at("profile");
        if (p.is_string()) {
            const auto name = p.get<std::string>();
            if (name == "desk") {
                base.profile = LatticeProfile::desk();
            } else if (name == "paper") {
                base.profile = LatticeProfile::paper();
            } else {
                throw ValidationError("unknown profile: " + name);
            }
        } else {
            base.profile.q = p.at("q").get<std::int64_t>();
            base.profile.d = p.at("d").get<int>();
            base.profile.k = p.at("k").get<int>();
        }
    }
    if (j.contains("ranks")) base.ranks = j.at("ranks").get<std::vector<int>>();
    if (j.contains("instances_per_rank"))
        base.instances_per_rank = j.at("instances_per_rank").get<int>();
    if (j.contains("max_shots")) base.max_shots = j.at("max_shots").get<int>();
    if (j.contains("method")) base.solver = solver_from_name(j.at("method").get<std::string>());
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) base.workers = j.at("workers").get<int>();
    if (j.contains("tune_alpha")) base.tune_alpha_per_instance = j.at("tune_alpha").get<bool>();
    if (j.contains("iterations"))
        base.metropolis_iterations = j.at("iterations").get<std::int64_t>();
    if (j.contains("temperature"))
        base.metropolis_temperature = j.at("temperature").get<double>();
    if (j.contains("enum_timeout")) base.enum_timeout_seconds = j.at("enum_timeout").get<double>();
    return base;
}

} // namespace exclqa
