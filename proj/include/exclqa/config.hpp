#pragma once

#include "exclqa/bench.hpp"
#include "exclqa/json_io.hpp"

namespace exclqa {

/// Key-value (JSON) hyperparameter block; keys carry the published names:
/// N, gamma, beta, mu, eta, f, M, alpha, s, r_factor, cost_kind, local_dim.
/// M is "gram_norm", "gram_norm/50" or a number; local_dim is the power of
/// two 2^k.
Json hyper_to_json(const HyperParams& h);

/// Applies the keys present in j on top of base.
HyperParams hyper_from_json(const Json& j, HyperParams base = {});

/// Experiment-level keys: profile ("desk" | "paper" | {q,d,k}), ranks,
/// instances_per_rank, max_shots, method, seed, workers, tune_alpha,
/// iterations, temperature, enum_timeout, plus the hyperparameter block.
Json experiment_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_from_json(const Json& j, ExperimentConfig base = {});

} // namespace exclqa
