#pragma once

#include <cstdint>
#include <functional>

#include "exclqa/anneal.hpp"
#include "exclqa/ising.hpp"

namespace exclqa {

/// Single-chain Metropolis-Hastings configuration. A nonpositive temperature
/// selects the automatic default 0.25 * coefficient_scale of the Hamiltonian.
struct MetropolisConfig {
    std::int64_t iterations = 100;
    double temperature = 0.0; // <= 0: auto
    std::uint64_t seed = 0;

    void validate() const;
};

/// Default chain temperature for a given Hamiltonian.
double auto_temperature(const IsingHamiltonian& h);

/// Penalized cost of a discrete spin configuration; same formulas and clamp
/// as the annealer's final cost, with <H_z> replaced by the exact energy.
double discrete_final_cost(const IsingHamiltonian& h, const SpinConfig& s, const CostKind& kind);

/// Called after every chain step with the current (post-accept/reject) state.
using ChainObserver = std::function<void(const SpinConfig&)>;

/// Runs a single-spin-flip Metropolis chain from a uniform random start and
/// returns the best-cost configuration visited. Acceptance probability is
/// min(1, exp(-(E_F(y) - E_F(x)) / T)).
ShotResult metropolis_optimize(const IsingHamiltonian& h, const CostKind& kind,
                               const MetropolisConfig& config,
                               const ChainObserver& observer = {});

} // namespace exclqa
