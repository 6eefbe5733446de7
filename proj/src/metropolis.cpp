#include "exclqa/metropolis.hpp"

#include <cmath>

#include "exclqa/rng.hpp"

namespace exclqa {

void MetropolisConfig::validate() const {
    if (iterations < 1) {
        throw ValidationError("metropolis requires iterations >= 1");
    }
}

double auto_temperature(const IsingHamiltonian& h) {
    // Hot enough to cross the uphill barriers between local minima of the
    // penalized cost within a few hundred proposals, cold enough to keep the
    // chain concentrated on low-lying levels.
    const double scale = h.coefficient_scale();
    return scale > 0.0 ? 0.25 * scale : 1.0;
}

double discrete_final_cost(const IsingHamiltonian& h, const SpinConfig& s, const CostKind& kind) {
    return penalized_energy(energy(h, s), kind);
}

ShotResult metropolis_optimize(const IsingHamiltonian& h, const CostKind& kind,
                               const MetropolisConfig& config, const ChainObserver& observer) {
    config.validate();
    const double temperature =
        config.temperature > 0.0 ? config.temperature : auto_temperature(h);
    const std::size_t n = h.size();
    Rng rng(config.seed);

    SpinConfig current(n);
    for (auto& s : current) {
        s = rng.uniform_int(2) == 0 ? -1 : 1;
    }
    double current_energy = energy(h, current);
    double current_cost = penalized_energy(current_energy, kind);

    SpinConfig best = current;
    double best_cost = current_cost;

    std::vector<double> spins(n);
    for (std::size_t i = 0; i < n; ++i) spins[i] = current[i];

    for (std::int64_t it = 0; it < config.iterations; ++it) {
        const std::size_t flip = static_cast<std::size_t>(rng.uniform_int(n));
        // Energy change of flipping spin `flip`: -2 s_i (h_i + 2 (J s)_i).
        const double local_field =
            h.linear()[flip] + 2.0 * h.coupling_row_dot(flip, spins);
        const double delta_energy = -2.0 * spins[flip] * local_field;
        const double proposed_cost = penalized_energy(current_energy + delta_energy, kind);

        bool accept = proposed_cost <= current_cost;
        if (!accept) {
            accept = rng.uniform01() < std::exp(-(proposed_cost - current_cost) / temperature);
        }
        if (accept) {
            current[flip] = static_cast<std::int8_t>(-current[flip]);
            spins[flip] = -spins[flip];
            current_energy += delta_energy;
            current_cost = proposed_cost;
            if (current_cost < best_cost) {
                best_cost = current_cost;
                best = current;
            }
        }
        if (observer) {
            observer(current);
        }
    }

    ShotResult result;
    result.config = std::move(best);
    result.energy = energy(h, result.config);
    return result;
}

} // namespace exclqa
