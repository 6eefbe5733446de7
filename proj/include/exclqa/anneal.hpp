#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "exclqa/ising.hpp"
#include "exclqa/rng.hpp"

namespace exclqa {

/// Product ansatz over n qubits, parametrized by unconstrained weights w.
/// The per-spin angle is theta_i = (pi/2) * tanh(w_i), strictly inside
/// (-pi/2, pi/2) for finite w, so <sigma_z> = sin theta and <sigma_x> = cos theta.
struct AnsatzState {
    std::vector<double> w;

    AnsatzState() = default;
    explicit AnsatzState(std::vector<double> weights) : w(std::move(weights)) {}

    std::size_t size() const { return w.size(); }
    double theta(std::size_t i) const;
};

/// Final cost function selector. GroundState is the plain expected energy;
/// the two penalty kinds raise low-lying levels so the minimum of the cost
/// sits near an excited level instead of the ground state.
class CostKind {
public:
    enum class Type { GroundState, InversePenalty, ExpPenalty };

    static CostKind ground_state() { return CostKind(Type::GroundState, 0, 0, 0); }
    static CostKind inverse_penalty(double alpha);
    static CostKind exp_penalty(double r, double s);

    Type type() const { return type_; }
    double alpha() const { return alpha_; }
    double r() const { return r_; }
    double s() const { return s_; }

private:
    CostKind(Type t, double alpha, double r, double s)
        : type_(t), alpha_(alpha), r_(r), s_(s) {}

    Type type_;
    double alpha_;
    double r_;
    double s_;
};

/// Denominator clamp for the inverse penalty; the raw cost diverges at zero
/// energy, which the trivial solution of SVP Hamiltonians actually attains.
inline constexpr double kInversePenaltyEps = 1e-9;

/// Penalized cost value for a given (expected or discrete) energy.
double penalized_energy(double hz, const CostKind& kind);

/// d(penalized cost)/d(energy). The penalty derivative is frozen to zero
/// inside the inverse-penalty clamp region.
double penalized_energy_derivative(double hz, const CostKind& kind);

/// Annealing schedule and optimizer hyperparameters.
struct AnnealSchedule {
    int steps = 100;             // N: points in [0,1]
    double gamma = 8.0;          // strength of the final cost
    double beta = 3.8;           // schedule exponent on t
    double learning_rate = 0.1;  // eta
    double momentum = 0.9;       // mu, in [0,1)
    double init_half_width = 0.2; // f: initial w_i ~ U[-f, f]

    void validate() const;
};

/// One trace sample per annealing step.
struct TracePoint {
    int step;
    double t;
    double e_final;
    double e_total;
};

/// Outcome of a single annealing (or Metropolis) execution.
struct ShotResult {
    SpinConfig config;
    double energy = 0.0; // discrete Ising energy of config
    std::optional<std::vector<TracePoint>> trace;
};

/// <H_z> over the product ansatz: constant + sum h_i sin(theta_i)
/// + sum_{i<j} 2 J_ij sin(theta_i) sin(theta_j).
double expected_energy(const IsingHamiltonian& h, const AnsatzState& state);

/// E_I = -<H_x> = -sum_i cos(theta_i).
double transverse_cost(const AnsatzState& state);

/// Final cost E_F of the given kind evaluated at <H_z>.
double final_cost(const IsingHamiltonian& h, const AnsatzState& state, const CostKind& kind);

/// (1-t) * E_I + t^beta * gamma * E_F, for t in [0,1].
double total_cost(const IsingHamiltonian& h, const AnsatzState& state, const CostKind& kind,
                  const AnnealSchedule& schedule, double t);

/// Analytic gradient of total_cost with respect to w.
std::vector<double> grad_total_cost(const IsingHamiltonian& h, const AnsatzState& state,
                                    const CostKind& kind, const AnnealSchedule& schedule,
                                    double t);

/// Momentum SGD update: velocity' = mu*velocity + grad; w' = w - eta*velocity'.
void sgd_step(AnsatzState& state, const std::vector<double>& grad,
              std::vector<double>& velocity, const AnnealSchedule& schedule);

/// sign(w) with sign(0) = +1.
SpinConfig decode(const AnsatzState& state);

/// Runs the full annealing loop from the given initial weights: N steps on
/// the grid t_i = i/N, gradient at t_i evaluated at the parameters of step
/// i-1, then decodes. Set record_trace to collect (t, E_F, E_Total) samples.
ShotResult anneal(const IsingHamiltonian& h, const CostKind& kind,
                  const AnnealSchedule& schedule, const std::vector<double>& initial_w,
                  bool record_trace = false);

struct RunShotsResult {
    ShotResult best;
    int shots_used = 0;
    bool succeeded = false;
};

using SuccessPredicate = std::function<bool(const ShotResult&)>;

/// Multi-shot driver. Each shot samples initial weights uniformly from
/// [-f, f]^n with a seed derived from (seed, shot index), so the sequence is
/// reproducible and independent of execution order. Stops early when the
/// predicate accepts a shot (that shot is returned); otherwise returns the
/// shot with the lowest penalized discrete cost.
RunShotsResult run_shots(const IsingHamiltonian& h, const CostKind& kind,
                         const AnnealSchedule& schedule, int max_shots,
                         const SuccessPredicate& success, std::uint64_t seed);

} // namespace exclqa
