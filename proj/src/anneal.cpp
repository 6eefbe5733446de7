#include "exclqa/anneal.hpp"

#include <cmath>

namespace exclqa {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
} // namespace

double AnsatzState::theta(std::size_t i) const {
    return kHalfPi * std::tanh(w[i]);
}

CostKind CostKind::inverse_penalty(double alpha) {
    if (!(alpha > 0.0)) {
        throw ValidationError("inverse penalty requires alpha > 0");
    }
    return CostKind(Type::InversePenalty, alpha, 0, 0);
}

CostKind CostKind::exp_penalty(double r, double s) {
    if (!(r > 0.0) || !(s > 0.0)) {
        throw ValidationError("exponential penalty requires r > 0 and s > 0");
    }
    return CostKind(Type::ExpPenalty, 0, r, s);
}

double penalized_energy(double hz, const CostKind& kind) {
    switch (kind.type()) {
    case CostKind::Type::GroundState:
        return hz;
    case CostKind::Type::InversePenalty:
        return hz + kind.alpha() / std::max(hz, kInversePenaltyEps);
    case CostKind::Type::ExpPenalty:
        return hz + kind.r() * std::exp(-kind.s() * hz);
    }
    return hz;
}

double penalized_energy_derivative(double hz, const CostKind& kind) {
    switch (kind.type()) {
    case CostKind::Type::GroundState:
        return 1.0;
    case CostKind::Type::InversePenalty:
        if (hz > kInversePenaltyEps) {
            return 1.0 - kind.alpha() / (hz * hz);
        }
        return 1.0; // penalty gradient frozen inside the clamp
    case CostKind::Type::ExpPenalty:
        return 1.0 - kind.r() * kind.s() * std::exp(-kind.s() * hz);
    }
    return 1.0;
}

void AnnealSchedule::validate() const {
    if (steps < 1) throw ValidationError("schedule requires steps >= 1");
    if (!(gamma > 0.0)) throw ValidationError("schedule requires gamma > 0");
    if (!(beta > 0.0)) throw ValidationError("schedule requires beta > 0");
    if (!(learning_rate > 0.0)) throw ValidationError("schedule requires learning_rate > 0");
    if (!(momentum >= 0.0 && momentum < 1.0)) throw ValidationError("schedule requires momentum in [0,1)");
    if (!(init_half_width > 0.0)) throw ValidationError("schedule requires init_half_width > 0");
}

namespace {

void check_dims(const IsingHamiltonian& h, const AnsatzState& state) {
    if (state.size() != h.size()) {
        throw DimensionError("ansatz weight count does not match Hamiltonian");
    }
}

void check_time(double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw ValidationError("evolution parameter t must lie in [0,1]");
    }
}

std::vector<double> sines(const AnsatzState& state) {
    std::vector<double> s(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        s[i] = std::sin(kHalfPi * std::tanh(state.w[i]));
    }
    return s;
}

double expected_energy_from_sines(const IsingHamiltonian& h, const std::vector<double>& sin_theta) {
    double e = h.constant();
    for (std::size_t i = 0; i < h.size(); ++i) {
        e += h.linear()[i] * sin_theta[i];
        e += sin_theta[i] * h.coupling_row_dot(i, sin_theta); // sums 2 J_ij over unordered pairs
    }
    return e;
}

} // namespace

double expected_energy(const IsingHamiltonian& h, const AnsatzState& state) {
    check_dims(h, state);
    return expected_energy_from_sines(h, sines(state));
}

double transverse_cost(const AnsatzState& state) {
    double e = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        e -= std::cos(kHalfPi * std::tanh(state.w[i]));
    }
    return e;
}

double final_cost(const IsingHamiltonian& h, const AnsatzState& state, const CostKind& kind) {
    return penalized_energy(expected_energy(h, state), kind);
}

double total_cost(const IsingHamiltonian& h, const AnsatzState& state, const CostKind& kind,
                  const AnnealSchedule& schedule, double t) {
    check_time(t);
    return (1.0 - t) * transverse_cost(state) +
           std::pow(t, schedule.beta) * schedule.gamma * final_cost(h, state, kind);
}

std::vector<double> grad_total_cost(const IsingHamiltonian& h, const AnsatzState& state,
                                    const CostKind& kind, const AnnealSchedule& schedule,
                                    double t) {
    check_dims(h, state);
    check_time(t);
    const std::size_t n = h.size();
    const double t_beta = std::pow(t, schedule.beta) * schedule.gamma;

    std::vector<double> sin_theta(n), cos_theta(n), dtheta_dw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double th = kHalfPi * std::tanh(state.w[i]);
        sin_theta[i] = std::sin(th);
        cos_theta[i] = std::cos(th);
        const double tanh_w = std::tanh(state.w[i]);
        dtheta_dw[i] = kHalfPi * (1.0 - tanh_w * tanh_w);
    }

    const double hz = expected_energy_from_sines(h, sin_theta);
    const double df_dhz = penalized_energy_derivative(hz, kind);

    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dhz_dtheta =
            cos_theta[i] * (h.linear()[i] + 2.0 * h.coupling_row_dot(i, sin_theta));
        const double dtotal_dtheta = (1.0 - t) * sin_theta[i] + t_beta * df_dhz * dhz_dtheta;
        grad[i] = dtotal_dtheta * dtheta_dw[i];
    }
    return grad;
}

void sgd_step(AnsatzState& state, const std::vector<double>& grad,
              std::vector<double>& velocity, const AnnealSchedule& schedule) {
    if (grad.size() != state.size() || velocity.size() != state.size()) {
        throw DimensionError("gradient/velocity length does not match state");
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
        velocity[i] = schedule.momentum * velocity[i] + grad[i];
        state.w[i] -= schedule.learning_rate * velocity[i];
    }
}

SpinConfig decode(const AnsatzState& state) {
    SpinConfig s(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        s[i] = state.w[i] < 0.0 ? -1 : 1;
    }
    return s;
}

ShotResult anneal(const IsingHamiltonian& h, const CostKind& kind,
                  const AnnealSchedule& schedule, const std::vector<double>& initial_w,
                  bool record_trace) {
    schedule.validate();
    AnsatzState state(initial_w);
    check_dims(h, state);
    std::vector<double> velocity(state.size(), 0.0);

    ShotResult result;
    if (record_trace) {
        result.trace.emplace();
        result.trace->reserve(static_cast<std::size_t>(schedule.steps));
    }
    for (int i = 1; i <= schedule.steps; ++i) {
        const double t = static_cast<double>(i) / schedule.steps;
        const auto grad = grad_total_cost(h, state, kind, schedule, t);
        sgd_step(state, grad, velocity, schedule);
        if (record_trace) {
            result.trace->push_back(
                {i, t, final_cost(h, state, kind), total_cost(h, state, kind, schedule, t)});
        }
    }
    result.config = decode(state);
    result.energy = energy(h, result.config);
    return result;
}

RunShotsResult run_shots(const IsingHamiltonian& h, const CostKind& kind,
                         const AnnealSchedule& schedule, int max_shots,
                         const SuccessPredicate& success, std::uint64_t seed) {
    if (max_shots < 1) {
        throw ValidationError("max_shots must be at least 1");
    }
    schedule.validate();
    RunShotsResult out;
    double best_cost = 0.0;
    bool have_best = false;
    for (int shot = 0; shot < max_shots; ++shot) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(shot)));
        std::vector<double> w0(h.size());
        for (auto& w : w0) {
            w = rng.uniform(-schedule.init_half_width, schedule.init_half_width);
        }
        ShotResult r = anneal(h, kind, schedule, w0);
        out.shots_used = shot + 1;
        const double cost = penalized_energy(r.energy, kind);
        if (success && success(r)) {
            out.best = std::move(r);
            out.succeeded = true;
            return out;
        }
        if (!have_best || cost < best_cost) {
            best_cost = cost;
            out.best = std::move(r);
            have_best = true;
        }
    }
    return out;
}

} // namespace exclqa
