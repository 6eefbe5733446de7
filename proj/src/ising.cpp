#include "exclqa/ising.hpp"

#include <cmath>
#include <cstdlib>

namespace exclqa {

void validate_spins(const SpinConfig& s) {
    for (auto v : s) {
        if (v != -1 && v != 1) {
            throw ValidationError("spin entries must be -1 or +1");
        }
    }
}

IsingHamiltonian::IsingHamiltonian(std::size_t n)
    : n_(n), linear_(n, 0.0), j_(n * n, 0.0) {
    if (n < 1) {
        throw ValidationError("spin count must be at least 1");
    }
}

IsingHamiltonian::IsingHamiltonian(double constant, std::vector<double> linear,
                                   const std::vector<std::vector<double>>& couplings)
    : n_(linear.size()), constant_(constant), linear_(std::move(linear)) {
    if (n_ < 1) {
        throw ValidationError("spin count must be at least 1");
    }
    if (couplings.size() != n_) {
        throw DimensionError("couplings matrix size does not match linear term");
    }
    j_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        if (couplings[i].size() != n_) {
            throw DimensionError("couplings matrix is not square");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (couplings[i][j] != couplings[j][i]) {
                throw ValidationError("couplings matrix must be symmetric");
            }
            if (i == j) {
                constant_ += couplings[i][i]; // sigma_z^2 = identity
            } else {
                j_[i * n_ + j] = couplings[i][j];
            }
        }
    }
}

double IsingHamiltonian::coefficient_scale() const {
    double scale = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        scale = std::max(scale, std::abs(linear_[i]));
        for (std::size_t j = i + 1; j < n_; ++j) {
            scale = std::max(scale, std::abs(2.0 * j_[i * n_ + j]));
        }
    }
    return scale;
}

double IsingHamiltonian::coupling_row_dot(std::size_t i, const std::vector<double>& v) const {
    double acc = 0.0;
    const double* row = j_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) {
        acc += row[j] * v[j];
    }
    return acc;
}

double energy(const IsingHamiltonian& h, const SpinConfig& s) {
    const std::size_t n = h.size();
    if (s.size() != n) {
        throw DimensionError("spin configuration length does not match Hamiltonian");
    }
    double e = h.constant();
    for (std::size_t i = 0; i < n; ++i) {
        e += h.linear()[i] * s[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            e += 2.0 * h.coupling(i, j) * s[i] * s[j];
        }
    }
    return e;
}

IsingHamiltonian from_qubo(const std::vector<std::vector<double>>& q,
                           const std::vector<double>& a) {
    const std::size_t n = a.size();
    if (q.size() != n) {
        throw DimensionError("QUBO matrix size does not match linear term");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (q[i].size() != n) {
            throw DimensionError("QUBO matrix is not square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (q[i][j] != q[j][i]) {
                throw ValidationError("QUBO matrix must be symmetric");
            }
        }
    }
    // x = (s+1)/2 expands x^T Q x + x^T a into constant, field and pair terms.
    double constant = 0.0;
    std::vector<double> linear(n, 0.0);
    std::vector<std::vector<double>> couplings(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row_sum += q[i][j];
            constant += q[i][j] / 4.0;
            if (i != j) {
                couplings[i][j] = q[i][j] / 4.0; // half the printed pair coefficient
            }
        }
        constant += q[i][i] / 4.0;
        linear[i] = row_sum / 2.0 + a[i] / 2.0;
        constant += a[i] / 2.0;
    }
    return IsingHamiltonian(constant, std::move(linear), couplings);
}

IsingHamiltonian shift_spectrum(const IsingHamiltonian& h, double offset) {
    const std::size_t n = h.size();
    std::vector<std::vector<double>> couplings(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            couplings[i][j] = h.coupling(i, j);
        }
    }
    return IsingHamiltonian(h.constant() + offset, h.linear(), couplings);
}

double l1_lower_bound(const IsingHamiltonian& h) {
    double bound = h.constant();
    for (std::size_t i = 0; i < h.size(); ++i) {
        bound -= std::abs(h.linear()[i]);
        for (std::size_t j = i + 1; j < h.size(); ++j) {
            bound -= std::abs(2.0 * h.coupling(i, j));
        }
    }
    return bound;
}

} // namespace exclqa
