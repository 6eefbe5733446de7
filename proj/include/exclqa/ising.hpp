#pragma once

#include <cstdint>
#include <vector>

#include "exclqa/errors.hpp"

namespace exclqa {

/// Spin configuration; every entry is -1 or +1.
using SpinConfig = std::vector<std::int8_t>;

/// Throws ValidationError unless every entry of s is -1 or +1.
void validate_spins(const SpinConfig& s);

/// Classical Ising Hamiltonian, diagonal in the computational basis:
///
///   E(s) = constant + sum_i linear[i]*s_i + sum_{i<j} 2*J[i][j]*s_i*s_j
///
/// The couplings matrix J is symmetric with a zero diagonal; the double sum
/// over ordered pairs collapses to unordered pairs with the factor 2 above.
/// Diagonal couplings passed to the constructor are folded into the constant
/// (sigma_z squared is the identity). Immutable after construction.
class IsingHamiltonian {
public:
    /// All-zero Hamiltonian on n spins.
    explicit IsingHamiltonian(std::size_t n);

    /// Builds from explicit coefficients. couplings must be square, n x n and
    /// symmetric; any diagonal entries are added to the constant and zeroed.
    IsingHamiltonian(double constant, std::vector<double> linear,
                     const std::vector<std::vector<double>>& couplings);

    std::size_t size() const { return n_; }
    double constant() const { return constant_; }
    const std::vector<double>& linear() const { return linear_; }

    /// J[i][j]; half of the printed sigma_i sigma_j coefficient.
    double coupling(std::size_t i, std::size_t j) const { return j_[i * n_ + j]; }

    /// 2*J[i][j]; the coefficient of sigma_i sigma_j as usually written.
    double pair_coefficient(std::size_t i, std::size_t j) const {
        return 2.0 * j_[i * n_ + j];
    }

    /// Largest magnitude among the linear and pair coefficients (constant
    /// excluded; it shifts all levels equally).
    double coefficient_scale() const;

    /// row i of J times v.
    double coupling_row_dot(std::size_t i, const std::vector<double>& v) const;

private:
    std::size_t n_;
    double constant_ = 0.0;
    std::vector<double> linear_;
    std::vector<double> j_; // row-major n*n, symmetric, zero diagonal
};

/// Discrete energy of a spin configuration.
double energy(const IsingHamiltonian& h, const SpinConfig& s);

/// Converts min_x x^T Q x + x^T a over binary x to the equivalent Ising form
/// under s = 2x - 1, so that energy(result, 2x-1) == x^T Q x + x^T a.
IsingHamiltonian from_qubo(const std::vector<std::vector<double>>& q,
                           const std::vector<double>& a);

/// Same Hamiltonian with `offset` added to every level.
IsingHamiltonian shift_spectrum(const IsingHamiltonian& h, double offset);

/// constant - sum|linear| - sum_{i<j} |2 J_ij|; never exceeds the true
/// ground energy. Coarse, but enough to make a spectrum nonnegative.
double l1_lower_bound(const IsingHamiltonian& h);

} // namespace exclqa
