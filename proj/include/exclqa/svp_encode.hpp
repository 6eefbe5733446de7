#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "exclqa/ising.hpp"
#include "exclqa/lattice.hpp"

namespace exclqa {

/// Layout of the binary-encoded qudit mapping: n integer coefficients, k bits
/// each (local dimension 2^k), spin i*k + l holding bit l of coefficient i
/// with l = 0 least significant. Coefficients range over
/// [-2^{k-1}, 2^{k-1} - 1]. `rescale` divides the Gram matrix before the
/// expansion (the M hyperparameter).
struct QuditEncoding {
    std::size_t n = 0;
    int k = 1;
    double rescale = 1.0;

    std::size_t spins() const { return n * static_cast<std::size_t>(k); }
    std::int64_t coefficient_min() const { return -(std::int64_t{1} << (k - 1)); }
    std::int64_t coefficient_max() const { return (std::int64_t{1} << (k - 1)) - 1; }
    void validate() const;
};

/// Ising expansion of sum_{i,j} (G_ij / M) Q_i Q_j over n*k spins, where Q_i
/// is the binary-encoded qudit operator of coefficient i. Every eigenvalue of
/// the result times M is the squared norm of the decoded lattice vector; the
/// zero vector is the ground state at energy zero.
IsingHamiltonian build_svp_hamiltonian(const GramMatrix& g, const QuditEncoding& enc);

/// Reads the coefficient vector out of a spin configuration: spin +1 is bit
/// 0, spin -1 is bit 1, x_i = sum_l 2^l b_il - 2^{k-1}.
std::vector<std::int64_t> decode_coefficients(const SpinConfig& s, const QuditEncoding& enc);

/// True iff every coefficient lies in [-2^{k-1}, 2^{k-1} - 1].
bool in_search_space(std::span<const std::int64_t> x, int k);

/// Exact squared norm sum_{i,j} x_i x_j G_ij.
std::int64_t vector_norm_sq(std::span<const std::int64_t> x, const GramMatrix& g);

/// Frobenius norm of the Gram matrix; the default M rescale of the
/// local-dimension-2 presets.
double frobenius_norm(const GramMatrix& g);

} // namespace exclqa
