#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "exclqa/errors.hpp"
#include "exclqa/rng.hpp"

namespace exclqa {

using BigInt = boost::multiprecision::cpp_int;

/// Integer lattice basis; rows are the basis vectors b_1..b_n in Z^d.
class Basis {
public:
    explicit Basis(std::vector<std::vector<std::int64_t>> rows);

    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return rows_.front().size(); }
    const std::vector<std::int64_t>& row(std::size_t i) const { return rows_[i]; }
    std::int64_t at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<std::int64_t>>& rows() const { return rows_; }

private:
    std::vector<std::vector<std::int64_t>> rows_;
};

/// Exact integer Gram matrix G = B B^T of a basis.
class GramMatrix {
public:
    /// Validates squareness and symmetry only; positive definiteness is
    /// checked where it matters (validate_positive_definite, dual_basis).
    explicit GramMatrix(std::vector<std::vector<std::int64_t>> entries);

    std::size_t size() const { return n_; }
    std::int64_t at(std::size_t i, std::size_t j) const { return e_[i * n_ + j]; }
    const std::vector<std::int64_t>& flat() const { return e_; }

    /// Throws ValidationError unless all leading principal minors are > 0
    /// (exact Bareiss pivots).
    void validate_positive_definite() const;

private:
    std::size_t n_;
    std::vector<std::int64_t> e_;
};

struct LatticeStats {
    double determinant;
    double gaussian_heuristic;
    double minkowski_bound;
};

/// Exact Gram matrix of b (128-bit accumulation, checked).
GramMatrix gram(const Basis& b);

/// Exact det(G) via fraction-free Bareiss elimination.
BigInt gram_determinant_exact(const GramMatrix& g);

/// ln det(L) = ln sqrt(det G). Exact-integer determinant under the hood, so
/// it stays finite for lattices whose determinant overflows double.
double log_determinant(const Basis& b);

/// det(L) = sqrt(det(B B^T)). Throws ValidationError when det G <= 0
/// (dependent rows).
double determinant(const Basis& b);

/// Dual basis D = (B B^T)^{-1} B, as reals. D * B^T = I within 1e-9.
std::vector<std::vector<double>> dual_basis(const Basis& b);

/// gh(L) = sqrt(n / (2 pi e)) * det(L)^{1/n}.
double gaussian_heuristic(const Basis& b);
double gaussian_heuristic(const GramMatrix& g);

/// Minkowski bound sqrt(n) * det(L)^{1/n} on lambda_1.
double minkowski_bound(const Basis& b);
double minkowski_bound(const GramMatrix& g);

LatticeStats lattice_stats(const Basis& b);

/// q-ary basis [[I_{d-k}, A], [0, q I_k]] with A sampled uniformly from
/// [0, q)^{(d-k) x k}.
Basis qary_basis(std::int64_t q, int d, int k, Rng& rng);

/// LLL reduction with size-reduction bound eta = 0.501. Gram-Schmidt data is
/// kept in double precision but always recomputed from the exact integer
/// Gram matrix, which is updated incrementally alongside the basis rows.
Basis lll_reduce(const Basis& b, double delta = 0.99);

/// True when b satisfies size reduction (|mu| <= 0.5 + tol) and the Lovasz
/// condition for the given delta.
bool lll_is_reduced(const Basis& b, double delta, double tol = 1e-9);

/// First n rows; ambient dimension unchanged.
Basis sublattice(const Basis& b, std::size_t n);

/// Per-coefficient bounds a * ||d_i|| from the dual basis rows: any lattice
/// vector of norm <= a has |x_i| <= a * ||d_i||.
std::vector<double> coefficient_bound(const Basis& b, double a);

/// Exact coefficients x with x B = v, if v lies in the lattice of b.
/// Cramer's rule on the Gram system; intended for modest ranks.
std::optional<std::vector<BigInt>> integer_coordinates(const Basis& b,
                                                       const std::vector<std::int64_t>& v);

} // namespace exclqa
