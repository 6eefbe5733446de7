#pragma once

#include <cstdint>
#include <vector>

#include "exclqa/ising.hpp"
#include "exclqa/lattice.hpp"

namespace exclqa {

/// One level of an exactly enumerated spectrum.
struct SpectrumEntry {
    double energy;
    SpinConfig config;
};

/// All 2^n energies of h, sorted ascending, with their configurations.
/// Refuses to run past max_n spins.
std::vector<SpectrumEntry> exact_spectrum(const IsingHamiltonian& h, std::size_t max_n = 20);

/// Lowest level strictly above the ground energy; degenerate levels are
/// grouped with tolerance 1e-9. Throws NoExcitedStateError for a fully
/// degenerate spectrum.
SpectrumEntry first_excited(const IsingHamiltonian& h);

struct BoxShortest {
    std::vector<std::int64_t> x; // coefficient vector
    std::int64_t norm_sq;
};

/// Exhaustive search over the local-dimension-2^k coefficient box
/// [-2^{k-1}, 2^{k-1}-1]^n for the nonzero vector of minimal squared norm.
/// Ties break toward the lexicographically smallest coefficient vector.
/// Requires n*k <= 26.
BoxShortest brute_force_shortest(const GramMatrix& g, int k);
BoxShortest brute_force_shortest(const Basis& b, int k);

struct EnumOptions {
    double timeout_seconds = 60.0;
};

struct EnumResult {
    std::vector<std::int64_t> x;        // coefficients w.r.t. the input rows
    std::vector<std::int64_t> v;        // the vector itself, x * B
    std::int64_t lambda1_sq;            // exact squared norm
};

/// Exact shortest-vector enumeration (depth-first over Gram-Schmidt
/// coordinates, no pruning). Works best on LLL-reduced input; the initial
/// radius is the smallest row norm. Candidate norms are re-verified in exact
/// integer arithmetic. Throws EnumerationTimeout past the wall-clock budget.
EnumResult enumerate_shortest(const Basis& b, const EnumOptions& options = {});

} // namespace exclqa
