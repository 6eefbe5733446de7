#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "exclqa/ising.hpp"
#include "exclqa/lattice.hpp"

namespace exclqa {

using Json = nlohmann::json;

/// {n, constant, linear:[...], couplings:[[...]]}; couplings is the symmetric
/// zero-diagonal J matrix (half the printed pair coefficients).
Json hamiltonian_to_json(const IsingHamiltonian& h);
IsingHamiltonian hamiltonian_from_json(const Json& j);

/// {q, d, k, seed, rows:[[...]]}; the metadata fields are optional on input.
struct BasisFile {
    std::int64_t q = 0;
    int d = 0;
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<std::int64_t>> rows;
};

Json basis_to_json(const Basis& b, std::int64_t q = 0, int d = 0, int k = 0,
                   std::uint64_t seed = 0);
BasisFile basis_from_json(const Json& j);

/// {gram:[[...]], k, M, spin_count} encoded-instance file.
Json encoded_to_json(const GramMatrix& g, int k, double m);
GramMatrix gram_from_json(const Json& j);

Json load_json_file(const std::filesystem::path& path);
void save_json_file(const std::filesystem::path& path, const Json& j);

} // namespace exclqa
