#include "exclqa/json_io.hpp"

#include <fstream>

namespace exclqa {

Json hamiltonian_to_json(const IsingHamiltonian& h) {
    const std::size_t n = h.size();
    Json couplings = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < n; ++j) {
            row.push_back(h.coupling(i, j));
        }
        couplings.push_back(std::move(row));
    }
    return Json{{"n", n},
                {"constant", h.constant()},
                {"linear", h.linear()},
                {"couplings", couplings}};
}

IsingHamiltonian hamiltonian_from_json(const Json& j) {
    const auto n = j.at("n").get<std::size_t>();
    auto linear = j.at("linear").get<std::vector<double>>();
    auto couplings = j.at("couplings").get<std::vector<std::vector<double>>>();
    if (linear.size() != n || couplings.size() != n) {
        throw ValidationError("hamiltonian file dimensions are inconsistent");
    }
    return IsingHamiltonian(j.at("constant").get<double>(), std::move(linear), couplings);
}

Json basis_to_json(const Basis& b, std::int64_t q, int d, int k, std::uint64_t seed) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < b.rank(); ++i) {
        rows.push_back(b.row(i));
    }
    return Json{{"q", q}, {"d", d}, {"k", k}, {"seed", seed}, {"rows", rows}};
}

BasisFile basis_from_json(const Json& j) {
    BasisFile f;
    f.q = j.value("q", std::int64_t{0});
    f.d = j.value("d", 0);
    f.k = j.value("k", 0);
    f.seed = j.value("seed", std::uint64_t{0});
    f.rows = j.at("rows").get<std::vector<std::vector<std::int64_t>>>();
    return f;
}

Json encoded_to_json(const GramMatrix& g, int k, double m) {
    Json gram = Json::array();
    for (std::size_t i = 0; i < g.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < g.size(); ++j) {
            row.push_back(g.at(i, j));
        }
        gram.push_back(std::move(row));
    }
    return Json{{"gram", gram},
                {"k", k},
                {"M", m},
                {"spin_count", g.size() * static_cast<std::size_t>(k)}};
}

GramMatrix gram_from_json(const Json& j) {
    const Json& src = j.contains("gram") ? j.at("gram") : j;
    return GramMatrix(src.get<std::vector<std::vector<std::int64_t>>>());
}

Json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open file: " + path.string());
    }
    Json j;
    in >> j;
    return j;
}

void save_json_file(const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("cannot write file: " + path.string());
    }
    out << j.dump(2) << "\n";
}

} // namespace exclqa
