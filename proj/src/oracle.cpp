#include "exclqa/oracle.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>

namespace exclqa {

namespace {

using Int128 = __int128;

std::int64_t narrow_norm(Int128 v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw ValidationError(std::string(what) + " overflows 64-bit integer range");
    }
    return static_cast<std::int64_t>(v);
}

SpinConfig mask_to_config(std::uint32_t mask, std::size_t n) {
    SpinConfig s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = (mask >> i) & 1u ? 1 : -1;
    }
    return s;
}

} // namespace

std::vector<SpectrumEntry> exact_spectrum(const IsingHamiltonian& h, std::size_t max_n) {
    const std::size_t n = h.size();
    if (n > max_n) {
        throw ValidationError("exact spectrum limited to " + std::to_string(max_n) + " spins");
    }
    const std::size_t count = std::size_t{1} << n;

    // Gray-code walk; each step flips one spin and updates the energy locally.
    std::vector<double> spins(n, -1.0);
    std::uint32_t mask = 0;
    double e = h.constant();
    for (std::size_t i = 0; i < n; ++i) {
        e += h.linear()[i] * spins[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            e += 2.0 * h.coupling(i, j) * spins[i] * spins[j];
        }
    }

    std::vector<std::pair<double, std::uint32_t>> levels;
    levels.reserve(count);
    levels.emplace_back(e, mask);
    for (std::size_t i = 1; i < count; ++i) {
        const std::size_t flip = static_cast<std::size_t>(std::countr_zero(i));
        const double local = h.linear()[flip] + 2.0 * h.coupling_row_dot(flip, spins);
        e += -2.0 * spins[flip] * local;
        spins[flip] = -spins[flip];
        mask ^= (1u << flip);
        levels.emplace_back(e, mask);
    }
    std::sort(levels.begin(), levels.end());

    std::vector<SpectrumEntry> out;
    out.reserve(count);
    for (const auto& [energy, m] : levels) {
        out.push_back({energy, mask_to_config(m, n)});
    }
    return out;
}

SpectrumEntry first_excited(const IsingHamiltonian& h) {
    const auto spectrum = exact_spectrum(h);
    const double ground = spectrum.front().energy;
    for (const auto& entry : spectrum) {
        if (entry.energy > ground + 1e-9) {
            return entry;
        }
    }
    throw NoExcitedStateError("spectrum is fully degenerate; no excited level exists");
}

BoxShortest brute_force_shortest(const GramMatrix& g, int k) {
    const std::size_t n = g.size();
    if (k < 1) {
        throw ValidationError("local dimension exponent k must be >= 1");
    }
    if (n * static_cast<std::size_t>(k) > 26) {
        throw ValidationError("coefficient box too large for brute force (n*k > 26)");
    }
    const std::int64_t lo = -(std::int64_t{1} << (k - 1));
    const std::int64_t hi = (std::int64_t{1} << (k - 1)) - 1;

    std::vector<std::int64_t> x(n, 0), best_x;
    Int128 best = 0;
    bool have_best = false;

    // DFS in lexicographic order; partial[j] = sum_{l<depth} x_l G_lj and
    // quad = quadratic form over the assigned prefix. First strict minimum
    // found is the lexicographically smallest minimizer.
    std::vector<Int128> partial(n, 0);
    auto recurse = [&](auto&& self, std::size_t depth, Int128 quad) -> void {
        if (depth == n) {
            bool nonzero = false;
            for (auto v : x) nonzero = nonzero || v != 0;
            if (nonzero && (!have_best || quad < best)) {
                best = quad;
                best_x = x;
                have_best = true;
            }
            return;
        }
        for (std::int64_t val = lo; val <= hi; ++val) {
            x[depth] = val;
            const Int128 quad_next = quad + 2 * static_cast<Int128>(val) * partial[depth] +
                                     static_cast<Int128>(val) * val * g.at(depth, depth);
            if (val != 0) {
                for (std::size_t j = 0; j < n; ++j) {
                    partial[j] += static_cast<Int128>(val) * g.at(depth, j);
                }
            }
            self(self, depth + 1, quad_next);
            if (val != 0) {
                for (std::size_t j = 0; j < n; ++j) {
                    partial[j] -= static_cast<Int128>(val) * g.at(depth, j);
                }
            }
        }
        x[depth] = 0;
    };
    recurse(recurse, 0, 0);

    return BoxShortest{std::move(best_x), narrow_norm(best, "squared norm")};
}

BoxShortest brute_force_shortest(const Basis& b, int k) {
    return brute_force_shortest(gram(b), k);
}

namespace {

struct Gso {
    std::vector<double> mu; // row-major n*n, lower triangle
    std::vector<double> r;  // ||b*_k||^2
};

Gso gso_from_gram(const GramMatrix& g) {
    const std::size_t n = g.size();
    Gso out{std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0)};
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> proj(k);
        for (std::size_t j = 0; j < k; ++j) {
            double c = static_cast<double>(g.at(k, j));
            for (std::size_t l = 0; l < j; ++l) c -= out.mu[j * n + l] * proj[l];
            proj[j] = c;
            out.mu[k * n + j] = c / out.r[j];
        }
        double rk = static_cast<double>(g.at(k, k));
        for (std::size_t l = 0; l < k; ++l) rk -= out.mu[k * n + l] * proj[l];
        if (!(rk > 0.0)) {
            throw ValidationError("Gram-Schmidt norm vanished: dependent basis");
        }
        out.r[k] = rk;
    }
    return out;
}

std::int64_t exact_quadratic_form(const GramMatrix& g, const std::vector<std::int64_t>& x) {
    const std::size_t n = g.size();
    Int128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        acc += static_cast<Int128>(x[i]) * x[i] * g.at(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            acc += 2 * static_cast<Int128>(x[i]) * x[j] * g.at(i, j);
        }
    }
    return narrow_norm(acc, "squared norm");
}

} // namespace

EnumResult enumerate_shortest(const Basis& b, const EnumOptions& options) {
    const std::size_t n = b.rank();
    if (n > 48) {
        throw ValidationError("enumeration supports rank <= 48");
    }
    const GramMatrix g = gram(b);

    // Shortest basis row is a valid starting incumbent.
    std::size_t min_row = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (g.at(i, i) < g.at(min_row, min_row)) min_row = i;
    }
    std::vector<std::int64_t> best_x(n, 0);
    best_x[min_row] = 1;
    std::int64_t best = g.at(min_row, min_row);
    if (best <= 0) {
        throw ValidationError("basis contains a zero row");
    }

    if (n > 1) {
        const Gso gso = gso_from_gram(g);
        const auto deadline = std::chrono::steady_clock::now() +
                              std::chrono::duration<double>(options.timeout_seconds);

        auto bound = [&](std::int64_t incumbent) {
            return static_cast<double>(incumbent) * (1.0 + 1e-9) + 1e-6;
        };
        double radius = bound(best);

        std::vector<std::int64_t> x(n, 0), x0(n, 0);
        std::vector<std::int64_t> step(n, 0); // zigzag visit counter
        std::vector<int> side(n, 1);
        std::vector<double> center(n, 0.0);
        std::vector<double> rho(n + 1, 0.0);

        auto enter_level = [&](std::size_t k) {
            double c = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                c -= static_cast<double>(x[j]) * gso.mu[j * n + k];
            }
            center[k] = c;
            x0[k] = std::llround(c);
            side[k] = c >= static_cast<double>(x0[k]) ? 1 : -1;
            step[k] = 0;
            x[k] = x0[k];
        };
        auto advance_level = [&](std::size_t k) {
            if (k == n - 1) {
                ++x[k]; // top level restricted to nonnegative values
                return;
            }
            ++step[k];
            const std::int64_t m = (step[k] + 1) / 2;
            x[k] = step[k] % 2 == 1 ? x0[k] + side[k] * m : x0[k] - side[k] * m;
        };

        std::size_t k = n - 1;
        center[k] = 0.0;
        x[k] = 0;
        std::uint64_t nodes = 0;
        while (true) {
            if ((++nodes & 0xffffu) == 0 && std::chrono::steady_clock::now() > deadline) {
                throw EnumerationTimeout("shortest-vector enumeration exceeded its time budget");
            }
            const double diff = static_cast<double>(x[k]) - center[k];
            const double partial = rho[k + 1] + diff * diff * gso.r[k];
            if (partial < radius) {
                if (k == 0) {
                    bool nonzero = false;
                    for (auto v : x) nonzero = nonzero || v != 0;
                    if (nonzero) {
                        const std::int64_t exact = exact_quadratic_form(g, x);
                        if (exact > 0 && exact < best) {
                            best = exact;
                            best_x = x;
                            radius = bound(best);
                        }
                    }
                    advance_level(0);
                } else {
                    rho[k] = partial;
                    --k;
                    enter_level(k);
                }
            } else {
                ++k;
                if (k == n) break;
                advance_level(k);
            }
        }
    }

    // Canonical sign: first nonzero coefficient negative.
    for (auto v : best_x) {
        if (v != 0) {
            if (v > 0) {
                for (auto& w : best_x) w = -w;
            }
            break;
        }
    }

    EnumResult result;
    result.lambda1_sq = exact_quadratic_form(g, best_x);
    result.v.assign(b.dim(), 0);
    for (std::size_t c = 0; c < b.dim(); ++c) {
        Int128 acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += static_cast<Int128>(best_x[i]) * b.at(i, c);
        }
        result.v[c] = narrow_norm(acc, "vector entry");
    }
    result.x = std::move(best_x);
    return result;
}

} // namespace exclqa
