#include "exclqa/svp_encode.hpp"

#include <cmath>
#include <limits>

namespace exclqa {

namespace {
using Int128 = __int128;
}

void QuditEncoding::validate() const {
    if (n < 1) throw ValidationError("encoding requires at least one coefficient");
    if (k < 1) throw ValidationError("encoding requires at least one bit per coefficient");
    if (k > 30) throw ValidationError("bits per coefficient out of supported range");
    if (!(rescale > 0.0)) throw ValidationError("rescale factor M must be positive");
}

IsingHamiltonian build_svp_hamiltonian(const GramMatrix& g, const QuditEncoding& enc) {
    enc.validate();
    if (g.size() != enc.n) {
        throw DimensionError("encoding coefficient count does not match Gram matrix");
    }
    g.validate_positive_definite();

    const std::size_t n = enc.n;
    const int k = enc.k;
    const std::size_t spins = enc.spins();

    // Q_i = q0 + sum_l ql[l] * sigma_{i,l} with q0 = -1/2, ql[l] = -2^{l-1}.
    const double q0 = -0.5;
    std::vector<double> ql(static_cast<std::size_t>(k));
    for (int l = 0; l < k; ++l) {
        ql[static_cast<std::size_t>(l)] = -std::ldexp(1.0, l - 1);
    }

    double constant = 0.0;
    std::vector<double> linear(spins, 0.0);
    std::vector<std::vector<double>> couplings(spins, std::vector<double>(spins, 0.0));
    auto add_pair = [&](std::size_t a, std::size_t b, double printed) {
        // store half the printed sigma_a sigma_b coefficient in each of J_ab, J_ba
        couplings[a][b] += printed / 2.0;
        couplings[b][a] += printed / 2.0;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double gij = static_cast<double>(g.at(i, j)) / enc.rescale;
            if (gij == 0.0) continue;
            if (i == j) {
                // Q_i^2: q0^2 + sum_l ql^2 (sigma^2 = 1), cross and linear terms.
                constant += gij * q0 * q0;
                for (int l = 0; l < k; ++l) {
                    const double a = ql[static_cast<std::size_t>(l)];
                    constant += gij * a * a;
                    linear[i * k + l] += gij * 2.0 * q0 * a;
                    for (int m = l + 1; m < k; ++m) {
                        add_pair(i * k + l, i * k + m,
                                 gij * 2.0 * a * ql[static_cast<std::size_t>(m)]);
                    }
                }
            } else {
                constant += gij * q0 * q0;
                for (int l = 0; l < k; ++l) {
                    linear[i * k + l] += gij * q0 * ql[static_cast<std::size_t>(l)];
                    linear[j * k + l] += gij * q0 * ql[static_cast<std::size_t>(l)];
                }
                // i < j handles both ordered Gram terms through symmetry, so
                // process each unordered spin pair once per ordered (i, j).
                if (i < j) {
                    for (int l = 0; l < k; ++l) {
                        for (int m = 0; m < k; ++m) {
                            add_pair(i * k + l, j * k + m,
                                     2.0 * gij * ql[static_cast<std::size_t>(l)] *
                                         ql[static_cast<std::size_t>(m)]);
                        }
                    }
                }
            }
        }
    }
    return IsingHamiltonian(constant, std::move(linear), couplings);
}

std::vector<std::int64_t> decode_coefficients(const SpinConfig& s, const QuditEncoding& enc) {
    enc.validate();
    if (s.size() != enc.spins()) {
        throw DimensionError("spin configuration length does not match encoding");
    }
    std::vector<std::int64_t> x(enc.n);
    for (std::size_t i = 0; i < enc.n; ++i) {
        std::int64_t value = 0;
        for (int l = 0; l < enc.k; ++l) {
            const std::int8_t spin = s[i * static_cast<std::size_t>(enc.k) + static_cast<std::size_t>(l)];
            const std::int64_t bit = (1 - spin) / 2;
            value += bit << l;
        }
        x[i] = value - (std::int64_t{1} << (enc.k - 1));
    }
    return x;
}

bool in_search_space(std::span<const std::int64_t> x, int k) {
    if (k < 1 || k > 62) {
        throw ValidationError("local dimension exponent k out of range");
    }
    const std::int64_t lo = -(std::int64_t{1} << (k - 1));
    const std::int64_t hi = (std::int64_t{1} << (k - 1)) - 1;
    for (auto v : x) {
        if (v < lo || v > hi) return false;
    }
    return true;
}

std::int64_t vector_norm_sq(std::span<const std::int64_t> x, const GramMatrix& g) {
    if (x.size() != g.size()) {
        throw DimensionError("coefficient vector length does not match Gram matrix");
    }
    Int128 acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        acc += static_cast<Int128>(x[i]) * x[i] * g.at(i, i);
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            acc += 2 * static_cast<Int128>(x[i]) * x[j] * g.at(i, j);
        }
    }
    if (acc > std::numeric_limits<std::int64_t>::max() ||
        acc < std::numeric_limits<std::int64_t>::min()) {
        throw ValidationError("squared norm overflows 64-bit integer range");
    }
    return static_cast<std::int64_t>(acc);
}

double frobenius_norm(const GramMatrix& g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double v = static_cast<double>(g.at(i, j));
            acc += v * v;
        }
    }
    return std::sqrt(acc);
}

} // namespace exclqa
