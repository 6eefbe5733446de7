#include "exclqa/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace exclqa {

namespace {

using Int128 = __int128;

constexpr double kTwoPiE = 17.07946844534713; // 2 * pi * e

std::int64_t checked_narrow(Int128 v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw ReductionError(std::string(what) + " overflows 64-bit integer range");
    }
    return static_cast<std::int64_t>(v);
}

Int128 checked_add(Int128 a, Int128 b, const char* what) {
    Int128 out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw ReductionError(std::string(what) + " overflows 128-bit integer range");
    }
    return out;
}

Int128 checked_mul(Int128 a, Int128 b, const char* what) {
    Int128 out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw ReductionError(std::string(what) + " overflows 128-bit integer range");
    }
    return out;
}

double log2_bigint(const BigInt& x) {
    if (x <= 0) {
        throw ValidationError("logarithm of a nonpositive big integer");
    }
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits <= 900) {
        return std::log2(x.convert_to<double>());
    }
    const unsigned shift = bits - 52;
    const BigInt top = x >> shift;
    return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

/// Fraction-free Bareiss elimination; exact integer determinant.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

std::vector<std::vector<BigInt>> gram_to_bigint(const GramMatrix& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m[i][j] = g.at(i, j);
        }
    }
    return m;
}

double rank_unit_ball_factor(std::size_t n) {
    return std::sqrt(static_cast<double>(n) / kTwoPiE);
}

double log_det_from_gram(const GramMatrix& g) {
    const BigInt det = gram_determinant_exact(g);
    if (det <= 0) {
        throw ValidationError("Gram determinant is not positive: dependent basis");
    }
    return 0.5 * log2_bigint(det) * std::numbers::ln2_v<double>;
}

} // namespace

Basis::Basis(std::vector<std::vector<std::int64_t>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) {
        throw ValidationError("basis needs at least one row");
    }
    const std::size_t d = rows_.front().size();
    if (d == 0) {
        throw ValidationError("basis rows must be nonempty");
    }
    for (const auto& row : rows_) {
        if (row.size() != d) {
            throw DimensionError("basis rows have inconsistent lengths");
        }
    }
    if (rows_.size() > d) {
        throw ValidationError("basis rank exceeds ambient dimension");
    }
}

GramMatrix::GramMatrix(std::vector<std::vector<std::int64_t>> entries) : n_(entries.size()) {
    if (n_ == 0) {
        throw ValidationError("gram matrix needs at least one row");
    }
    e_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (entries[i].size() != n_) {
            throw DimensionError("gram matrix is not square");
        }
        for (std::size_t j = 0; j < n_; ++j) {
            e_[i * n_ + j] = entries[i][j];
        }
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if (at(i, j) != at(j, i)) {
                throw ValidationError("gram matrix must be symmetric");
            }
        }
    }
}

void GramMatrix::validate_positive_definite() const {
    auto m = gram_to_bigint(*this);
    // Bareiss pivots are exactly the leading principal minors.
    BigInt prev = 1;
    for (std::size_t k = 0; k < n_; ++k) {
        if (m[k][k] <= 0) {
            throw ValidationError("gram matrix is not positive definite");
        }
        for (std::size_t i = k + 1; i < n_; ++i) {
            for (std::size_t j = k + 1; j < n_; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
}

GramMatrix gram(const Basis& b) {
    const std::size_t n = b.rank();
    const std::size_t d = b.dim();
    std::vector<std::vector<std::int64_t>> g(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            Int128 acc = 0;
            for (std::size_t c = 0; c < d; ++c) {
                acc = checked_add(acc, checked_mul(b.at(i, c), b.at(j, c), "gram entry"),
                                  "gram entry");
            }
            g[i][j] = g[j][i] = checked_narrow(acc, "gram entry");
        }
    }
    return GramMatrix(std::move(g));
}

BigInt gram_determinant_exact(const GramMatrix& g) {
    return bareiss_determinant(gram_to_bigint(g));
}

double log_determinant(const Basis& b) {
    return log_det_from_gram(gram(b));
}

double determinant(const Basis& b) {
    return std::exp(log_determinant(b));
}

namespace {

/// Cholesky factor of the (exact) Gram matrix in doubles.
std::vector<double> cholesky(const GramMatrix& g) {
    const std::size_t n = g.size();
    std::vector<double> l(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = static_cast<double>(g.at(i, j));
            for (std::size_t k = 0; k < j; ++k) {
                acc -= l[i * n + k] * l[j * n + k];
            }
            if (i == j) {
                if (!(acc > 0.0)) {
                    throw ValidationError("gram matrix is singular: dependent basis");
                }
                l[i * n + i] = std::sqrt(acc);
            } else {
                l[i * n + j] = acc / l[j * n + j];
            }
        }
    }
    return l;
}

/// Solves G x = rhs using a precomputed Cholesky factor.
void cholesky_solve(const std::vector<double>& l, std::size_t n, std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = x[i];
        for (std::size_t k = 0; k < i; ++k) acc -= l[i * n + k] * x[k];
        x[i] = acc / l[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) acc -= l[k * n + ii] * x[k];
        x[ii] = acc / l[ii * n + ii];
    }
}

} // namespace

std::vector<std::vector<double>> dual_basis(const Basis& b) {
    const std::size_t n = b.rank();
    const std::size_t d = b.dim();
    const GramMatrix g = gram(b);
    const auto l = cholesky(g);

    std::vector<std::vector<double>> dual(n, std::vector<double>(d, 0.0));
    std::vector<double> col(n);
    for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < n; ++i) col[i] = static_cast<double>(b.at(i, c));
        cholesky_solve(l, n, col);
        for (std::size_t i = 0; i < n; ++i) dual[i][c] = col[i];
    }

    // Two rounds of iterative refinement keep D B^T - I near machine precision
    // even for poorly conditioned raw q-ary Gram matrices.
    for (int round = 0; round < 2; ++round) {
        for (std::size_t c = 0; c < d; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                double gd = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    gd += static_cast<double>(g.at(i, j)) * dual[j][c];
                }
                col[i] = static_cast<double>(b.at(i, c)) - gd;
            }
            cholesky_solve(l, n, col);
            for (std::size_t i = 0; i < n; ++i) dual[i][c] += col[i];
        }
    }
    return dual;
}

double gaussian_heuristic(const Basis& b) {
    return gaussian_heuristic(gram(b));
}

double gaussian_heuristic(const GramMatrix& g) {
    const std::size_t n = g.size();
    return rank_unit_ball_factor(n) * std::exp(log_det_from_gram(g) / static_cast<double>(n));
}

double minkowski_bound(const Basis& b) {
    return minkowski_bound(gram(b));
}

double minkowski_bound(const GramMatrix& g) {
    const std::size_t n = g.size();
    return std::sqrt(static_cast<double>(n)) *
           std::exp(log_det_from_gram(g) / static_cast<double>(n));
}

LatticeStats lattice_stats(const Basis& b) {
    const GramMatrix g = gram(b);
    const double logdet = log_det_from_gram(g);
    const std::size_t n = g.size();
    const double root = std::exp(logdet / static_cast<double>(n));
    return LatticeStats{std::exp(logdet), rank_unit_ball_factor(n) * root,
                        std::sqrt(static_cast<double>(n)) * root};
}

Basis qary_basis(std::int64_t q, int d, int k, Rng& rng) {
    if (q < 2) {
        throw ValidationError("q-ary basis requires q >= 2");
    }
    if (!(k > 0 && k < d)) {
        throw ValidationError("q-ary basis requires 0 < k < d");
    }
    const std::size_t dim = static_cast<std::size_t>(d);
    const std::size_t split = static_cast<std::size_t>(d - k);
    std::vector<std::vector<std::int64_t>> rows(dim, std::vector<std::int64_t>(dim, 0));
    for (std::size_t i = 0; i < split; ++i) {
        rows[i][i] = 1;
        for (std::size_t j = split; j < dim; ++j) {
            rows[i][j] = static_cast<std::int64_t>(rng.uniform_int(static_cast<std::uint64_t>(q)));
        }
    }
    for (std::size_t i = split; i < dim; ++i) {
        rows[i][i] = q;
    }
    return Basis(std::move(rows));
}

namespace {

/// Working state for LLL: exact integer rows and Gram matrix, double
/// Gram-Schmidt data always recomputed from the exact Gram.
class LllState {
public:
    LllState(const Basis& b, double delta)
        : n_(b.rank()), d_(b.dim()), delta_(delta), rows_(b.rows()),
          gram_(n_ * n_), mu_(n_ * n_, 0.0L), r_(n_, 0.0L) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                Int128 acc = 0;
                for (std::size_t c = 0; c < d_; ++c) {
                    acc = checked_add(acc, checked_mul(rows_[i][c], rows_[j][c], "gram entry"),
                                      "gram entry");
                }
                gram_[i * n_ + j] = gram_[j * n_ + i] = acc;
            }
        }
    }

    Basis run() {
        compute_gso_row(0);
        check_positive(0);
        gso_valid_ = 1;
        std::size_t k = 1;
        // Generous cap; LLL terminates long before this on any sane input.
        const std::uint64_t max_iters =
            1000 + 400ull * static_cast<std::uint64_t>(n_) * n_ * 64ull;
        std::uint64_t iters = 0;
        while (k < n_) {
            if (++iters > max_iters) {
                throw ReductionError("LLL failed to converge within the iteration budget");
            }
            while (gso_valid_ < k) {
                compute_gso_row(gso_valid_);
                check_positive(gso_valid_);
                ++gso_valid_;
            }
            size_reduce(k);
            check_positive(k);
            const long double mu = mu_[k * n_ + (k - 1)];
            if (r_[k] >= (static_cast<long double>(delta_) - mu * mu) * r_[k - 1]) {
                gso_valid_ = k + 1;
                ++k;
            } else {
                swap_rows(k - 1, k);
                gso_valid_ = k - 1;
                k = std::max<std::size_t>(k - 1, 1);
            }
        }
        std::vector<std::vector<std::int64_t>> out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = std::move(rows_[i]);
        return Basis(std::move(out));
    }

private:
    void check_positive(std::size_t k) const {
        if (!(r_[k] > 0.0L) || !std::isfinite(static_cast<double>(r_[k]))) {
            throw ReductionError("Gram-Schmidt norm vanished: dependent basis");
        }
    }

    void compute_gso_row(std::size_t k) {
        // Long-double recurrences from the exact integer Gram matrix; raw
        // q-ary bases reach condition numbers where plain doubles cannot
        // settle the size reduction.
        std::vector<long double> proj(k); // <b_k, b*_j>
        for (std::size_t j = 0; j < k; ++j) {
            long double c = static_cast<long double>(gram_[k * n_ + j]);
            for (std::size_t l = 0; l < j; ++l) {
                c -= mu_[j * n_ + l] * proj[l];
            }
            proj[j] = c;
            mu_[k * n_ + j] = c / r_[j];
        }
        long double rk = static_cast<long double>(gram_[k * n_ + k]);
        for (std::size_t l = 0; l < k; ++l) {
            rk -= mu_[k * n_ + l] * proj[l];
        }
        r_[k] = rk;
    }

    // b_k += c * b_j, mirrored on the exact Gram.
    void row_addmul(std::size_t k, std::size_t j, std::int64_t c) {
        for (std::size_t col = 0; col < d_; ++col) {
            const Int128 v =
                checked_add(rows_[k][col], checked_mul(c, rows_[j][col], "basis entry"),
                            "basis entry");
            rows_[k][col] = checked_narrow(v, "basis entry");
        }
        // New G[k][k] uses the old G[k][j]; update it first.
        Int128 gkk = gram_[k * n_ + k];
        gkk = checked_add(gkk, checked_mul(2 * static_cast<Int128>(c), gram_[k * n_ + j], "gram update"),
                          "gram update");
        gkk = checked_add(gkk,
                          checked_mul(checked_mul(c, c, "gram update"), gram_[j * n_ + j], "gram update"),
                          "gram update");
        for (std::size_t i = 0; i < n_; ++i) {
            if (i == k) continue;
            const Int128 v = checked_add(
                gram_[k * n_ + i], checked_mul(c, gram_[j * n_ + i], "gram update"), "gram update");
            gram_[k * n_ + i] = v;
            gram_[i * n_ + k] = v;
        }
        gram_[k * n_ + k] = gkk;
    }

    void size_reduce(std::size_t k) {
        constexpr int max_passes = 64;
        for (int pass = 0; pass < max_passes; ++pass) {
            // Settle tolerance escalates with the pass count: tight while the
            // Gram-Schmidt data is trustworthy, falling back to the nominal
            // eta = 0.501 when precision cannot separate |mu| from 1/2.
            const double trigger = pass < 4 ? 0.5 + 1e-10 : (pass < 10 ? 0.5 + 1e-9 : 0.501);
            compute_gso_row(k);
            bool reduced_any = false;
            for (std::size_t jj = k; jj-- > 0;) {
                const long double mu = mu_[k * n_ + jj];
                if (std::abs(static_cast<double>(mu)) > trigger) {
                    if (!std::isfinite(static_cast<double>(mu)) ||
                        std::abs(static_cast<double>(mu)) > 9.0e17) {
                        throw ReductionError("size-reduction coefficient out of range");
                    }
                    const std::int64_t c = std::llround(static_cast<double>(mu));
                    row_addmul(k, jj, -c);
                    for (std::size_t l = 0; l < jj; ++l) {
                        mu_[k * n_ + l] -= static_cast<long double>(c) * mu_[jj * n_ + l];
                    }
                    mu_[k * n_ + jj] -= static_cast<long double>(c);
                    reduced_any = true;
                }
            }
            if (!reduced_any) {
                return;
            }
        }
        throw ReductionError("size reduction did not settle after retry escalation");
    }

    void swap_rows(std::size_t a, std::size_t b) {
        std::swap(rows_[a], rows_[b]);
        for (std::size_t i = 0; i < n_; ++i) {
            std::swap(gram_[a * n_ + i], gram_[b * n_ + i]);
        }
        for (std::size_t i = 0; i < n_; ++i) {
            std::swap(gram_[i * n_ + a], gram_[i * n_ + b]);
        }
    }

    std::size_t n_;
    std::size_t d_;
    double delta_;
    std::vector<std::vector<std::int64_t>> rows_;
    std::vector<Int128> gram_;
    std::vector<long double> mu_;
    std::vector<long double> r_;
    std::size_t gso_valid_ = 0;
};

} // namespace

Basis lll_reduce(const Basis& b, double delta) {
    if (!(delta > 0.25 && delta < 1.0)) {
        throw ValidationError("LLL delta must lie in (1/4, 1)");
    }
    if (b.rank() == 1) {
        bool zero = true;
        for (auto v : b.row(0)) zero = zero && v == 0;
        if (zero) throw ReductionError("basis row is the zero vector");
        return b;
    }
    return LllState(b, delta).run();
}

bool lll_is_reduced(const Basis& b, double delta, double tol) {
    const GramMatrix g = gram(b);
    const std::size_t n = g.size();
    std::vector<long double> mu(n * n, 0.0L), r(n, 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<long double> proj(k);
        for (std::size_t j = 0; j < k; ++j) {
            long double c = static_cast<long double>(g.at(k, j));
            for (std::size_t l = 0; l < j; ++l) c -= mu[j * n + l] * proj[l];
            proj[j] = c;
            mu[k * n + j] = c / r[j];
            if (std::abs(static_cast<double>(mu[k * n + j])) > 0.5 + tol) return false;
        }
        long double rk = static_cast<long double>(g.at(k, k));
        for (std::size_t l = 0; l < k; ++l) rk -= mu[k * n + l] * proj[l];
        r[k] = rk;
        if (!(rk > 0.0L)) return false;
        if (k > 0) {
            const long double m = mu[k * n + (k - 1)];
            if (r[k] < (static_cast<long double>(delta) - m * m) * r[k - 1] *
                               (1.0L - 1e-9L) -
                           1e-9L) {
                return false;
            }
        }
    }
    return true;
}

Basis sublattice(const Basis& b, std::size_t n) {
    if (n < 1 || n > b.rank()) {
        throw ValidationError("sublattice rank out of range");
    }
    std::vector<std::vector<std::int64_t>> rows(b.rows().begin(),
                                                b.rows().begin() + static_cast<std::ptrdiff_t>(n));
    return Basis(std::move(rows));
}

std::vector<double> coefficient_bound(const Basis& b, double a) {
    if (!(a > 0.0)) {
        throw ValidationError("coefficient bound requires a > 0");
    }
    const auto dual = dual_basis(b);
    std::vector<double> bounds(b.rank());
    for (std::size_t i = 0; i < b.rank(); ++i) {
        double norm_sq = 0.0;
        for (double v : dual[i]) norm_sq += v * v;
        bounds[i] = a * std::sqrt(norm_sq);
    }
    return bounds;
}

std::optional<std::vector<BigInt>> integer_coordinates(const Basis& b,
                                                       const std::vector<std::int64_t>& v) {
    const std::size_t n = b.rank();
    const std::size_t d = b.dim();
    if (v.size() != d) {
        throw DimensionError("vector length does not match ambient dimension");
    }
    const GramMatrix g = gram(b);
    auto gm = gram_to_bigint(g);
    std::vector<BigInt> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        BigInt acc = 0;
        for (std::size_t c = 0; c < d; ++c) {
            acc += BigInt(v[c]) * b.at(i, c);
        }
        w[i] = acc;
    }
    const BigInt det = bareiss_determinant(gm);
    if (det == 0) {
        throw ValidationError("Gram determinant is zero: dependent basis");
    }
    std::vector<BigInt> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto m = gram_to_bigint(g);
        for (std::size_t row = 0; row < n; ++row) {
            m[row][i] = w[row];
        }
        const BigInt det_i = bareiss_determinant(std::move(m));
        if (det_i % det != 0) {
            return std::nullopt;
        }
        x[i] = det_i / det;
    }
    // x solves x G = w; confirm x B = v so that v really lies in the lattice.
    for (std::size_t c = 0; c < d; ++c) {
        BigInt acc = 0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += x[i] * b.at(i, c);
        }
        if (acc != v[c]) {
            return std::nullopt;
        }
    }
    return x;
}

} // namespace exclqa
