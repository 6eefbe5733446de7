#include <doctest.h>

#include <cmath>
#include <set>

#include "exclqa/oracle.hpp"
#include "exclqa/svp_encode.hpp"
#include "test_helpers.hpp"

using namespace exclqa;

TEST_CASE("worked example expands to the exact printed coefficients") {
    const auto h = build_svp_hamiltonian(testutil::example3_gram(), QuditEncoding{3, 1, 1.0});
    REQUIRE(h.size() == 3);
    CHECK(h.constant() == 93.0);
    CHECK(h.linear() == std::vector<double>{18.0, 30.0, 24.0});
    CHECK(h.pair_coefficient(0, 1) == 3.0);
    CHECK(h.pair_coefficient(1, 2) == -24.0);
    CHECK(h.pair_coefficient(0, 2) == 0.0);
}

TEST_CASE("closed forms of the local-dimension-2 expansion") {
    Rng rng(8080);
    for (int trial = 0; trial < 5; ++trial) {
        const auto b = testutil::random_integer_basis(rng, 5, 7, 3);
        const auto g = gram(b);
        const auto h = build_svp_hamiltonian(g, QuditEncoding{5, 1, 1.0});
        double expected_constant = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            expected_constant += static_cast<double>(g.at(i, i)) / 2.0;
            double expected_linear = static_cast<double>(g.at(i, i)) / 2.0;
            for (std::size_t j = 0; j < 5; ++j) {
                if (j == i) continue;
                expected_constant += static_cast<double>(g.at(i, j)) / 4.0;
                expected_linear += static_cast<double>(g.at(i, j)) / 2.0;
                if (j > i) {
                    CHECK(h.pair_coefficient(i, j) == static_cast<double>(g.at(i, j)) / 2.0);
                }
            }
            CHECK(h.linear()[i] == expected_linear);
        }
        CHECK(h.constant() == expected_constant);
    }
}

TEST_CASE("decoding conventions") {
    SUBCASE("local dimension 2: spins map to {-1, 0}") {
        const QuditEncoding enc{2, 1, 1.0};
        CHECK(decode_coefficients({1, 1}, enc) == std::vector<std::int64_t>{-1, -1});
        CHECK(decode_coefficients({-1, -1}, enc) == std::vector<std::int64_t>{0, 0});
        CHECK(decode_coefficients({1, -1}, enc) == std::vector<std::int64_t>{-1, 0});
    }
    SUBCASE("local dimension 4 bit table") {
        const QuditEncoding enc{1, 2, 1.0};
        // (b0, b1): spin +1 is bit 0, spin -1 is bit 1; x = b0 + 2 b1 - 2.
        CHECK(decode_coefficients({1, 1}, enc) == std::vector<std::int64_t>{-2});
        CHECK(decode_coefficients({-1, 1}, enc) == std::vector<std::int64_t>{-1});
        CHECK(decode_coefficients({1, -1}, enc) == std::vector<std::int64_t>{0});
        CHECK(decode_coefficients({-1, -1}, enc) == std::vector<std::int64_t>{1});
    }
    SUBCASE("worked example: first excited configuration is (-1, 0, 0)") {
        const QuditEncoding enc{3, 1, 1.0};
        const auto x = decode_coefficients({1, -1, -1}, enc);
        CHECK(x == std::vector<std::int64_t>{-1, 0, 0});
        CHECK(vector_norm_sq(x, testutil::example3_gram()) == 30);
    }
    SUBCASE("length validation") {
        CHECK_THROWS_AS(decode_coefficients({1, 1, 1}, QuditEncoding{2, 2, 1.0}),
                        DimensionError);
    }
}

TEST_CASE("search space membership") {
    const std::vector<std::int64_t> zero{0, 0, 0};
    CHECK(in_search_space(zero, 1));
    CHECK(in_search_space(zero, 5));

    SUBCASE("the upper end is asymmetric") {
        for (int k = 1; k <= 4; ++k) {
            const std::vector<std::int64_t> edge{std::int64_t{1} << (k - 1)};
            CHECK_FALSE(in_search_space(edge, k));
            const std::vector<std::int64_t> lower{-(std::int64_t{1} << (k - 1))};
            CHECK(in_search_space(lower, k));
        }
    }
    SUBCASE("boxes nest as k grows") {
        Rng rng(12);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::int64_t> x(4);
            for (auto& v : x) v = static_cast<std::int64_t>(rng.uniform_int(17)) - 8;
            for (int k = 1; k <= 4; ++k) {
                if (in_search_space(x, k)) {
                    CHECK(in_search_space(x, k + 1));
                }
            }
        }
    }
}

TEST_CASE("vector_norm_sq") {
    const auto g = testutil::example3_gram();
    CHECK(vector_norm_sq(std::vector<std::int64_t>{0, 0, 0}, g) == 0);
    CHECK(vector_norm_sq(std::vector<std::int64_t>{1, 0, 0}, g) == 30);
    const GramMatrix small({{2, 2}, {2, 4}});
    CHECK(vector_norm_sq(std::vector<std::int64_t>{1, 1}, small) == 10);
    CHECK_THROWS_AS(vector_norm_sq(std::vector<std::int64_t>{1}, small), DimensionError);
}

TEST_CASE("round-trip energy identity over all spin configurations") {
    Rng rng(6060);
    for (int trial = 0; trial < 4; ++trial) {
        const int k = 1 + static_cast<int>(rng.uniform_int(2));
        const std::size_t n = 4 / static_cast<std::size_t>(k) + 2; // spins <= 16
        const auto b = testutil::random_integer_basis(rng, n, n + 2, 3);
        const auto g = gram(b);
        const QuditEncoding enc{n, k, 1.0};
        const auto h = build_svp_hamiltonian(g, enc);
        const std::size_t spins = enc.spins();
        for (std::size_t mask = 0; mask < (std::size_t{1} << spins); ++mask) {
            SpinConfig s(spins);
            for (std::size_t i = 0; i < spins; ++i) s[i] = (mask >> i) & 1u ? 1 : -1;
            const auto x = decode_coefficients(s, enc);
            CHECK(energy(h, s) == static_cast<double>(vector_norm_sq(x, g)));
        }
    }
}

TEST_CASE("rescaled encodings keep the energy identity within tolerance") {
    Rng rng(7171);
    const auto b = testutil::random_integer_basis(rng, 4, 5, 3);
    const auto g = gram(b);
    const double m = frobenius_norm(g);
    const QuditEncoding enc{4, 2, m};
    const auto h = build_svp_hamiltonian(g, enc);
    for (std::size_t mask = 0; mask < 256; ++mask) {
        SpinConfig s(8);
        for (std::size_t i = 0; i < 8; ++i) s[i] = (mask >> i) & 1u ? 1 : -1;
        const auto x = decode_coefficients(s, enc);
        CHECK(std::abs(m * energy(h, s) - static_cast<double>(vector_norm_sq(x, g))) <
              1e-6 * m);
    }
}

TEST_CASE("encoding is injective") {
    const QuditEncoding enc{3, 2, 1.0};
    std::set<std::vector<std::int64_t>> seen;
    for (std::size_t mask = 0; mask < 64; ++mask) {
        SpinConfig s(6);
        for (std::size_t i = 0; i < 6; ++i) s[i] = (mask >> i) & 1u ? 1 : -1;
        CHECK(seen.insert(decode_coefficients(s, enc)).second);
    }
}

TEST_CASE("the zero vector is the ground state of every encoding") {
    Rng rng(9292);
    for (int trial = 0; trial < 3; ++trial) {
        const auto b = testutil::random_integer_basis(rng, 4, 6, 3);
        const auto g = gram(b);
        const QuditEncoding enc{4, 1, 1.0};
        const auto h = build_svp_hamiltonian(g, enc);
        const auto spectrum = exact_spectrum(h);
        CHECK(spectrum.front().energy == 0.0);
        CHECK(decode_coefficients(spectrum.front().config, enc) ==
              std::vector<std::int64_t>(4, 0));
    }
}

TEST_CASE("encoding validation") {
    const auto g = testutil::example3_gram();
    CHECK_THROWS_AS(build_svp_hamiltonian(g, QuditEncoding{2, 1, 1.0}), DimensionError);
    CHECK_THROWS_AS(build_svp_hamiltonian(g, QuditEncoding{3, 0, 1.0}), ValidationError);
    CHECK_THROWS_AS(build_svp_hamiltonian(g, QuditEncoding{3, 1, 0.0}), ValidationError);
    // Indefinite symmetric matrices are rejected.
    const GramMatrix indefinite({{1, 3}, {3, 1}});
    CHECK_THROWS_AS(build_svp_hamiltonian(indefinite, QuditEncoding{2, 1, 1.0}),
                    ValidationError);
}
