#include <doctest.h>

#include "nilhom/linalg.hpp"

#include <random>

using namespace nilhom::linalg;

namespace {

// Plain dense Gaussian elimination over Q, kept independent of the sparse engine.
std::size_t dense_rank_oracle(std::vector<std::vector<Rational>> a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            Rational f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

RationalMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int density_pct) {
    std::uniform_int_distribution<int> num(-3, 3), den(1, 3), pct(0, 99);
    std::vector<std::vector<Rational>> d(rows, std::vector<Rational>(cols, Rational(0)));
    for (auto& row : d)
        for (auto& x : row)
            if (pct(rng) < density_pct) {
                x = Rational(num(rng), den(rng));
                x.canonicalize();
            }
    return RationalMatrix::from_dense(d);
}

}  // namespace

TEST_CASE("rank: small examples") {
    CHECK(rank(RationalMatrix::identity(4)) == 4);
    CHECK(rank(RationalMatrix(3, 5)) == 0);
    CHECK(rank(RationalMatrix::from_dense({{2, 4}, {1, 2}})) == 1);
    CHECK(rank(RationalMatrix(0, 0)) == 0);
}

TEST_CASE("rank agrees with the dense oracle and with the transpose") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
        int density = 20 + static_cast<int>(rng() % 80);
        auto m = random_matrix(rng, rows, cols, density);
        // force some dependency now and then
        if (rows >= 3 && trial % 3 == 0) {
            auto d = m.to_dense();
            for (std::size_t j = 0; j < cols; ++j) d[2][j] = d[0][j] * Rational(1, 2) - d[1][j];
            m = RationalMatrix::from_dense(d);
        }
        auto r = rank(m);
        CHECK(r == dense_rank_oracle(m.to_dense()));
        CHECK(r == rank(m.transpose()));
        CHECK(r + nullspace_basis(m).size() == cols);
    }
}

TEST_CASE("nullspace_basis") {
    CHECK(nullspace_basis(RationalMatrix::identity(3)).empty());
    CHECK(nullspace_basis(RationalMatrix(2, 3)).size() == 3);

    auto ns = nullspace_basis(RationalMatrix::from_dense({{1, 1}}));
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] == -ns[0][1]);
    CHECK(ns[0][0] != 0);

    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 8, 50);
        auto basis = nullspace_basis(m);
        EchelonBasis span(m.cols());
        for (const auto& v : basis) {
            for (const auto& x : m.apply(v)) CHECK(x == 0);
            CHECK(span.add(v));
        }
    }
}

TEST_CASE("solve") {
    RationalVector b{Rational(3), Rational(-2, 5)};
    auto x = solve(RationalMatrix::identity(2), b);
    REQUIRE(x);
    CHECK(*x == b);

    CHECK_FALSE(solve(RationalMatrix(2, 2), b));
    auto half = solve(RationalMatrix::from_dense({{2}}), RationalVector{Rational(1)});
    REQUIRE(half);
    CHECK((*half)[0] == Rational(1, 2));

    CHECK_THROWS_AS(solve(RationalMatrix::identity(3), b), std::invalid_argument);

    std::mt19937 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = random_matrix(rng, 1 + rng() % 6, 1 + rng() % 6, 60);
        RationalVector x0(m.cols());
        for (auto& v : x0) v = Rational(static_cast<int>(rng() % 7) - 3);
        auto rhs = m.apply(x0);
        auto sol = solve(m, rhs);
        REQUIRE(sol);
        CHECK(m.apply(*sol) == rhs);
    }
}

TEST_CASE("inverse") {
    auto m = RationalMatrix::from_dense({{2, 1}, {1, 1}});
    auto inv = inverse(m);
    REQUIRE(inv);
    CHECK(*inv * m == RationalMatrix::identity(2));
    CHECK_FALSE(inverse(RationalMatrix::from_dense({{1, 2}, {2, 4}})));
}

TEST_CASE("smith normal form") {
    CHECK(smith_normal_form(IntegerMatrix::identity(3)) == std::vector<Integer>{1, 1, 1});
    CHECK(smith_normal_form(IntegerMatrix(2, 3)) == std::vector<Integer>{0, 0});

    // 2x2 oracle: d1 = gcd of the entries, d1 d2 = |det|.
    auto oracle = [](long a, long b, long c, long d) {
        Integer g = gcd(gcd(Integer(a), Integer(b)), gcd(Integer(c), Integer(d)));
        Integer det = abs(Integer(a * d - b * c));
        if (g == 0) return std::vector<Integer>{0, 0};
        return std::vector<Integer>{g, det / g};
    };
    CHECK(smith_normal_form(IntegerMatrix::from_dense({{2, 0}, {0, 3}})) == oracle(2, 0, 0, 3));
    CHECK(oracle(2, 0, 0, 3) == std::vector<Integer>{1, 6});

    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        long a = static_cast<long>(rng() % 21) - 10, b = static_cast<long>(rng() % 21) - 10;
        long c = static_cast<long>(rng() % 21) - 10, d = static_cast<long>(rng() % 21) - 10;
        CHECK(smith_normal_form(IntegerMatrix::from_dense({{a, b}, {c, d}})) == oracle(a, b, c, d));
    }
}

TEST_CASE("smith divisors divide and count the rank") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        std::vector<std::vector<Integer>> d(rows, std::vector<Integer>(cols));
        for (auto& row : d)
            for (auto& x : row) x = static_cast<long>(rng() % 9) - 4;
        auto m = IntegerMatrix::from_dense(d);
        auto div = smith_normal_form(m);
        std::size_t nonzero = 0;
        for (std::size_t k = 0; k < div.size(); ++k) {
            if (div[k] != 0) ++nonzero;
            if (k + 1 < div.size() && div[k] != 0) CHECK(div[k + 1] % div[k] == 0);
        }
        CHECK(nonzero == rank(m));
    }
}

TEST_CASE("sparse matrix canonical form") {
    auto m = RationalMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 0, -1}, {1, 1, 2}});
    CHECK(m.nnz() == 1);
    m.set(1, 1, 0);
    CHECK(m.is_zero());
    CHECK_THROWS(RationalMatrix::from_triplets(2, 2, {{2, 0, 1}}));
}
