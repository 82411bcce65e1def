#include <doctest.h>

#include "nilhom/rep.hpp"

#include <random>

using namespace nilhom;
using namespace nilhom::rep;

namespace {

WeightModule module_from(std::size_t r, const std::vector<Weight>& ws) {
    WeightModule m{r, {}};
    for (const auto& w : ws) m.weights[w] += 1;
    return m;
}

std::vector<Integer> ints(std::initializer_list<long> xs) {
    std::vector<Integer> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

IntegerMatrix random_unimodular(std::size_t r, std::mt19937& rng) {
    auto m = IntegerMatrix::identity(r);
    std::uniform_int_distribution<std::size_t> pick(0, r - 1);
    for (int step = 0; step < 5; ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        auto e = IntegerMatrix::identity(r);
        if (i == j) e.set(i, i, Integer(-1));
        else e.set(i, j, Integer(step % 2 ? 1 : -1));
        m = m * e;
    }
    return m;
}

const char* kSamples[] = {
    "std",
    "dual",
    "const(3)",
    "lie(3)",
    "lie[2..3]",
    "wedge(2, std)",
    "tensor(std, std)",
    "sum(std, dual)",
    "hom(std, lie(2))",
    "wedge(2, hom(std, lie[2..3]))",
    "tensor(wedge(2, std), dual)",
};

}  // namespace

TEST_CASE("parse and print round trip") {
    for (const char* s : kSamples) CHECK(parse_expr(s).to_string() == s);
    CHECK(parse_expr(" wedge ( 2 ,hom(std,lie[2..3])) ").to_string() == "wedge(2, hom(std, lie[2..3]))");
    CHECK(parse_expr("lie[2..2]") == ReprExpr::lie(2));
    CHECK(parse_expr("sum(lie(2), lie(3))") == lie_interval(2, 3));
    for (const char* bad : {"", "foo", "lie(0)", "lie[3..2]", "wedge(2 std)", "std)", "hom(dual, std)", "const()"})
        CHECK_THROWS_AS(parse_expr(bad), std::invalid_argument);
}

TEST_CASE("evaluate examples") {
    auto s = evaluate(ReprExpr::standard(), 3);
    CHECK(s.dimension() == 3);
    CHECK(s == module_from(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(evaluate(ReprExpr::lie(2), 2) == module_from(2, {{1, 1}}));
    CHECK(evaluate(parse_expr("hom(std, lie(2))"), 2) == module_from(2, {{0, 1}, {1, 0}}));
    CHECK(evaluate(ReprExpr::constant(0), 2).dimension() == 0);
    CHECK(evaluate(ReprExpr::wedge(0, ReprExpr::standard()), 2) == module_from(2, {{0, 0}}));
    CHECK(evaluate(ReprExpr::wedge(3, ReprExpr::standard()), 2).dimension() == 0);
}

TEST_CASE("lie_interval") {
    CHECK(lie_interval(2, 2) == ReprExpr::lie(2));
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t c = 1; c <= 4; ++c) {
            std::size_t witt = 0;
            for (std::size_t b = 1; b <= c; ++b) witt += lie::witt_dimension(r, b);
            CHECK(evaluate(lie_interval(1, c), r).dimension() == witt);
        }
    CHECK(evaluate(lie_interval(2, 3), 2).dimension() == 3);
    CHECK_THROWS_AS(lie_interval(3, 2), std::invalid_argument);
}

TEST_CASE("evaluate is additive, multiplicative and binomial") {
    auto binom = [](std::size_t n, std::size_t k) {
        std::size_t v = 1;
        for (std::size_t i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
        return k > n ? 0 : v;
    };
    for (std::size_t r = 1; r <= 4; ++r) {
        for (std::size_t q = 0; q <= 5; ++q)
            CHECK(evaluate(ReprExpr::wedge(q, ReprExpr::standard()), r).dimension() == binom(r, q));
        for (const char* a : kSamples)
            for (const char* b : {"std", "lie(2)", "dual"}) {
                auto ea = parse_expr(a), eb = parse_expr(b);
                CHECK(evaluate(ReprExpr::tensor(ea, eb), r).dimension() ==
                      evaluate(ea, r).dimension() * evaluate(eb, r).dimension());
                CHECK(evaluate(ReprExpr::sum(ea, eb), r).dimension() ==
                      evaluate(ea, r).dimension() + evaluate(eb, r).dimension());
            }
    }
}

TEST_CASE("basis weights match evaluate and the action is a homomorphism") {
    std::mt19937 rng(2);
    for (std::size_t r = 2; r <= 3; ++r)
        for (const char* s : kSamples) {
            auto e = parse_expr(s);
            if (r == 3 && std::string(s) == "wedge(2, hom(std, lie[2..3]))") continue;
            CHECK(module_from(r, basis_weights(e, r)) == evaluate(e, r));
            auto a = random_unimodular(r, rng), b = random_unimodular(r, rng);
            CHECK(action_matrix(e, a * b) == action_matrix(e, a) * action_matrix(e, b));
            CHECK(action_matrix(e, IntegerMatrix::identity(r)) ==
                  RationalMatrix::identity(basis_weights(e, r).size()));
        }
}

TEST_CASE("torus elements act diagonally by their weights") {
    // diag(2, 3) acts on a weight-w vector by 2^{w_1} 3^{w_2}
    auto t = IntegerMatrix::identity(2);
    t.set(0, 0, Integer(2));
    t.set(1, 1, Integer(3));
    for (const char* s : kSamples) {
        auto e = parse_expr(s);
        auto m = action_matrix(e, t);
        auto ws = basis_weights(e, 2);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            linalg::Rational expect = 1;
            for (std::size_t k = 0; k < 2; ++k) {
                linalg::Rational base = k == 0 ? 2 : 3;
                for (int p = 0; p < std::abs(ws[i][k]); ++p) expect *= ws[i][k] > 0 ? base : 1 / base;
            }
            CHECK(m.get(i, i) == expect);
        }
        CHECK(m.nnz() == ws.size());
    }
}

TEST_CASE("weight_dominance_compare") {
    auto a = evaluate(parse_expr("hom(std, lie(2))"), 3);
    auto v = weight_dominance_compare(a, a);
    CHECK(v.holds);
    CHECK(v.equal);
    CHECK(weight_dominance_compare(WeightModule{3, {}}, a).holds);
    auto bad = weight_dominance_compare(evaluate(parse_expr("tensor(std, std)"), 2),
                                        evaluate(parse_expr("wedge(2, std)"), 2));
    CHECK_FALSE(bad.holds);
    bool saw = false;
    for (const auto& x : bad.violations) saw = saw || x.weight == Weight{2, 0};
    CHECK(saw);
    CHECK_THROWS_AS(weight_dominance_compare(a, evaluate(ReprExpr::standard(), 2)), std::invalid_argument);
}

TEST_CASE("schur_decompose_gl2") {
    CHECK(schur_decompose_gl2(evaluate(parse_expr("wedge(2, std)"), 2)) == Gl2Decomposition{{{1, 1}, 1}});
    CHECK(schur_decompose_gl2(evaluate(parse_expr("tensor(std, std)"), 2)) ==
          Gl2Decomposition{{{2, 0}, 1}, {{1, 1}, 1}});
    CHECK(schur_decompose_gl2(evaluate(parse_expr("hom(std, lie(2))"), 2)) == Gl2Decomposition{{{1, 0}, 1}});
    for (const char* s : kSamples) {
        auto m = evaluate(parse_expr(s), 2);
        CHECK(gl2_character(schur_decompose_gl2(m)) == m);
    }
    WeightModule broken{2, {{{2, 0}, 1}}};
    CHECK_THROWS_AS(schur_decompose_gl2(broken), NotACharacterError);
    CHECK_THROWS_AS(schur_decompose_gl2(evaluate(ReprExpr::standard(), 3)), std::invalid_argument);
}

TEST_CASE("coinvariants") {
    for (std::size_t r = 2; r <= 3; ++r) {
        CHECK(coinvariants_dim(ReprExpr::constant(1), r) == 1);
        CHECK(coinvariants_dim(ReprExpr::constant(4), r) == 4);
        for (const char* s : {"std", "wedge(2, std)", "lie(2)", "hom(std, lie(2))", "dual"})
            CHECK(coinvariants_dim(parse_expr(s), r) == 0);
    }
    // Hom(std, std) has the trace as its only coinvariant
    CHECK(coinvariants_dim(parse_expr("hom(std, std)"), 2) == 1);
    CHECK_THROWS_AS(coinvariants_dim(ReprExpr::standard(), 1), std::invalid_argument);
}

TEST_CASE("degree_estimate and cross effects") {
    CHECK(degree_estimate(ints({0, 1, 2, 3, 4})).degree == 1);
    CHECK(degree_estimate(ints({0, 1, 2, 3, 4})).sufficient);
    CHECK(degree_estimate(ints({5, 5, 5})).degree == 0);
    CHECK(degree_estimate(ints({0, 0, 1, 3, 6, 10})).degree == 2);
    auto few = degree_estimate(ints({0, 1, 4}));
    CHECK(few.degree == 2);
    CHECK_FALSE(few.sufficient);
    CHECK_THROWS_AS(degree_estimate(ints({1})), std::invalid_argument);

    for (std::size_t n = 1; n <= 4; ++n) CHECK(cross_effect_dim(ints({7, 7, 7, 7, 7}), n) == 0);
    auto std_dims = ints({0, 1, 2, 3, 4});
    CHECK(cross_effect_dim(std_dims, 1) == 1);
    for (std::size_t n = 2; n <= 4; ++n) CHECK(cross_effect_dim(std_dims, n) == 0);
    auto wedge2 = ints({0, 0, 1, 3, 6});
    CHECK(cross_effect_dim(wedge2, 2) == 1);
    CHECK(cross_effect_dim(wedge2, 3) == 0);
    CHECK(cross_effect_dim(wedge2, 4) == 0);
    CHECK_THROWS_AS(cross_effect_dim(wedge2, 5), std::invalid_argument);
}
