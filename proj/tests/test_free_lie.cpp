#include <doctest.h>

#include "nilhom/free_lie.hpp"

#include <algorithm>
#include <random>

using namespace nilhom;
using namespace nilhom::lie;
using linalg::IntegerMatrix;
using linalg::RationalMatrix;

namespace {

// Lyndon by definition: strictly smaller than every proper rotation.
bool lyndon_oracle(const Word& w) {
    for (std::size_t k = 1; k < w.size(); ++k) {
        Word rot = w;
        std::rotate(rot.begin(), rot.begin() + static_cast<long>(k), rot.end());
        if (!(w < rot)) return false;
    }
    return !w.empty();
}

std::size_t brute_force_lyndon_count(std::size_t r, std::size_t n) {
    std::size_t total = 1;
    for (std::size_t k = 0; k < n; ++k) total *= r;
    std::size_t count = 0;
    for (std::size_t code = 0; code < total; ++code) {
        Word w(n, 0);
        std::size_t x = code;
        for (std::size_t k = 0; k < n; ++k) {
            w[n - 1 - k] = static_cast<char>(x % r);
            x /= r;
        }
        if (lyndon_oracle(w)) ++count;
    }
    return count;
}

TensorElement letter(std::size_t r, int i) {
    return TensorElement::word(r, Word(1, static_cast<char>(i)));
}

TensorElement comm(const TensorElement& a, const TensorElement& b) {
    return a.commutator(b, 64);
}

LieElement random_lie(std::mt19937& rng, const std::shared_ptr<const HallBasis>& basis) {
    LieElement::Coords coords;
    for (std::size_t i = 0; i < basis->size(); ++i)
        if (rng() % 2) coords.emplace(i, Rational(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3)));
    for (auto& [i, c] : coords) c.canonicalize();
    return LieElement(basis, coords);
}

}  // namespace

TEST_CASE("witt_dimension") {
    CHECK(witt_dimension(2, 1) == brute_force_lyndon_count(2, 1));
    CHECK(witt_dimension(2, 1) == 2);
    CHECK(witt_dimension(2, 2) == 1);
    CHECK(witt_dimension(2, 3) == 2);
    CHECK(witt_dimension(2, 5) == brute_force_lyndon_count(2, 5));
    CHECK(witt_dimension(2, 5) == 6);
    for (std::size_t n = 2; n <= 6; ++n) CHECK(witt_dimension(1, n) == 0);
    CHECK_THROWS_AS(witt_dimension(2, 0), std::invalid_argument);
    for (std::size_t r = 1; r <= 4; ++r)
        for (std::size_t n = 1; n <= 6; ++n) CHECK(witt_dimension(r, n) == brute_force_lyndon_count(r, n));
}

TEST_CASE("hall_basis layout") {
    auto b22 = hall_basis(2, 2);
    REQUIRE(b22->size() == 3);
    CHECK(format_word(b22->element(0).word) == "1");
    CHECK(format_word(b22->element(1).word) == "2");
    CHECK(format_word(b22->element(2).word) == "12");
    CHECK(b22->degree_size(1) == 2);
    CHECK(b22->degree_size(2) == 1);

    auto b23 = hall_basis(2, 3);
    CHECK(b23->degree_size(3) == 2);
    CHECK(format_word(b23->element(3).word) == "112");
    CHECK(format_word(b23->element(4).word) == "122");

    auto b13 = hall_basis(1, 3);
    CHECK(b13->size() == 1);
    CHECK(b13->degree_size(2) == 0);

    for (std::size_t r = 1; r <= 4; ++r) {
        auto b = hall_basis(r, 5);
        for (std::size_t n = 1; n <= 5; ++n) CHECK(b->degree_size(n) == witt_dimension(r, n));
        for (std::size_t i = 0; i < b->size(); ++i) {
            const auto& e = b->element(i);
            if (i > 0) {
                const auto& prev = b->element(i - 1);
                CHECK((prev.degree < e.degree || (prev.degree == e.degree && prev.word < e.word)));
            }
            if (e.degree >= 2) {
                REQUIRE(e.left);
                REQUIRE(e.right);
                CHECK(*e.left < i);
                CHECK(*e.right < i);
                CHECK(b->element(*e.left).word + b->element(*e.right).word == e.word);
            }
        }
    }
    CHECK(hall_basis(3, 4) == hall_basis(3, 4));
}

TEST_CASE("expand_to_tensor") {
    auto b = hall_basis(2, 3);
    auto x1 = LieElement::generator(b, 0);
    CHECK(expand_to_tensor(x1) == letter(2, 0));
    auto x12 = LieElement::basis_element(b, 2);
    CHECK(expand_to_tensor(x12) == comm(letter(2, 0), letter(2, 1)));

    // [[x1 x2] x1] expanded by hand from nested commutators: 2*121 - 211 - 112
    auto nested = bracket(x12, x1);
    auto expected = comm(comm(letter(2, 0), letter(2, 1)), letter(2, 0));
    CHECK(expand_to_tensor(nested) == expected);
    CHECK(expected.coefficient(parse_word("121", 2)) == 2);
    CHECK(expected.coefficient(parse_word("112", 2)) == -1);
    CHECK(expected.coefficient(parse_word("211", 2)) == -1);
    // and in the Lyndon basis it is -[x1,[x1,x2]]
    CHECK(nested == LieElement::basis_element(b, *b->index_of(parse_word("112", 2)), -1));
}

TEST_CASE("bracket basics") {
    auto b = hall_basis(2, 2);
    auto x1 = LieElement::generator(b, 0), x2 = LieElement::generator(b, 1);
    CHECK(bracket(x1, x1).is_zero());
    CHECK(bracket(x2, x1) == LieElement::basis_element(b, 2, -1));
    // truncation above the class
    CHECK(bracket(LieElement::basis_element(b, 2), x1).is_zero());
    CHECK_THROWS_AS(bracket(x1, LieElement::generator(hall_basis(3, 2), 0)), std::invalid_argument);
}

TEST_CASE("antisymmetry and Jacobi on basis triples") {
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{2, 5}, {3, 4}}) {
        auto b = hall_basis(r, c);
        std::vector<LieElement> e;
        for (std::size_t i = 0; i < b->size(); ++i) e.push_back(LieElement::basis_element(b, i));
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = 0; j < e.size(); ++j) {
                auto di = b->element(i).degree, dj = b->element(j).degree;
                if (di + dj > c) continue;
                CHECK(bracket(e[i], e[j]) == -bracket(e[j], e[i]));
                for (std::size_t k = j; k < e.size(); ++k) {
                    if (di + dj + b->element(k).degree > c) continue;
                    auto jac = bracket(e[i], bracket(e[j], e[k])) + bracket(e[j], bracket(e[k], e[i])) +
                               bracket(e[k], bracket(e[i], e[j]));
                    CHECK(jac.is_zero());
                }
            }
    }
}

TEST_CASE("tensor_to_hall") {
    auto b = hall_basis(2, 2);
    auto sym = TensorElement::word(2, parse_word("12", 2)) + TensorElement::word(2, parse_word("21", 2));
    CHECK_THROWS_AS(tensor_to_hall(sym, b), NotPrimitiveError);
    auto anti = TensorElement::word(2, parse_word("12", 2)) - TensorElement::word(2, parse_word("21", 2));
    CHECK(tensor_to_hall(anti, b) == LieElement::basis_element(b, 2));
    CHECK_THROWS_AS(tensor_to_hall(TensorElement::word(2, parse_word("112", 2)), b), std::invalid_argument);

    // section property and agreement with a dense linear solve against the expansions
    std::mt19937 rng(3);
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{2, 5}, {3, 4}}) {
        auto basis = hall_basis(r, c);
        for (std::size_t i = 0; i < basis->size(); ++i) {
            auto e = LieElement::basis_element(basis, i);
            CHECK(tensor_to_hall(expand_to_tensor(e), basis) == e);
        }
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_lie(rng, basis);
            auto t = expand_to_tensor(a);
            CHECK(tensor_to_hall(t, basis) == a);
            for (std::size_t n = 2; n <= c; ++n) {
                auto tn = t.homogeneous_part(n);
                auto [lo, hi] = basis->degree_range(n);
                std::map<Word, std::size_t> rows;
                for (std::size_t i = lo; i < hi; ++i)
                    for (const auto& [w, x] : basis->element(i).expansion.terms()) rows.emplace(w, 0);
                for (const auto& [w, x] : tn.terms()) rows.emplace(w, 0);
                std::size_t k = 0;
                for (auto& [w, idx] : rows) idx = k++;
                std::vector<linalg::Triplet<Rational>> trip;
                for (std::size_t i = lo; i < hi; ++i)
                    for (const auto& [w, x] : basis->element(i).expansion.terms()) trip.push_back({rows[w], i - lo, x});
                auto m = RationalMatrix::from_triplets(rows.size(), hi - lo, trip);
                linalg::RationalVector rhs(rows.size(), Rational(0));
                for (const auto& [w, x] : tn.terms()) rhs[rows[w]] = x;
                auto sol = linalg::solve(m, rhs);
                REQUIRE(sol);
                for (std::size_t i = lo; i < hi; ++i) CHECK((*sol)[i - lo] == a.coordinate(i));
            }
        }
    }
}

TEST_CASE("dynkin retraction") {
    auto b2 = hall_basis(2, 2);
    CHECK(dynkin(TensorElement::word(2, parse_word("1", 2)), b2) == LieElement::generator(b2, 0));
    auto sym = TensorElement::word(2, parse_word("12", 2)) + TensorElement::word(2, parse_word("21", 2));
    CHECK(dynkin(sym, b2).is_zero());
    CHECK_THROWS_AS(dynkin(TensorElement::word(2, parse_word("1", 2)) + sym, b2), std::invalid_argument);

    for (std::size_t r = 1; r <= 3; ++r) {
        auto basis = hall_basis(r, 4);
        for (std::size_t i = 0; i < basis->size(); ++i) {
            auto e = LieElement::basis_element(basis, i);
            CHECK(dynkin(expand_to_tensor(e), basis) == e);
            // undivided left-normed bracketing multiplies by the degree
            auto deg = basis->element(i).degree;
            CHECK(left_normed_bracketing(expand_to_tensor(e)) == expand_to_tensor(e).scaled(deg));
        }
    }
}

TEST_CASE("induced_map_lie") {
    auto id3 = IntegerMatrix::identity(3);
    for (std::size_t b = 1; b <= 4; ++b)
        CHECK(induced_map_lie(id3, b) == RationalMatrix::identity(witt_dimension(3, b)));

    for (long t : {2L, -3L})
        for (std::size_t b = 1; b <= 4; ++b) {
            auto m = induced_map_lie(IntegerMatrix::identity(2).scaled(t), b);
            mpz_class tb;
            mpz_pow_ui(tb.get_mpz_t(), mpz_class(t).get_mpz_t(), b);
            CHECK(m == RationalMatrix::identity(witt_dimension(2, b)).scaled(Rational(tb)));
        }

    std::mt19937 rng(17);
    auto random_int = [&](std::size_t rows, std::size_t cols) {
        std::vector<std::vector<linalg::Integer>> d(rows, std::vector<linalg::Integer>(cols));
        for (auto& row : d)
            for (auto& x : row) x = static_cast<long>(rng() % 5) - 2;
        return IntegerMatrix::from_dense(d);
    };
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_int(3, 2), bmat = random_int(2, 3);
        for (std::size_t deg = 1; deg <= 4; ++deg)
            CHECK(induced_map_lie(bmat * a, deg) == induced_map_lie(bmat, deg) * induced_map_lie(a, deg));
    }

    // Lie^1 is the identity functor and Lie^2 the second exterior power.
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t s = 1; s <= 3; ++s) {
            auto a = random_int(s, r);
            CHECK(induced_map_lie(a, 1) == linalg::to_rational(a));
            auto l2 = induced_map_lie(a, 2);
            std::vector<std::pair<std::size_t, std::size_t>> src, dst;
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = i + 1; j < r; ++j) src.emplace_back(i, j);
            for (std::size_t k = 0; k < s; ++k)
                for (std::size_t l = k + 1; l < s; ++l) dst.emplace_back(k, l);
            REQUIRE(l2.rows() == dst.size());
            REQUIRE(l2.cols() == src.size());
            for (std::size_t p = 0; p < dst.size(); ++p)
                for (std::size_t q = 0; q < src.size(); ++q) {
                    auto [k, l] = dst[p];
                    auto [i, j] = src[q];
                    linalg::Integer minor = a.get(k, i) * a.get(l, j) - a.get(k, j) * a.get(l, i);
                    CHECK(l2.get(p, q) == Rational(minor));
                }
        }
}
