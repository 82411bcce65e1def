#include <doctest.h>

#include "nilhom/nilgroup.hpp"

#include <random>

using namespace nilhom;
using namespace nilhom::nil;

namespace {

MalcevElement random_element(const std::shared_ptr<const lie::HallBasis>& basis, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    MalcevElement::Coords c;
    for (std::size_t i = 0; i < basis->size(); ++i)
        if (int x = num(rng)) c.emplace(i, Rational(x, den(rng)));
    for (auto& [i, x] : c) x.canonicalize();
    return MalcevElement(basis, c);
}

// exp(u) exp(v) in the truncated tensor algebra, computed with explicit
// factorials rather than the library path
lie::TensorElement exp_series(const lie::TensorElement& x, std::size_t c) {
    lie::TensorElement sum = lie::TensorElement::word(x.rank(), "");
    lie::TensorElement power = sum;
    Rational fact = 1;
    for (std::size_t k = 1; k <= c; ++k) {
        power = power.multiply(x, c);
        fact *= k;
        sum += power.scaled(1 / fact);
    }
    return sum;
}

}  // namespace

TEST_CASE("multiply: identity and the (2,2) example") {
    auto basis = lie::hall_basis(2, 2);
    auto x1 = MalcevElement::generator(basis, 0);
    auto x2 = MalcevElement::generator(basis, 1);
    MalcevElement zero(basis);
    CHECK(multiply(zero, x2) == x2);
    CHECK(multiply(x1, zero) == x1);
    auto p = multiply(x1, x2);
    CHECK(p.coords().size() == 3);
    CHECK(p.coordinate(0) == 1);
    CHECK(p.coordinate(1) == 1);
    CHECK(p.coordinate(2) == Rational(1, 2));
    CHECK(inverse(x1).coordinate(0) == -1);
    CHECK(inverse(zero) == zero);
    CHECK(multiply(x1, inverse(x1)).is_identity());
}

TEST_CASE("multiply agrees with exponentials in the tensor algebra") {
    std::mt19937 rng(9);
    for (auto [r, c] : {std::pair{2, 3}, {3, 3}, {2, 4}}) {
        auto basis = lie::hall_basis(r, c);
        for (int trial = 0; trial < 5; ++trial) {
            auto u = random_element(basis, rng), v = random_element(basis, rng);
            auto lhs = exp_series(lie::expand_to_tensor(multiply(u, v).log()), c);
            auto rhs = exp_series(lie::expand_to_tensor(u.log()), c)
                           .multiply(exp_series(lie::expand_to_tensor(v.log()), c), c);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("group law: associativity, inverses, abelianization") {
    std::mt19937 rng(1);
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
        auto basis = lie::hall_basis(r, c);
        for (int trial = 0; trial < 25; ++trial) {
            auto u = random_element(basis, rng), v = random_element(basis, rng), w = random_element(basis, rng);
            CHECK(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)));
            CHECK(multiply(inverse(u), u).is_identity());
            auto p = multiply(u, v);
            for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i)
                CHECK(p.coordinate(i) == u.coordinate(i) + v.coordinate(i));
        }
    }
    auto b22 = lie::hall_basis(2, 2);
    auto b23 = lie::hall_basis(3, 2);
    CHECK_THROWS_AS(multiply(MalcevElement(b22), MalcevElement(b23)), std::invalid_argument);
}

TEST_CASE("group_commutator") {
    std::mt19937 rng(4);
    auto b22 = lie::hall_basis(2, 2);
    auto comm = group_commutator(MalcevElement::generator(b22, 0), MalcevElement::generator(b22, 1));
    CHECK(comm == MalcevElement(b22, {{2, Rational(1)}}));

    auto b23 = lie::hall_basis(2, 3);
    auto c3 = group_commutator(MalcevElement::generator(b23, 0), MalcevElement::generator(b23, 1));
    CHECK(c3.coordinate(0) == 0);
    CHECK(c3.coordinate(1) == 0);
    CHECK(c3.coordinate(*b23->index_of(lie::parse_word("12", 2))) == 1);

    auto u = random_element(b23, rng);
    CHECK(group_commutator(u, u).is_identity());

    // class 2: the commutator is the bracket of the linear parts
    auto b32 = lie::hall_basis(3, 2);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_element(b32, rng), b = random_element(b32, rng);
        CHECK(group_commutator(a, b).log() == lie::bracket(a.log().homogeneous_part(1), b.log().homogeneous_part(1)));
    }
}

TEST_CASE("lcs_ranks") {
    CHECK(lcs_ranks(2, 2) == std::vector<std::size_t>{2, 1});
    CHECK(lcs_ranks(2, 3) == std::vector<std::size_t>{2, 1, 2});
    CHECK(lcs_ranks(4, 1) == std::vector<std::size_t>{4});
    for (std::size_t r = 2; r <= 3; ++r)
        for (std::size_t c = 1; c <= 4; ++c) {
            auto ranks = lcs_ranks(r, c);
            for (std::size_t n = 1; n <= c; ++n) CHECK(ranks[n - 1] == lie::witt_dimension(r, n));
        }
}

TEST_CASE("center and inner automorphisms") {
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 1}, {3, 1}, {2, 4}}) {
        auto basis = lie::hall_basis(r, c);
        auto center = center_basis(r, c);
        auto [lo, hi] = basis->degree_range(c);
        CHECK(center.size() == hi - lo);
        for (const auto& z : center)
            for (const auto& [i, x] : z.coords()) CHECK(i >= lo);
        CHECK(inner_kernel_basis(r, c).size() == hi - lo);
        for (const auto& z : center) {
            CHECK(inner_action(z).is_identity());
            for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i) {
                auto x = MalcevElement::generator(basis, i);
                CHECK(multiply(z, x) == multiply(x, z));
            }
        }
    }
    auto basis = lie::hall_basis(2, 2);
    CHECK(inner_action(MalcevElement(basis)).is_identity());
    auto phi = inner_action(MalcevElement::generator(basis, 0));
    CHECK(phi.matrix().get(1, 1) == 1);
    CHECK(phi.matrix().get(2, 1) == 1);
    CHECK(phi.matrix().get(0, 1) == 0);
}

TEST_CASE("inner_action matches conjugation in the group") {
    std::mt19937 rng(12);
    for (auto [r, c] : {std::pair{2, 3}, {3, 3}, {2, 4}}) {
        auto basis = lie::hall_basis(r, c);
        for (int trial = 0; trial < 5; ++trial) {
            auto g = random_element(basis, rng), h = random_element(basis, rng);
            auto conj = multiply(multiply(g, h), inverse(g));
            auto image = inner_action(g).matrix().apply(h.log().dense());
            CHECK(conj.log() == lie::LieElement::from_dense(basis, image));
        }
    }
}

TEST_CASE("terms are listed in basis order") {
    auto basis = lie::hall_basis(2, 2);
    auto p = multiply(MalcevElement::generator(basis, 1), MalcevElement::generator(basis, 0));
    auto t = p.terms();
    REQUIRE(t.size() == 3);
    CHECK(lie::format_word(t[2].first) == "12");
    CHECK(t[2].second == Rational(-1, 2));
}
