#include "nilhom/nilgroup.hpp"

#include "nilhom/lie_homology.hpp"

#include <stdexcept>

namespace nilhom::nil {

using lie::TensorElement;

MalcevElement::MalcevElement(std::shared_ptr<const lie::HallBasis> basis, Coords coords)
    : log_(std::move(basis), std::move(coords)) {}

MalcevElement MalcevElement::generator(std::shared_ptr<const lie::HallBasis> basis, std::size_t letter) {
    return MalcevElement(lie::LieElement::generator(std::move(basis), letter));
}

std::vector<std::pair<lie::Word, Rational>> MalcevElement::terms() const {
    std::vector<std::pair<lie::Word, Rational>> out;
    for (const auto& [i, x] : coords()) out.emplace_back(basis()->element(i).word, x);
    return out;
}

namespace {

void check_same(const MalcevElement& u, const MalcevElement& v) {
    if (u.rank() != v.rank() || u.lie_class() != v.lie_class())
        throw std::invalid_argument("MalcevElement: basis mismatch");
}

// exp(x) - 1 for x without constant term
TensorElement exp_minus_one(const TensorElement& x, std::size_t c) {
    TensorElement sum(x.rank()), power = x;
    for (std::size_t k = 1; k <= c && !power.is_zero(); ++k) {
        sum += power;
        power = power.multiply(x, c).scaled(Rational(1, k + 1));
    }
    return sum;
}

// log(1 + y) for y without constant term
TensorElement log_one_plus(const TensorElement& y, std::size_t c) {
    TensorElement sum(y.rank()), power = y;
    for (std::size_t k = 1; k <= c && !power.is_zero(); ++k) {
        sum += power.scaled(Rational(k % 2 ? 1 : -1, k));
        power = power.multiply(y, c);
    }
    return sum;
}

}  // namespace

MalcevElement multiply(const MalcevElement& u, const MalcevElement& v) {
    check_same(u, v);
    const std::size_t c = u.lie_class();
    const auto& basis = u.basis();
    auto a = exp_minus_one(lie::expand_to_tensor(u.log()), c);
    auto b = exp_minus_one(lie::expand_to_tensor(v.log()), c);
    auto y = a + b + a.multiply(b, c);
    auto z = log_one_plus(y, c);
    lie::LieElement result(basis);
    for (std::size_t n = 1; n <= c; ++n) {
        auto part = z.homogeneous_part(n);
        if (!part.is_zero()) result = result + lie::dynkin(part, basis);
    }
    if (lie::expand_to_tensor(result) != z) throw std::logic_error("multiply: logarithm of the product is not Lie");
    return MalcevElement(std::move(result));
}

MalcevElement inverse(const MalcevElement& u) {
    return MalcevElement(-u.log());
}

MalcevElement group_commutator(const MalcevElement& u, const MalcevElement& v) {
    check_same(u, v);
    return multiply(multiply(u, v), multiply(inverse(u), inverse(v)));
}

std::vector<std::size_t> lcs_ranks(std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) throw std::invalid_argument("lcs_ranks: rank and class must be >= 1");
    auto basis = lie::hall_basis(r, c);
    std::vector<MalcevElement> gens;
    for (std::size_t i = 0; i < r; ++i) gens.push_back(MalcevElement::generator(basis, i));

    std::vector<std::size_t> ranks;
    std::vector<MalcevElement> level = gens;
    for (std::size_t n = 1; n <= c; ++n) {
        if (n > 1) {
            std::vector<MalcevElement> next;
            for (const auto& g : level)
                for (const auto& x : gens) next.push_back(group_commutator(g, x));
            level = std::move(next);
        }
        auto [lo, hi] = basis->degree_range(n);
        linalg::EchelonBasis span(hi - lo);
        std::vector<MalcevElement> kept;
        for (const auto& g : level) {
            for (const auto& [i, x] : g.coords())
                if (i < lo) throw std::logic_error("lcs_ranks: iterated commutator has a term below its degree");
            linalg::RationalVector slice(hi - lo);
            for (const auto& [i, x] : g.coords())
                if (i < hi) slice[i - lo] = x;
            // the next layer depends only on the leading part, so a spanning subset suffices
            if (span.add(slice)) kept.push_back(g);
        }
        ranks.push_back(span.rank());
        level = std::move(kept);
    }
    return ranks;
}

std::vector<MalcevElement> center_basis(std::size_t r, std::size_t c) {
    auto algebra = homology::shared_free_nilpotent_lie(r, c);
    auto basis = lie::hall_basis(r, c);
    const std::size_t m = basis->size();
    // rows (generator i, coordinate k) of z -> [z, x_i]
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < r; ++i)
            for (const auto& [k, x] : algebra->bracket_basis(j, i)) t.push_back({i * m + k, j, x});
    auto kernel = linalg::nullspace_basis(linalg::RationalMatrix::from_triplets(r * m, m, std::move(t)));
    std::vector<MalcevElement> out;
    for (const auto& v : kernel) out.emplace_back(lie::LieElement::from_dense(basis, v));
    return out;
}

aut::LieAutomorphism inner_action(const MalcevElement& g) {
    auto algebra = homology::shared_free_nilpotent_lie(g.rank(), g.lie_class());
    const std::size_t m = algebra->dim();
    homology::Vector gv(g.coords().begin(), g.coords().end());
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t j = 0; j < m; ++j)
        for (const auto& [i, x] : algebra->bracket(gv, homology::Vector{{j, Rational(1)}})) t.push_back({i, j, x});
    auto ad = linalg::RationalMatrix::from_triplets(m, m, std::move(t));
    return aut::LieAutomorphism(algebra, aut::exp_nilpotent(ad));
}

std::vector<MalcevElement> inner_kernel_basis(std::size_t r, std::size_t c) {
    auto basis = lie::hall_basis(r, c);
    const std::size_t m = basis->size();
    // log(inner_action(g)) is linear in g; column k is its flattening at e_k
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t k = 0; k < m; ++k) {
        auto g = MalcevElement(lie::LieElement::basis_element(basis, k));
        auto log = aut::log_unipotent(inner_action(g).matrix());
        for (const auto& e : log.triplets()) t.push_back({e.row * m + e.col, k, e.value});
    }
    auto kernel = linalg::nullspace_basis(linalg::RationalMatrix::from_triplets(m * m, m, std::move(t)));
    std::vector<MalcevElement> out;
    for (const auto& v : kernel) out.emplace_back(lie::LieElement::from_dense(basis, v));
    return out;
}

}  // namespace nilhom::nil
