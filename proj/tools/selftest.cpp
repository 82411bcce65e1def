#include "records.hpp"

#include "nilhom/aut.hpp"
#include "nilhom/nilgroup.hpp"

#include <random>

namespace nilhom::cli {

namespace {

using linalg::IntegerMatrix;
using linalg::Rational;

// Deterministic pseudo-random element with small rational coordinates.
nil::MalcevElement sample(const std::shared_ptr<const lie::HallBasis>& basis, std::mt19937& rng) {
    nil::MalcevElement::Coords c;
    for (std::size_t i = 0; i < basis->size(); ++i) {
        long num = static_cast<long>(rng() % 9) - 4;
        long den = static_cast<long>(rng() % 3) + 1;
        if (num) {
            Rational q(num, den);
            q.canonicalize();
            c.emplace(i, q);
        }
    }
    return nil::MalcevElement(basis, c);
}

Json witt_lyndon() {
    std::size_t cases = 0;
    bool ok = true;
    for (std::size_t r = 1; r <= 4; ++r) {
        auto words = lie::lyndon_words(r, 6);
        for (std::size_t n = 1; n <= 6; ++n) {
            auto count = static_cast<std::size_t>(
                std::count_if(words.begin(), words.end(), [n](const lie::Word& w) { return w.size() == n; }));
            ok = ok && count == lie::witt_dimension(r, n);
            ++cases;
        }
    }
    return {{"passed", ok}, {"cases", cases}};
}

Json group_law() {
    std::mt19937 rng(20240601);
    std::size_t triples = 0;
    bool ok = true;
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 2}, {2, 4}}) {
        auto basis = lie::hall_basis(r, c);
        for (int k = 0; k < 25; ++k) {
            auto u = sample(basis, rng), v = sample(basis, rng), w = sample(basis, rng);
            ok = ok && nil::multiply(nil::multiply(u, v), w) == nil::multiply(u, nil::multiply(v, w));
            ok = ok && nil::multiply(u, nil::MalcevElement(basis)) == u;
            ++triples;
        }
        auto comm = nil::group_commutator(nil::MalcevElement::generator(basis, 0), nil::MalcevElement::generator(basis, 1));
        ok = ok && comm.coordinate(*basis->index_of(lie::parse_word("12", r))) == 1;
    }
    return {{"passed", ok}, {"triples", triples}};
}

Json lcs() {
    bool ok = true;
    Json cases = Json::array();
    for (auto [r, c] : {std::pair{2, 4}, {3, 3}, {4, 2}}) {
        auto ranks = nil::lcs_ranks(r, c);
        for (std::size_t n = 1; n <= static_cast<std::size_t>(c); ++n)
            ok = ok && ranks[n - 1] == lie::witt_dimension(r, n);
        cases.push_back({{"rank", r}, {"class", c}, {"ranks", ranks}});
    }
    return {{"passed", ok}, {"cases", cases}};
}

Json center_inner() {
    bool ok = true;
    for (auto [r, c] : {std::pair{2, 2}, {2, 3}, {3, 2}}) {
        auto basis = lie::hall_basis(r, c);
        auto [lo, hi] = basis->degree_range(c);
        auto center = nil::center_basis(r, c);
        ok = ok && center.size() == hi - lo && nil::inner_kernel_basis(r, c).size() == hi - lo;
        for (const auto& z : center) {
            ok = ok && nil::inner_action(z).is_identity();
            for (const auto& [i, x] : z.coords()) ok = ok && i >= lo;
        }
    }
    return {{"passed", ok}};
}

Json nilmanifold() {
    bool ok = homology::group_betti(2, 2) == std::vector<std::size_t>{1, 2, 2, 1};
    Json cases = Json::array();
    for (auto [r, c] : {std::pair{2, 3}, {3, 2}, {2, 4}, {3, 3}}) {
        auto g = homology::shared_free_nilpotent_lie(r, c);
        auto b = homology::betti_numbers(*g);
        const std::size_t m = b.size() - 1;
        long euler = 0;
        for (std::size_t d = 0; d <= m; ++d) {
            ok = ok && b[d] == b[m - d] && homology::boundary_squared_vanishes(*g, d);
            euler += d % 2 ? -static_cast<long>(b[d]) : static_cast<long>(b[d]);
        }
        ok = ok && b[0] == 1 && b[1] == static_cast<std::size_t>(r) && euler == 0;
        cases.push_back({{"rank", r}, {"class", c}, {"betti", b}});
    }
    return {{"passed", ok}, {"cases", cases}};
}

Json degree_bound() {
    bool ok = true;
    Json cases = Json::array();
    for (auto [c, d] : {std::pair<std::size_t, std::size_t>{2, 1}, {2, 2}, {3, 1}}) {
        std::vector<linalg::Integer> dims;
        std::vector<std::size_t> seq;
        for (std::size_t r = 0; r <= 5; ++r) {
            seq.push_back(r == 0 ? (d == 0 ? 1 : 0)
                                 : homology::homology_dimension(*homology::shared_free_nilpotent_lie(r, c), d));
            dims.emplace_back(seq.back());
        }
        auto est = rep::degree_estimate(dims);
        ok = ok && est.sufficient && est.degree <= c * d;
        cases.push_back({{"class", c}, {"degree", d}, {"sequence", seq}, {"estimate", est.degree}});
    }
    return {{"passed", ok}, {"cases", cases}};
}

Json dynkin_retract() {
    bool ok = true;
    std::size_t checked = 0;
    for (std::size_t r = 1; r <= 3; ++r) {
        auto basis = lie::hall_basis(r, 4);
        for (std::size_t i = 0; i < basis->size(); ++i) {
            auto p = lie::LieElement::basis_element(basis, i);
            ok = ok && lie::dynkin(lie::expand_to_tensor(p), basis) == p;
            ++checked;
        }
    }
    return {{"passed", ok}, {"checked", checked}};
}

Json ia_ledger() {
    bool ok = true;
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t c = 2; c <= 4; ++c) {
            auto ia = aut::shared_ia_lie_algebra(r, c);
            std::size_t expect = 0;
            for (std::size_t b = 2; b <= c; ++b) expect += r * lie::witt_dimension(r, b);
            ok = ok && ia->algebra->dim() == expect;
            auto lcs = homology::lower_central_series_dims(*ia->algebra);
            ok = ok && lcs.back() == 0 && lcs.size() - 1 <= c - 1;
        }
    return {{"passed", ok}};
}

Json summand() {
    bool ok = true;
    for (std::size_t r = 1; r <= 3; ++r)
        for (std::size_t q = 0; q <= 3; ++q) {
            auto ia = aut::ia_betti(r, 2, q);
            auto model = rep::evaluate(rep::ReprExpr::wedge(q, rep::ReprExpr::hom_std(rep::ReprExpr::lie(2))), r);
            ok = ok && rep::WeightModule{r, {ia.weights.begin(), ia.weights.end()}} == model;
        }
    for (std::size_t q = 0; q <= 2; ++q) {
        auto ia = aut::ia_betti(2, 3, q);
        rep::WeightModule a{2, {ia.weights.begin(), ia.weights.end()}};
        auto model = rep::evaluate(rep::ReprExpr::wedge(q, rep::ReprExpr::hom_std(rep::lie_interval(2, 3))), 2);
        ok = ok && rep::weight_dominance_compare(a, model).holds;
        auto da = rep::schur_decompose_gl2(a), db = rep::schur_decompose_gl2(model);
        for (const auto& [hw, m] : da) ok = ok && db.count(hw) && db.at(hw) >= m;
    }
    return {{"passed", ok}};
}

Json coinvariants() {
    bool ok = true;
    for (std::size_t r = 2; r <= 3; ++r) {
        for (const char* s : {"std", "wedge(2, std)", "lie(2)", "hom(std, lie(2))"})
            ok = ok && rep::coinvariants_dim(rep::parse_expr(s), r) == 0;
        for (std::size_t k = 0; k <= 3; ++k) ok = ok && rep::coinvariants_dim(rep::ReprExpr::constant(k), r) == k;
    }
    return {{"passed", ok}};
}

Json conjugation() {
    bool ok = true;
    for (auto [r, c] : {std::pair<std::size_t, std::size_t>{2, 3}, {3, 2}}) {
        auto ia = aut::shared_ia_lie_algebra(r, c);
        auto expr = rep::ReprExpr::hom_std(rep::lie_interval(2, c));
        const std::size_t width = ia->pairs.size() / r;
        std::vector<IntegerMatrix> gens;
        auto swap = IntegerMatrix::identity(r);
        swap.set(0, 0, 0);
        swap.set(1, 1, 0);
        swap.set(0, 1, 1);
        swap.set(1, 0, 1);
        gens.push_back(swap);
        auto e = IntegerMatrix::identity(r);
        e.set(0, 1, 1);
        gens.push_back(e);
        for (const auto& a : gens) {
            auto conj = aut::gl_conjugation_on_ia(a, r, c);
            auto act = rep::action_matrix(expr, a);
            // IA pair (i, w) is basis vector i * width + (w - r) of hom(std, lie[2..c])
            auto to_rep = [&](std::size_t k) { return ia->pairs[k].generator * width + ia->pairs[k].hall_index - r; };
            for (std::size_t i = 0; i < conj.rows(); ++i)
                for (std::size_t j = 0; j < conj.cols(); ++j) ok = ok && conj.get(i, j) == act.get(to_rep(i), to_rep(j));
        }
    }
    return {{"passed", ok}};
}

template <Json (*F)()>
Json guarded() {
    try {
        return F();
    } catch (const std::exception& e) {
        return {{"passed", false}, {"error", e.what()}};
    }
}

}  // namespace

const std::vector<SelfCheck>& self_checks() {
    static const std::vector<SelfCheck> checks{
        {"witt-lyndon", guarded<witt_lyndon>},
        {"group-law", guarded<group_law>},
        {"lcs-ranks", guarded<lcs>},
        {"center-inner", guarded<center_inner>},
        {"nilmanifold-betti", guarded<nilmanifold>},
        {"degree-bound", guarded<degree_bound>},
        {"dynkin-retract", guarded<dynkin_retract>},
        {"ia-ledger", guarded<ia_ledger>},
        {"summand", guarded<summand>},
        {"coinvariants", guarded<coinvariants>},
        {"conjugation", guarded<conjugation>},
    };
    return checks;
}

}  // namespace nilhom::cli
