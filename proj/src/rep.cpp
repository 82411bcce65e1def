#include "nilhom/rep.hpp"

#include "nilhom/lie_homology.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <numeric>

namespace nilhom::rep {

using linalg::Rational;

ReprExpr::ReprExpr(Kind kind, std::size_t param, std::vector<std::shared_ptr<const ReprExpr>> children)
    : kind_(kind), param_(param), children_(std::move(children)) {}

ReprExpr ReprExpr::standard() {
    return ReprExpr(Kind::Std, 0, {});
}

ReprExpr ReprExpr::dual_standard() {
    return ReprExpr(Kind::DualStd, 0, {});
}

ReprExpr ReprExpr::constant(std::size_t dimension) {
    return ReprExpr(Kind::Const, dimension, {});
}

ReprExpr ReprExpr::lie(std::size_t degree) {
    if (degree == 0) throw std::invalid_argument("lie: degree must be >= 1");
    return ReprExpr(Kind::Lie, degree, {});
}

ReprExpr ReprExpr::wedge(std::size_t q, ReprExpr e) {
    return ReprExpr(Kind::Wedge, q, {std::make_shared<const ReprExpr>(std::move(e))});
}

ReprExpr ReprExpr::tensor(ReprExpr e, ReprExpr f) {
    return ReprExpr(Kind::Tensor, 0,
                    {std::make_shared<const ReprExpr>(std::move(e)), std::make_shared<const ReprExpr>(std::move(f))});
}

ReprExpr ReprExpr::sum(ReprExpr e, ReprExpr f) {
    return ReprExpr(Kind::Sum, 0,
                    {std::make_shared<const ReprExpr>(std::move(e)), std::make_shared<const ReprExpr>(std::move(f))});
}

ReprExpr ReprExpr::hom_std(ReprExpr f) {
    return ReprExpr(Kind::HomStd, 0, {std::make_shared<const ReprExpr>(std::move(f))});
}

bool ReprExpr::operator==(const ReprExpr& other) const {
    if (kind_ != other.kind_ || param_ != other.param_ || children_.size() != other.children_.size()) return false;
    for (std::size_t i = 0; i < children_.size(); ++i)
        if (!(*children_[i] == *other.children_[i])) return false;
    return true;
}

namespace {

// Lie(a) + Lie(a+1) + ... + Lie(c) nested to the right; returns c.
std::optional<std::size_t> lie_chain_end(const ReprExpr& e, std::size_t a) {
    if (e.kind() == ReprExpr::Kind::Lie) return e.parameter() == a ? std::optional(a) : std::nullopt;
    if (e.kind() != ReprExpr::Kind::Sum) return std::nullopt;
    if (e.left().kind() != ReprExpr::Kind::Lie || e.left().parameter() != a) return std::nullopt;
    return lie_chain_end(e.right(), a + 1);
}

}  // namespace

std::string ReprExpr::to_string() const {
    switch (kind_) {
        case Kind::Std: return "std";
        case Kind::DualStd: return "dual";
        case Kind::Const: return "const(" + std::to_string(param_) + ")";
        case Kind::Lie: return "lie(" + std::to_string(param_) + ")";
        case Kind::Wedge: return "wedge(" + std::to_string(param_) + ", " + left().to_string() + ")";
        case Kind::Tensor: return "tensor(" + left().to_string() + ", " + right().to_string() + ")";
        case Kind::Sum:
            if (left().kind() == Kind::Lie)
                if (auto end = lie_chain_end(*this, left().parameter()))
                    return "lie[" + std::to_string(left().parameter()) + ".." + std::to_string(*end) + "]";
            return "sum(" + left().to_string() + ", " + right().to_string() + ")";
        case Kind::HomStd: return "hom(std, " + left().to_string() + ")";
    }
    return {};
}

ReprExpr lie_interval(std::size_t a, std::size_t c) {
    if (a == 0 || a > c) throw std::invalid_argument("lie_interval: need 1 <= a <= c");
    if (a == c) return ReprExpr::lie(a);
    return ReprExpr::sum(ReprExpr::lie(a), lie_interval(a + 1, c));
}

// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ReprExpr parse() {
        auto e = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression: " + what + " at position " + std::to_string(pos_) + " in '" +
                                    std::string(text_) + "'");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(std::string_view token) {
        skip();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    std::string identifier() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t number() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        if (pos_ - start > 6) fail("number too large");
        return std::stoul(std::string(text_.substr(start, pos_ - start)));
    }

    ReprExpr expr() {
        std::size_t start = pos_;
        auto name = identifier();
        if (name == "std") return ReprExpr::standard();
        if (name == "dual") return ReprExpr::dual_standard();
        if (name == "const") {
            expect("(");
            auto k = number();
            expect(")");
            return ReprExpr::constant(k);
        }
        if (name == "lie") {
            if (accept("[")) {
                auto a = number();
                expect("..");
                auto c = number();
                expect("]");
                if (a == 0 || a > c) fail("bad degree interval");
                return lie_interval(a, c);
            }
            expect("(");
            auto b = number();
            expect(")");
            if (b == 0) fail("Lie degree must be >= 1");
            return ReprExpr::lie(b);
        }
        if (name == "wedge") {
            expect("(");
            auto q = number();
            expect(",");
            auto e = expr();
            expect(")");
            return ReprExpr::wedge(q, std::move(e));
        }
        if (name == "tensor" || name == "sum") {
            expect("(");
            auto e = expr();
            expect(",");
            auto f = expr();
            expect(")");
            return name == "sum" ? ReprExpr::sum(std::move(e), std::move(f))
                                 : ReprExpr::tensor(std::move(e), std::move(f));
        }
        if (name == "hom") {
            expect("(");
            expect("std");
            expect(",");
            auto f = expr();
            expect(")");
            return ReprExpr::hom_std(std::move(f));
        }
        pos_ = start;
        skip();
        fail(name.empty() ? "expected an expression" : "unknown constructor '" + name + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

ReprExpr parse_expr(std::string_view text) {
    return Parser(text).parse();
}

// ---------------------------------------------------------------------------

std::size_t WeightModule::dimension() const {
    std::size_t n = 0;
    for (const auto& [w, m] : weights) n += m;
    return n;
}

namespace {

Weight unit_weight(std::size_t r, std::size_t i, int sign) {
    Weight w(r, 0);
    w[i] = sign;
    return w;
}

Weight add(const Weight& a, const Weight& b) {
    Weight w(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] + b[i];
    return w;
}

std::vector<Weight> lie_weights(std::size_t r, std::size_t b) {
    auto basis = lie::hall_basis(r, b);
    auto [lo, hi] = basis->degree_range(b);
    std::vector<Weight> out;
    for (std::size_t i = lo; i < hi; ++i) out.push_back(basis->element(i).weight);
    return out;
}

WeightModule convolve(const WeightModule& a, const WeightModule& b) {
    WeightModule out{a.rank, {}};
    for (const auto& [wa, ma] : a.weights)
        for (const auto& [wb, mb] : b.weights) out.weights[add(wa, wb)] += ma * mb;
    return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t v = 1;
    for (std::size_t i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

WeightModule exterior_power(const WeightModule& m, std::size_t q) {
    // (number of factors so far, weight) -> multiplicity
    std::map<std::pair<std::size_t, Weight>, std::size_t> acc{{{0, Weight(m.rank, 0)}, 1}};
    for (const auto& [w, mult] : m.weights) {
        std::map<std::pair<std::size_t, Weight>, std::size_t> next;
        for (const auto& [key, count] : acc) {
            Weight shifted = key.second;
            for (std::size_t j = 0; j <= mult && key.first + j <= q; ++j) {
                next[{key.first + j, shifted}] += count * binomial(mult, j);
                shifted = add(shifted, w);
            }
        }
        acc = std::move(next);
    }
    WeightModule out{m.rank, {}};
    for (const auto& [key, count] : acc)
        if (key.first == q && count) out.weights[key.second] += count;
    return out;
}

}  // namespace

WeightModule evaluate(const ReprExpr& e, std::size_t r) {
    if (r == 0) throw std::invalid_argument("evaluate: rank must be >= 1");
    using K = ReprExpr::Kind;
    WeightModule out{r, {}};
    switch (e.kind()) {
        case K::Std:
            for (std::size_t i = 0; i < r; ++i) out.weights[unit_weight(r, i, 1)] += 1;
            break;
        case K::DualStd:
            for (std::size_t i = 0; i < r; ++i) out.weights[unit_weight(r, i, -1)] += 1;
            break;
        case K::Const:
            if (e.parameter()) out.weights[Weight(r, 0)] = e.parameter();
            break;
        case K::Lie:
            for (auto& w : lie_weights(r, e.parameter())) out.weights[w] += 1;
            break;
        case K::Sum: {
            out = evaluate(e.left(), r);
            for (const auto& [w, m] : evaluate(e.right(), r).weights) out.weights[w] += m;
            break;
        }
        case K::Tensor: return convolve(evaluate(e.left(), r), evaluate(e.right(), r));
        case K::HomStd: return convolve(evaluate(ReprExpr::dual_standard(), r), evaluate(e.left(), r));
        case K::Wedge: return exterior_power(evaluate(e.left(), r), e.parameter());
    }
    return out;
}

std::vector<Weight> basis_weights(const ReprExpr& e, std::size_t r) {
    if (r == 0) throw std::invalid_argument("basis_weights: rank must be >= 1");
    using K = ReprExpr::Kind;
    std::vector<Weight> out;
    switch (e.kind()) {
        case K::Std:
            for (std::size_t i = 0; i < r; ++i) out.push_back(unit_weight(r, i, 1));
            break;
        case K::DualStd:
            for (std::size_t i = 0; i < r; ++i) out.push_back(unit_weight(r, i, -1));
            break;
        case K::Const: out.assign(e.parameter(), Weight(r, 0)); break;
        case K::Lie: out = lie_weights(r, e.parameter()); break;
        case K::Sum: {
            out = basis_weights(e.left(), r);
            for (auto& w : basis_weights(e.right(), r)) out.push_back(std::move(w));
            break;
        }
        case K::Tensor:
        case K::HomStd: {
            auto a = e.kind() == K::Tensor ? basis_weights(e.left(), r) : basis_weights(ReprExpr::dual_standard(), r);
            auto b = basis_weights(e.kind() == K::Tensor ? e.right() : e.left(), r);
            for (const auto& wa : a)
                for (const auto& wb : b) out.push_back(add(wa, wb));
            break;
        }
        case K::Wedge: {
            auto inner = basis_weights(e.left(), r);
            if (e.parameter() > inner.size()) break;
            for (const auto& subset : homology::wedge_basis(inner.size(), e.parameter())) {
                Weight w(r, 0);
                for (auto i : subset) w = add(w, inner[i]);
                out.push_back(std::move(w));
            }
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

RationalMatrix kronecker(const RationalMatrix& a, const RationalMatrix& b) {
    std::vector<linalg::Triplet<Rational>> t;
    for (const auto& x : a.triplets())
        for (const auto& y : b.triplets())
            t.push_back({x.row * b.rows() + y.row, x.col * b.cols() + y.col, x.value * y.value});
    return RationalMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(t));
}

RationalMatrix direct_sum(const RationalMatrix& a, const RationalMatrix& b) {
    auto t = a.triplets();
    for (const auto& y : b.triplets()) t.push_back({a.rows() + y.row, a.cols() + y.col, y.value});
    return RationalMatrix::from_triplets(a.rows() + b.rows(), a.cols() + b.cols(), std::move(t));
}

RationalMatrix exterior_matrix(const RationalMatrix& m, std::size_t q) {
    const std::size_t n = m.cols();
    if (q > n) return RationalMatrix(0, 0);
    auto subsets = homology::wedge_basis(n, q);
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < subsets.size(); ++k) index.emplace(subsets[k], k);
    auto mt = m.transpose();
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t j = 0; j < subsets.size(); ++j) {
        // wedge of the columns in subsets[j], kept as sorted index sets
        std::map<std::vector<std::size_t>, Rational> acc{{{}, Rational(1)}};
        for (auto col : subsets[j]) {
            std::map<std::vector<std::size_t>, Rational> next;
            for (const auto& [set, coeff] : acc)
                for (const auto& [k, x] : mt.row(col)) {
                    auto pos = std::lower_bound(set.begin(), set.end(), k);
                    if (pos != set.end() && *pos == k) continue;
                    std::size_t above = static_cast<std::size_t>(set.end() - pos);
                    auto grown = set;
                    grown.insert(grown.begin() + (pos - set.begin()), k);
                    Rational v = coeff * x;
                    if (above % 2) v = -v;
                    next[grown] += v;
                }
            acc.clear();
            for (auto& [set, coeff] : next)
                if (coeff != 0) acc.emplace(set, std::move(coeff));
        }
        for (const auto& [set, coeff] : acc) t.push_back({index.at(set), j, coeff});
    }
    return RationalMatrix::from_triplets(subsets.size(), subsets.size(), std::move(t));
}

RationalMatrix dual_matrix(const IntegerMatrix& a) {
    auto inv = linalg::inverse(linalg::to_rational(a));
    if (!inv) throw std::invalid_argument("action_matrix: the dual representation needs an invertible matrix");
    return inv->transpose();
}

}  // namespace

RationalMatrix action_matrix(const ReprExpr& e, const IntegerMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) throw std::invalid_argument("action_matrix: matrix must be square");
    using K = ReprExpr::Kind;
    switch (e.kind()) {
        case K::Std: return linalg::to_rational(a);
        case K::DualStd: return dual_matrix(a);
        case K::Const: return RationalMatrix::identity(e.parameter());
        case K::Lie: return lie::induced_map_lie(a, e.parameter());
        case K::Sum: return direct_sum(action_matrix(e.left(), a), action_matrix(e.right(), a));
        case K::Tensor: return kronecker(action_matrix(e.left(), a), action_matrix(e.right(), a));
        case K::HomStd: return kronecker(dual_matrix(a), action_matrix(e.left(), a));
        case K::Wedge: return exterior_matrix(action_matrix(e.left(), a), e.parameter());
    }
    return {};
}

// ---------------------------------------------------------------------------

DominanceVerdict weight_dominance_compare(const WeightModule& a, const WeightModule& b) {
    if (a.rank != b.rank) throw std::invalid_argument("weight_dominance_compare: rank mismatch");
    DominanceVerdict v;
    std::map<Weight, std::pair<std::size_t, std::size_t>> both;
    for (const auto& [w, m] : a.weights) both[w].first = m;
    for (const auto& [w, m] : b.weights) both[w].second = m;
    for (const auto& [w, m] : both) {
        if (m.first != m.second) v.equal = false;
        if (m.first > m.second) {
            v.holds = false;
            v.violations.push_back({w, m.first, m.second});
        }
    }
    return v;
}

Gl2Decomposition schur_decompose_gl2(const WeightModule& m) {
    if (m.rank != 2) throw std::invalid_argument("schur_decompose_gl2: rank must be 2");
    std::map<Weight, std::size_t> rest = m.weights;
    Gl2Decomposition out;
    while (!rest.empty()) {
        // highest weight: largest a - b, then largest a
        auto best = rest.begin();
        for (auto it = rest.begin(); it != rest.end(); ++it) {
            auto key = [](const Weight& w) { return std::make_pair(w[0] - w[1], w[0]); };
            if (key(it->first) > key(best->first)) best = it;
        }
        const int a = best->first[0], b = best->first[1];
        if (a < b) throw NotACharacterError("schur_decompose_gl2: no dominant weight left");
        const std::size_t mult = best->second;
        for (int k = 0; k <= a - b; ++k) {
            auto it = rest.find(Weight{a - k, b + k});
            if (it == rest.end() || it->second < mult)
                throw NotACharacterError("schur_decompose_gl2: weight multiset is not a character");
            it->second -= mult;
            if (it->second == 0) rest.erase(it);
        }
        out[{a, b}] += mult;
    }
    return out;
}

WeightModule gl2_character(const Gl2Decomposition& d) {
    WeightModule out{2, {}};
    for (const auto& [hw, mult] : d)
        for (int k = 0; k <= hw.first - hw.second; ++k) out.weights[Weight{hw.first - k, hw.second + k}] += mult;
    return out;
}

// ---------------------------------------------------------------------------

std::size_t coinvariants_dim(const ReprExpr& e, std::size_t r) {
    if (r < 2) throw std::invalid_argument("coinvariants_dim: rank must be >= 2");
    std::vector<IntegerMatrix> gens;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            if (i == j) continue;
            auto g = IntegerMatrix::identity(r);
            g.set(i, j, Integer(1));
            gens.push_back(std::move(g));
        }
    auto reflection = IntegerMatrix::identity(r);
    reflection.set(0, 0, Integer(-1));
    gens.push_back(std::move(reflection));

    std::vector<linalg::Triplet<Rational>> t;
    std::size_t n = 0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        auto m = action_matrix(e, gens[k]);
        n = m.rows();
        for (auto& x : (m - RationalMatrix::identity(n)).triplets()) t.push_back({x.row, k * n + x.col, x.value});
    }
    return n - linalg::rank(RationalMatrix::from_triplets(n, n * gens.size(), std::move(t)));
}

DegreeEstimate degree_estimate(const std::vector<Integer>& dims) {
    if (dims.size() < 2) throw std::invalid_argument("degree_estimate: need values for r = 0..R with R >= 1");
    std::vector<Integer> diff = dims;
    for (std::size_t d = 0; d + 1 < dims.size(); ++d) {
        std::vector<Integer> next;
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
        diff = std::move(next);
        if (std::all_of(diff.begin(), diff.end(), [](const Integer& x) { return x == 0; }))
            return {d, dims.size() >= d + 2};
    }
    return {dims.size() - 1, false};
}

Integer cross_effect_dim(const std::vector<Integer>& dims, std::size_t n) {
    if (dims.size() < n + 1) throw std::invalid_argument("cross_effect_dim: dims must cover r = 0..n");
    Integer total = 0, binom = 1;
    for (std::size_t k = 0; k <= n; ++k) {
        if ((n - k) % 2) total -= binom * dims[k];
        else total += binom * dims[k];
        binom = binom * Integer(n - k) / Integer(k + 1);
    }
    return total;
}

}  // namespace nilhom::rep
