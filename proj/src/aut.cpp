#include "nilhom/aut.hpp"

#include <mutex>
#include <stdexcept>

namespace nilhom::aut {

using homology::Vector;

namespace {

std::vector<Vector> columns_of(const RationalMatrix& m) {
    auto t = m.transpose();
    std::vector<Vector> cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : t.row(j)) cols[j].emplace(i, v);
    return cols;
}

Vector apply_columns(const std::vector<Vector>& cols, const Vector& v) {
    Vector out;
    for (const auto& [k, x] : v) homology::add_scaled(out, cols[k], x);
    return out;
}

RationalMatrix from_columns(std::size_t rows, const std::vector<Vector>& cols) {
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, v] : cols[j]) t.push_back({i, j, v});
    return RationalMatrix::from_triplets(rows, cols.size(), std::move(t));
}

Vector unit(std::size_t i) {
    return Vector{{i, Rational(1)}};
}

void check_square(const GradedLieAlgebra& g, const RationalMatrix& m, const char* who) {
    if (m.rows() != g.dim() || m.cols() != g.dim())
        throw std::invalid_argument(std::string(who) + ": matrix size does not match the algebra");
}

}  // namespace

// ---------------------------------------------------------------------------

LieAutomorphism::LieAutomorphism(std::shared_ptr<const GradedLieAlgebra> algebra, RationalMatrix matrix)
    : algebra_(std::move(algebra)), matrix_(std::move(matrix)) {
    const auto& g = *algebra_;
    check_square(g, matrix_, "LieAutomorphism");
    if (linalg::rank(matrix_) != g.dim()) throw std::invalid_argument("LieAutomorphism: matrix is not invertible");
    auto cols = columns_of(matrix_);
    for (std::size_t j = 0; j < g.dim(); ++j)
        for (const auto& [i, v] : cols[j])
            if (g.degree(i) < g.degree(j))
                throw std::invalid_argument("LieAutomorphism: filtration not preserved at " + g.label(j));
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j)
            if (apply_columns(cols, g.bracket_basis(i, j)) != g.bracket(cols[i], cols[j]))
                throw std::invalid_argument("LieAutomorphism: bracket not preserved on (" + g.label(i) + ", " +
                                            g.label(j) + ")");
}

LieAutomorphism LieAutomorphism::identity(std::shared_ptr<const GradedLieAlgebra> algebra) {
    auto n = algebra->dim();
    return LieAutomorphism(std::move(algebra), RationalMatrix::identity(n));
}

bool LieAutomorphism::is_identity() const {
    return matrix_ == RationalMatrix::identity(matrix_.rows());
}

LieAutomorphism LieAutomorphism::operator*(const LieAutomorphism& other) const {
    if (algebra_->dim() != other.algebra_->dim()) throw std::invalid_argument("LieAutomorphism: algebra mismatch");
    return LieAutomorphism(algebra_, matrix_ * other.matrix_);
}

LieAutomorphism LieAutomorphism::inverse() const {
    return LieAutomorphism(algebra_, *linalg::inverse(matrix_));
}

// ---------------------------------------------------------------------------

DerivationMatrix::DerivationMatrix(std::shared_ptr<const GradedLieAlgebra> algebra, RationalMatrix matrix,
                                   std::optional<std::size_t> degree_shift)
    : algebra_(std::move(algebra)), matrix_(std::move(matrix)), shift_(degree_shift) {
    const auto& g = *algebra_;
    check_square(g, matrix_, "DerivationMatrix");
    auto cols = columns_of(matrix_);
    for (std::size_t j = 0; j < g.dim(); ++j)
        for (const auto& [i, v] : cols[j]) {
            if (g.degree(i) <= g.degree(j))
                throw std::invalid_argument("DerivationMatrix: not strictly filtration-raising at " + g.label(j));
            if (shift_ && g.degree(i) != g.degree(j) + *shift_)
                throw std::invalid_argument("DerivationMatrix: image of " + g.label(j) + " has the wrong degree shift");
        }
    for (std::size_t i = 0; i < g.dim(); ++i)
        for (std::size_t j = i + 1; j < g.dim(); ++j) {
            Vector rhs = g.bracket(cols[i], unit(j));
            homology::add_scaled(rhs, g.bracket(unit(i), cols[j]), 1);
            if (apply_columns(cols, g.bracket_basis(i, j)) != rhs)
                throw std::invalid_argument("DerivationMatrix: Leibniz rule fails on (" + g.label(i) + ", " +
                                            g.label(j) + ")");
        }
}

DerivationMatrix DerivationMatrix::operator+(const DerivationMatrix& other) const {
    return DerivationMatrix(algebra_, matrix_ + other.matrix_, shift_ == other.shift_ ? shift_ : std::nullopt);
}

DerivationMatrix DerivationMatrix::operator-(const DerivationMatrix& other) const {
    return DerivationMatrix(algebra_, matrix_ - other.matrix_, shift_ == other.shift_ ? shift_ : std::nullopt);
}

DerivationMatrix DerivationMatrix::scaled(const Rational& s) const {
    return DerivationMatrix(algebra_, matrix_.scaled(s), shift_);
}

DerivationMatrix DerivationMatrix::commutator(const DerivationMatrix& other) const {
    std::optional<std::size_t> shift;
    if (shift_ && other.shift_) shift = *shift_ + *other.shift_;
    return DerivationMatrix(algebra_, matrix_ * other.matrix_ - other.matrix_ * matrix_, shift);
}

// ---------------------------------------------------------------------------

bool is_unimodular(const IntegerMatrix& a) {
    if (a.rows() != a.cols()) return false;
    auto inv = linalg::inverse(linalg::to_rational(a));
    if (!inv) return false;
    for (const auto& t : inv->triplets())
        if (t.value.get_den() != 1) return false;
    return true;
}

LieAutomorphism automorphism_from_gl(const IntegerMatrix& a, std::size_t c) {
    if (a.rows() != a.cols() || a.rows() == 0)
        throw std::invalid_argument("automorphism_from_gl: matrix must be square and non-empty");
    if (!is_unimodular(a)) throw std::invalid_argument("automorphism_from_gl: matrix is not invertible over Z");
    const std::size_t r = a.rows();
    auto algebra = homology::shared_free_nilpotent_lie(r, c);
    auto basis = lie::hall_basis(r, c);
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t n = 1; n <= c; ++n) {
        auto [lo, hi] = basis->degree_range(n);
        if (lo == hi) continue;
        auto block = lie::induced_map_lie(a, n);
        for (auto& e : block.triplets()) t.push_back({lo + e.row, lo + e.col, std::move(e.value)});
    }
    return LieAutomorphism(algebra, RationalMatrix::from_triplets(basis->size(), basis->size(), std::move(t)));
}

DerivationMatrix derivation_from_images(std::size_t r, std::size_t c,
                                        const std::map<std::size_t, lie::LieElement>& images) {
    auto algebra = homology::shared_free_nilpotent_lie(r, c);
    auto basis = lie::hall_basis(r, c);
    const auto& g = *algebra;
    std::vector<Vector> cols(g.dim());
    for (const auto& [gen, img] : images) {
        if (gen >= r) throw std::invalid_argument("derivation_from_images: generator index out of range");
        if (img.basis()->rank() != r || img.basis()->max_degree() != c)
            throw std::invalid_argument("derivation_from_images: image lives over a different basis");
        for (const auto& [i, v] : img.coords()) {
            if (basis->element(i).degree < 2)
                throw std::invalid_argument("derivation_from_images: images must have no degree-1 part");
            cols[gen].emplace(i, v);
        }
    }
    // Leibniz along the standard factorization; factors precede the element.
    for (std::size_t i = r; i < g.dim(); ++i) {
        const auto& e = basis->element(i);
        Vector v = g.bracket(cols[*e.left], unit(*e.right));
        homology::add_scaled(v, g.bracket(unit(*e.left), cols[*e.right]), 1);
        cols[i] = std::move(v);
    }
    return DerivationMatrix(algebra, from_columns(g.dim(), cols));
}

RationalMatrix exp_nilpotent(const RationalMatrix& n) {
    if (n.rows() != n.cols()) throw std::invalid_argument("exp_nilpotent: matrix is not square");
    const std::size_t m = n.rows();
    RationalMatrix sum = RationalMatrix::identity(m);
    RationalMatrix power = RationalMatrix::identity(m);
    for (std::size_t k = 1; k <= m; ++k) {
        power = (power * n).scaled(Rational(1, k));
        if (power.is_zero()) return sum;
        sum = sum + power;
    }
    if (!(power * n).is_zero()) throw std::invalid_argument("exp_nilpotent: matrix is not nilpotent");
    return sum;
}

RationalMatrix log_unipotent(const RationalMatrix& mat) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("log_unipotent: matrix is not square");
    const std::size_t m = mat.rows();
    RationalMatrix n = mat - RationalMatrix::identity(m);
    RationalMatrix sum(m, m);
    RationalMatrix power = RationalMatrix::identity(m);
    for (std::size_t k = 1; k <= m + 1; ++k) {
        power = power * n;
        if (power.is_zero()) return sum;
        if (k == m + 1) break;
        sum = sum + power.scaled(Rational(k % 2 ? 1 : -1, k));
    }
    throw std::invalid_argument("log_unipotent: matrix is not unipotent");
}

LieAutomorphism exp_derivation(const DerivationMatrix& d) {
    return LieAutomorphism(d.algebra(), exp_nilpotent(d.matrix()));
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> IaAlgebra::index_of(std::size_t generator, std::size_t hall_index) const {
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].generator == generator && pairs[k].hall_index == hall_index) return k;
    return std::nullopt;
}

namespace {

// images of the generators under an IA basis derivation applied to Hall element v
Vector derivation_on(const std::vector<Vector>& derivation_cols, std::size_t v) {
    return derivation_cols[v];
}

}  // namespace

DerivationMatrix ia_basis_derivation(const IaAlgebra& ia, std::size_t k) {
    auto basis = lie::hall_basis(ia.rank, ia.lie_class);
    const auto& p = ia.pairs.at(k);
    return derivation_from_images(ia.rank, ia.lie_class,
                                  {{p.generator, lie::LieElement::basis_element(basis, p.hall_index)}});
}

IaAlgebra ia_lie_algebra(std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) throw std::invalid_argument("ia_lie_algebra: rank and class must be >= 1");
    IaAlgebra ia;
    ia.rank = r;
    ia.lie_class = c;
    if (c == 1) {
        ia.algebra = std::make_shared<const GradedLieAlgebra>(std::vector<std::string>{}, std::vector<lie::Weight>{},
                                                              std::vector<std::size_t>{},
                                                              GradedLieAlgebra::Brackets{});
        return ia;
    }
    auto basis = lie::hall_basis(r, c);
    std::vector<std::string> labels;
    std::vector<lie::Weight> weights;
    std::vector<std::size_t> degrees;
    for (std::size_t n = 2; n <= c; ++n) {
        auto [lo, hi] = basis->degree_range(n);
        for (std::size_t gen = 0; gen < r; ++gen)
            for (std::size_t w = lo; w < hi; ++w) {
                ia.pairs.push_back({gen, w});
                labels.push_back("x" + std::to_string(gen + 1) + "->" + lie::format_word(basis->element(w).word));
                lie::Weight wt = basis->element(w).weight;
                wt[gen] -= 1;
                weights.push_back(std::move(wt));
                degrees.push_back(n - 1);
            }
    }
    // [D_a, D_b](x_k) = delta_{jk} D_a(e_v) - delta_{ik} D_b(e_w) for a = (i, w), b = (j, v).
    std::vector<std::vector<Vector>> cols;
    cols.reserve(ia.pairs.size());
    for (std::size_t k = 0; k < ia.pairs.size(); ++k) cols.push_back(columns_of(ia_basis_derivation(ia, k).matrix()));

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < ia.pairs.size(); ++k) index.emplace(std::make_pair(ia.pairs[k].generator, ia.pairs[k].hall_index), k);

    GradedLieAlgebra::Brackets brackets;
    for (std::size_t a = 0; a < ia.pairs.size(); ++a)
        for (std::size_t b = a + 1; b < ia.pairs.size(); ++b) {
            const auto& pa = ia.pairs[a];
            const auto& pb = ia.pairs[b];
            Vector result;
            // generator pb.generator: D_a applied to e_v
            for (const auto& [u, x] : derivation_on(cols[a], pb.hall_index))
                homology::add_scaled(result, unit(index.at({pb.generator, u})), x);
            for (const auto& [u, x] : derivation_on(cols[b], pa.hall_index))
                homology::add_scaled(result, unit(index.at({pa.generator, u})), -x);
            if (!result.empty()) brackets.emplace(std::make_pair(a, b), std::move(result));
        }
    ia.algebra = std::make_shared<const GradedLieAlgebra>(std::move(labels), std::move(weights), std::move(degrees),
                                                          std::move(brackets));
    return ia;
}

std::shared_ptr<const IaAlgebra> shared_ia_lie_algebra(std::size_t r, std::size_t c) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const IaAlgebra>> memo;
    std::lock_guard lock(mutex);
    auto& slot = memo[{r, c}];
    if (!slot) slot = std::make_shared<const IaAlgebra>(ia_lie_algebra(r, c));
    return slot;
}

IaBetti ia_betti(std::size_t r, std::size_t c, std::size_t q) {
    auto ia = shared_ia_lie_algebra(r, c);
    IaBetti out;
    if (ia->algebra->dim() == 0) {
        if (q == 0) out.weights.emplace(lie::Weight(r, 0), 1);
    } else {
        out.weights = homology::weighted_betti(*ia->algebra, q);
    }
    out.dimension = homology::total(out.weights);
    return out;
}

RationalMatrix gl_conjugation_on_ia(const IntegerMatrix& a, std::size_t r, std::size_t c) {
    if (a.rows() != r || a.cols() != r) throw std::invalid_argument("gl_conjugation_on_ia: matrix must be r x r");
    auto ia = shared_ia_lie_algebra(r, c);
    const std::size_t n = ia->pairs.size();
    if (n == 0) return RationalMatrix(0, 0);
    auto phi = automorphism_from_gl(a, c);
    auto phi_inv = phi.inverse();
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < n; ++k) index.emplace(std::make_pair(ia->pairs[k].generator, ia->pairs[k].hall_index), k);
    std::vector<linalg::Triplet<Rational>> t;
    for (std::size_t k = 0; k < n; ++k) {
        auto conj = phi.matrix() * ia_basis_derivation(*ia, k).matrix() * phi_inv.matrix();
        auto cols = columns_of(conj);
        for (std::size_t gen = 0; gen < r; ++gen)
            for (const auto& [u, x] : cols[gen]) t.push_back({index.at({gen, u}), k, x});
    }
    return RationalMatrix::from_triplets(n, n, std::move(t));
}

}  // namespace nilhom::aut
