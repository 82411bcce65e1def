#pragma once

// Chevalley-Eilenberg homology of finite-dimensional multigraded Lie algebras
// over Q, split by torus weight.

#include "nilhom/free_lie.hpp"
#include "nilhom/linalg.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace nilhom::homology {

using linalg::Rational;
using lie::Weight;

/// Sparse coordinate vector over a Lie algebra basis.
using Vector = std::map<std::size_t, Rational>;

/// Torus weight -> multiplicity (only nonzero multiplicities stored).
using WeightCounts = std::map<Weight, std::size_t>;

class GradedLieAlgebra {
public:
    using Brackets = std::map<std::pair<std::size_t, std::size_t>, Vector>;

    GradedLieAlgebra() = default;

    /// Validates the structure: keys (i, j) with i < j < dim, Jacobi on every
    /// basis triple, and additivity of weights and degrees on nonzero brackets.
    /// Throws std::invalid_argument on any violation.
    GradedLieAlgebra(std::vector<std::string> labels, std::vector<Weight> weights,
                     std::vector<std::size_t> degrees, Brackets brackets);

    std::size_t dim() const { return labels_.size(); }
    /// Length of the weight vectors.
    std::size_t weight_rank() const { return weight_rank_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const Weight& weight(std::size_t i) const { return weights_.at(i); }
    std::size_t degree(std::size_t i) const { return degrees_.at(i); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Brackets& structure_constants() const { return brackets_; }

    /// [e_i, e_j] for any i, j.
    Vector bracket_basis(std::size_t i, std::size_t j) const;
    Vector bracket(const Vector& a, const Vector& b) const;
    bool is_abelian() const { return brackets_.empty(); }

private:
    std::vector<std::string> labels_;
    std::vector<Weight> weights_;
    std::vector<std::size_t> degrees_;
    std::size_t weight_rank_ = 0;
    Brackets brackets_;
};

void add_scaled(Vector& acc, const Vector& v, const Rational& s);

/// Free nilpotent Lie algebra of class c on r generators in the Lyndon basis;
/// weights are letter counts and degrees are word lengths.
GradedLieAlgebra free_nilpotent_lie(std::size_t r, std::size_t c);
std::shared_ptr<const GradedLieAlgebra> shared_free_nilpotent_lie(std::size_t r, std::size_t c);

/// Strictly increasing index tuples of size d, lexicographic order.
std::vector<std::vector<std::size_t>> wedge_basis(std::size_t m, std::size_t d);

/// Boundary Lambda^d g -> Lambda^{d-1} g; rows index (d-1)-tuples and columns
/// d-tuples, both in lexicographic order. Requires d <= dim(g).
linalg::RationalMatrix ce_boundary(const GradedLieAlgebra& g, std::size_t d);

/// Checks that the boundary out of Lambda^d composed with the boundary out of
/// Lambda^{d-1} vanishes, one source monomial at a time.
bool boundary_squared_vanishes(const GradedLieAlgebra& g, std::size_t d);

/// Torus-weight multiplicities of Lambda^d g.
WeightCounts wedge_weights(const GradedLieAlgebra& g, std::size_t d);

/// Rank of the boundary out of Lambda^d, per weight block. d may be dim + 1
/// (all ranks zero).
WeightCounts boundary_ranks(const GradedLieAlgebra& g, std::size_t d);

/// Per-weight homology dimensions of H_d(g; Q).
WeightCounts weighted_betti(const GradedLieAlgebra& g, std::size_t d);

std::size_t homology_dimension(const GradedLieAlgebra& g, std::size_t d);

/// b_0 .. b_dim.
std::vector<std::size_t> betti_numbers(const GradedLieAlgebra& g);

/// Betti numbers of the free nilpotent group N_c^r, equivalently of the
/// nilmanifold it is the fundamental group of.
std::vector<std::size_t> group_betti(std::size_t r, std::size_t c);

/// Dimensions of the lower central series g = L_1, L_{k+1} = [g, L_k], listed
/// until (and including) the first zero term.
std::vector<std::size_t> lower_central_series_dims(const GradedLieAlgebra& g);

/// Basis of the center, one vector per free coordinate.
std::vector<Vector> center_basis(const GradedLieAlgebra& g);

std::size_t total(const WeightCounts& counts);

}  // namespace nilhom::homology
