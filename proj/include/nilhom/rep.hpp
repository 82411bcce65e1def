#pragma once

// Polynomial and rational GL_r representations built from a small grammar:
// weights, explicit action matrices, rank-2 Schur decomposition, coinvariants
// and functor-degree estimates.

#include "nilhom/free_lie.hpp"
#include "nilhom/linalg.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nilhom::rep {

using lie::Weight;
using linalg::Integer;
using linalg::IntegerMatrix;
using linalg::RationalMatrix;

class ReprExpr {
public:
    enum class Kind { Std, DualStd, Const, Lie, Wedge, Tensor, Sum, HomStd };

    static ReprExpr standard();
    static ReprExpr dual_standard();
    static ReprExpr constant(std::size_t dimension);
    static ReprExpr lie(std::size_t degree);
    static ReprExpr wedge(std::size_t q, ReprExpr e);
    static ReprExpr tensor(ReprExpr e, ReprExpr f);
    static ReprExpr sum(ReprExpr e, ReprExpr f);
    /// Hom(std, F) = DualStd (x) F
    static ReprExpr hom_std(ReprExpr f);

    Kind kind() const { return kind_; }
    /// Dimension for Const, degree for Lie, exterior power for Wedge.
    std::size_t parameter() const { return param_; }
    const ReprExpr& left() const { return *children_.at(0); }
    const ReprExpr& right() const { return *children_.at(1); }

    /// Canonical text, e.g. "wedge(2, hom(std, lie[2..3]))".
    std::string to_string() const;

    bool operator==(const ReprExpr& other) const;

private:
    ReprExpr(Kind kind, std::size_t param, std::vector<std::shared_ptr<const ReprExpr>> children);

    Kind kind_;
    std::size_t param_;
    std::vector<std::shared_ptr<const ReprExpr>> children_;
};

/// Grammar: std | dual | const(k) | lie(b) | lie[a..c] | wedge(q, E) |
/// tensor(E, F) | sum(E, F) | hom(std, F). Whitespace is ignored. Throws
/// std::invalid_argument with the offending position on malformed input.
ReprExpr parse_expr(std::string_view text);

/// Sum of Lie(b) for b = a..c.
ReprExpr lie_interval(std::size_t a, std::size_t c);

struct WeightModule {
    std::size_t rank = 0;
    std::map<Weight, std::size_t> weights;

    std::size_t dimension() const;
    bool operator==(const WeightModule&) const = default;
};

WeightModule evaluate(const ReprExpr& e, std::size_t r);

/// Torus weight of each basis vector of e(Q^r), in the basis used by
/// action_matrix.
std::vector<Weight> basis_weights(const ReprExpr& e, std::size_t r);

/// Matrix of A acting on e(Q^r). A must be invertible when e involves the
/// dual representation. Wedge bases are lexicographic subsets; tensor bases
/// are lexicographic pairs.
RationalMatrix action_matrix(const ReprExpr& e, const IntegerMatrix& a);

struct DominanceVerdict {
    struct Violation {
        Weight weight;
        std::size_t left;
        std::size_t right;
    };
    bool holds = true;
    bool equal = true;
    std::vector<Violation> violations;
};

/// Whether mult_a(w) <= mult_b(w) for every weight w.
DominanceVerdict weight_dominance_compare(const WeightModule& a, const WeightModule& b);

class NotACharacterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Highest weight (a, b) with a >= b -> multiplicity.
using Gl2Decomposition = std::map<std::pair<int, int>, std::size_t>;

Gl2Decomposition schur_decompose_gl2(const WeightModule& m);
/// Character of a sum of rank-2 irreducibles.
WeightModule gl2_character(const Gl2Decomposition& d);

/// dim of e(Q^r) modulo (g - 1) for g in {E_ij(1), diag(-1, 1, ..., 1)}.
std::size_t coinvariants_dim(const ReprExpr& e, std::size_t r);

struct DegreeEstimate {
    std::size_t degree = 0;
    /// The window holds at least degree + 2 points.
    bool sufficient = false;
};

/// dims[r] for r = 0..R with R >= 1.
DegreeEstimate degree_estimate(const std::vector<Integer>& dims);

/// sum_k (-1)^{n-k} C(n, k) dims[k]; dims must cover 0..n.
Integer cross_effect_dim(const std::vector<Integer>& dims, std::size_t n);

}  // namespace nilhom::rep
