#pragma once

// Automorphisms and derivations of free nilpotent Lie algebras; the IA
// derivation algebras and their conjugation by GL_r(Z).

#include "nilhom/free_lie.hpp"
#include "nilhom/lie_homology.hpp"
#include "nilhom/linalg.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace nilhom::aut {

using homology::GradedLieAlgebra;
using linalg::IntegerMatrix;
using linalg::Rational;
using linalg::RationalMatrix;

/// Filtration-preserving automorphism of a graded Lie algebra. Column j of the
/// matrix is the image of basis vector j. The constructor checks
/// invertibility, bracket preservation and the filtration condition, and
/// throws std::invalid_argument when one fails.
class LieAutomorphism {
public:
    LieAutomorphism(std::shared_ptr<const GradedLieAlgebra> algebra, RationalMatrix matrix);

    static LieAutomorphism identity(std::shared_ptr<const GradedLieAlgebra> algebra);

    const std::shared_ptr<const GradedLieAlgebra>& algebra() const { return algebra_; }
    const RationalMatrix& matrix() const { return matrix_; }
    bool is_identity() const;

    LieAutomorphism operator*(const LieAutomorphism& other) const;
    LieAutomorphism inverse() const;
    bool operator==(const LieAutomorphism& other) const { return matrix_ == other.matrix_; }

private:
    std::shared_ptr<const GradedLieAlgebra> algebra_;
    RationalMatrix matrix_;
};

/// Derivation that strictly raises the filtration degree; validated like
/// LieAutomorphism (Leibniz rule on every basis pair).
class DerivationMatrix {
public:
    DerivationMatrix(std::shared_ptr<const GradedLieAlgebra> algebra, RationalMatrix matrix,
                     std::optional<std::size_t> degree_shift = std::nullopt);

    const std::shared_ptr<const GradedLieAlgebra>& algebra() const { return algebra_; }
    const RationalMatrix& matrix() const { return matrix_; }
    std::optional<std::size_t> degree_shift() const { return shift_; }

    DerivationMatrix operator+(const DerivationMatrix& other) const;
    DerivationMatrix operator-(const DerivationMatrix& other) const;
    DerivationMatrix scaled(const Rational& s) const;
    /// D E - E D
    DerivationMatrix commutator(const DerivationMatrix& other) const;
    bool operator==(const DerivationMatrix& other) const { return matrix_ == other.matrix_; }

private:
    std::shared_ptr<const GradedLieAlgebra> algebra_;
    RationalMatrix matrix_;
    std::optional<std::size_t> shift_;
};

/// Graded automorphism of the free nilpotent Lie algebra of class c induced
/// by a unimodular r x r matrix; the degree-n block is Lie^n(A).
LieAutomorphism automorphism_from_gl(const IntegerMatrix& a, std::size_t c);

/// The derivation of the free nilpotent algebra (r, c) sending generator i to
/// images[i] (absent generators go to zero). Images must live in degrees 2..c.
DerivationMatrix derivation_from_images(std::size_t r, std::size_t c,
                                        const std::map<std::size_t, lie::LieElement>& images);

/// Finite exponential series of a nilpotent matrix; throws
/// std::invalid_argument if the matrix is not nilpotent.
RationalMatrix exp_nilpotent(const RationalMatrix& n);
/// log(I + N) for nilpotent N = m - I; throws if m - I is not nilpotent.
RationalMatrix log_unipotent(const RationalMatrix& m);

LieAutomorphism exp_derivation(const DerivationMatrix& d);

/// Lie algebra of strictly filtration-raising derivations of the free
/// nilpotent algebra of rank r and class c. Basis vector k is the derivation
/// x_{generator+1} -> Hall element `hall_index`, all other generators -> 0.
struct IaAlgebra {
    std::size_t rank = 0;
    std::size_t lie_class = 0;
    struct BasisPair {
        std::size_t generator;
        std::size_t hall_index;
    };
    std::vector<BasisPair> pairs;  // ordered by (degree of the Hall element, generator, Hall index)
    std::shared_ptr<const GradedLieAlgebra> algebra;

    std::optional<std::size_t> index_of(std::size_t generator, std::size_t hall_index) const;
};

/// c = 1 gives the zero algebra.
IaAlgebra ia_lie_algebra(std::size_t r, std::size_t c);
std::shared_ptr<const IaAlgebra> shared_ia_lie_algebra(std::size_t r, std::size_t c);

/// The derivation matrix on the free nilpotent algebra for IA basis vector k.
DerivationMatrix ia_basis_derivation(const IaAlgebra& ia, std::size_t k);

struct IaBetti {
    std::size_t dimension = 0;
    homology::WeightCounts weights;
};

/// Homology of the IA derivation algebra in degree q, split by torus weight.
IaBetti ia_betti(std::size_t r, std::size_t c, std::size_t q);

/// Matrix of D -> Phi D Phi^{-1} on the IA basis, Phi = automorphism_from_gl(A, c).
RationalMatrix gl_conjugation_on_ia(const IntegerMatrix& a, std::size_t r, std::size_t c);

/// Checks det(A) = +-1 for an integer square matrix.
bool is_unimodular(const IntegerMatrix& a);

}  // namespace nilhom::aut
