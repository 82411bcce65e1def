#pragma once

// Arithmetic in the Malcev completion of the free nilpotent group N_c^r, in
// first-kind (logarithmic) coordinates over the Hall basis.

#include "nilhom/aut.hpp"
#include "nilhom/free_lie.hpp"

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace nilhom::nil {

using linalg::Rational;

class MalcevElement {
public:
    using Coords = lie::LieElement::Coords;

    explicit MalcevElement(std::shared_ptr<const lie::HallBasis> basis) : log_(std::move(basis)) {}
    MalcevElement(std::shared_ptr<const lie::HallBasis> basis, Coords coords);
    explicit MalcevElement(lie::LieElement log) : log_(std::move(log)) {}

    static MalcevElement generator(std::shared_ptr<const lie::HallBasis> basis, std::size_t letter);

    const std::shared_ptr<const lie::HallBasis>& basis() const { return log_.basis(); }
    std::size_t rank() const { return basis()->rank(); }
    std::size_t lie_class() const { return basis()->max_degree(); }
    const lie::LieElement& log() const { return log_; }
    const Coords& coords() const { return log_.coords(); }
    Rational coordinate(std::size_t i) const { return log_.coordinate(i); }
    bool is_identity() const { return log_.is_zero(); }

    /// (Hall word, coefficient) pairs in basis order.
    std::vector<std::pair<lie::Word, Rational>> terms() const;

    bool operator==(const MalcevElement& other) const { return log_ == other.log_; }

private:
    lie::LieElement log_;
};

/// log(exp(u) exp(v)) truncated at the class, via the tensor algebra and the
/// Dynkin projection. Throws std::invalid_argument on a basis mismatch.
MalcevElement multiply(const MalcevElement& u, const MalcevElement& v);
MalcevElement inverse(const MalcevElement& u);
/// u v u^{-1} v^{-1}
MalcevElement group_commutator(const MalcevElement& u, const MalcevElement& v);

/// Ranks of Gamma_n / Gamma_{n+1} for n = 1..c from iterated group
/// commutators of the generators.
std::vector<std::size_t> lcs_ranks(std::size_t r, std::size_t c);

/// Basis of the elements commuting with every generator.
std::vector<MalcevElement> center_basis(std::size_t r, std::size_t c);

/// Conjugation h -> g h g^{-1} as the automorphism exp(ad g).
aut::LieAutomorphism inner_action(const MalcevElement& g);

/// Basis of {g : inner_action(g) = identity}.
std::vector<MalcevElement> inner_kernel_basis(std::size_t r, std::size_t c);

}  // namespace nilhom::nil
