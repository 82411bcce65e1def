#pragma once

// Free Lie algebras in the Lyndon basis, the tensor algebra they embed into,
// and the Dynkin retraction back.

#include "nilhom/linalg.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilhom::lie {

using linalg::Rational;

/// Letters are stored 0-based as raw char values; printed 1-based.
using Word = std::string;
using Weight = std::vector<int>;

std::string format_word(const Word& w);
/// Parses "112" style 1-based digit strings. Throws std::invalid_argument.
Word parse_word(const std::string& text, std::size_t rank);

bool is_lyndon(const Word& w);

/// Lyndon words of length 1..max_length over `rank` letters, sorted by
/// (length, lexicographic order). Duval's algorithm.
std::vector<Word> lyndon_words(std::size_t rank, std::size_t max_length);

/// (1/n) sum_{d | n} mu(d) rank^{n/d}. Throws std::invalid_argument for n = 0.
std::size_t witt_dimension(std::size_t rank, std::size_t n);

/// Non-commutative polynomial: sparse map word -> coefficient.
class TensorElement {
public:
    using Terms = std::map<Word, Rational>;

    TensorElement() = default;
    explicit TensorElement(std::size_t rank) : rank_(rank) {}
    TensorElement(std::size_t rank, Terms terms);

    static TensorElement word(std::size_t rank, const Word& w, const Rational& coeff = 1);

    std::size_t rank() const { return rank_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Word& w) const;
    /// Largest word length present; 0 for the zero element.
    std::size_t max_degree() const;
    /// Smallest word length present; 0 for the zero element.
    std::size_t min_degree() const;
    bool is_homogeneous() const;

    TensorElement homogeneous_part(std::size_t n) const;
    TensorElement truncated(std::size_t max_degree) const;

    void add(const Word& w, const Rational& c);
    TensorElement& operator+=(const TensorElement& other);
    TensorElement& operator-=(const TensorElement& other);
    TensorElement operator+(const TensorElement& other) const;
    TensorElement operator-(const TensorElement& other) const;
    TensorElement operator-() const;
    TensorElement scaled(const Rational& s) const;

    /// Concatenation product, dropping words longer than max_degree.
    TensorElement multiply(const TensorElement& other, std::size_t max_degree) const;
    /// a b - b a, truncated.
    TensorElement commutator(const TensorElement& other, std::size_t max_degree) const;

    bool operator==(const TensorElement& other) const = default;

private:
    void check_rank(const TensorElement& other) const;

    std::size_t rank_ = 0;
    Terms terms_;
};

class NotPrimitiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lyndon basis of the free Lie algebra on `rank` letters, degrees 1..max_degree.
class HallBasis {
public:
    struct Element {
        Word word;
        std::size_t degree;
        Weight weight;  // letter counts
        // standard factorization indices; unset for letters
        std::optional<std::size_t> left;
        std::optional<std::size_t> right;
        TensorElement expansion;
    };

    HallBasis(std::size_t rank, std::size_t max_degree);

    std::size_t rank() const { return rank_; }
    std::size_t max_degree() const { return max_degree_; }
    std::size_t size() const { return elements_.size(); }
    const Element& element(std::size_t i) const { return elements_.at(i); }
    const std::vector<Element>& elements() const { return elements_; }

    /// Half-open index range of the degree-n elements.
    std::pair<std::size_t, std::size_t> degree_range(std::size_t n) const;
    std::size_t degree_size(std::size_t n) const;
    std::optional<std::size_t> index_of(const Word& w) const;

    /// Offsets into elements(): offsets[n-1] is the first element of degree n;
    /// the final entry equals size().
    std::vector<std::size_t> degree_offsets() const { return offsets_; }

private:
    std::size_t rank_;
    std::size_t max_degree_;
    std::vector<Element> elements_;
    std::vector<std::size_t> offsets_;
    std::map<Word, std::size_t> index_;
};

/// Shared, memoized basis for (rank, max_degree). Requires rank, max_degree >= 1.
std::shared_ptr<const HallBasis> hall_basis(std::size_t rank, std::size_t max_degree);

/// Element of a truncated free Lie algebra in Hall coordinates.
class LieElement {
public:
    using Coords = std::map<std::size_t, Rational>;

    LieElement() = default;
    explicit LieElement(std::shared_ptr<const HallBasis> basis) : basis_(std::move(basis)) {}
    LieElement(std::shared_ptr<const HallBasis> basis, Coords coords);

    static LieElement basis_element(std::shared_ptr<const HallBasis> basis, std::size_t i,
                                    const Rational& coeff = 1);
    /// Generator x_{letter+1}.
    static LieElement generator(std::shared_ptr<const HallBasis> basis, std::size_t letter);

    const std::shared_ptr<const HallBasis>& basis() const { return basis_; }
    const Coords& coords() const { return coords_; }
    Rational coordinate(std::size_t i) const;
    bool is_zero() const { return coords_.empty(); }

    /// Dense coordinate vector of length basis().size().
    linalg::RationalVector dense() const;
    static LieElement from_dense(std::shared_ptr<const HallBasis> basis,
                                 const linalg::RationalVector& v);

    LieElement homogeneous_part(std::size_t n) const;

    LieElement operator+(const LieElement& other) const;
    LieElement operator-(const LieElement& other) const;
    LieElement operator-() const;
    LieElement scaled(const Rational& s) const;

    bool operator==(const LieElement& other) const;

private:
    void check_basis(const LieElement& other) const;

    std::shared_ptr<const HallBasis> basis_;
    Coords coords_;
};

TensorElement expand_to_tensor(const LieElement& a);

/// Inverse of expand_to_tensor on the Lie subspace. Throws NotPrimitiveError
/// when some homogeneous component is not a Lie polynomial, and
/// std::invalid_argument when a word exceeds the basis degree.
LieElement tensor_to_hall(const TensorElement& t, std::shared_ptr<const HallBasis> basis);

/// Lie bracket, components above the basis degree truncated.
LieElement bracket(const LieElement& a, const LieElement& b);

/// Left-normed bracketing w_1...w_b -> [[..[w_1,w_2],..],w_b] in the tensor algebra.
TensorElement left_normed_bracketing(const TensorElement& t);

/// Dynkin retraction: left-normed bracketing divided by the degree. Input
/// must be homogeneous of degree >= 1 and <= basis degree.
LieElement dynkin(const TensorElement& t, std::shared_ptr<const HallBasis> basis);

/// Matrix of Lie^b(A): Lie^b(Q^r) -> Lie^b(Q^s) in Hall coordinates, where
/// A has s rows and r columns.
linalg::RationalMatrix induced_map_lie(const linalg::IntegerMatrix& a, std::size_t degree);
linalg::RationalMatrix induced_map_lie(const linalg::RationalMatrix& a, std::size_t degree);

}  // namespace nilhom::lie
