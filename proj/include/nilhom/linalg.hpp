#pragma once

// Exact sparse linear algebra over Q and Z.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace nilhom::linalg {

using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;

template <class T>
struct Triplet {
    std::size_t row;
    std::size_t col;
    T value;
};

/// Row-compressed sparse matrix. Each row is sorted by column and never
/// stores an explicit zero.
template <class T>
class SparseMatrix {
public:
    using Entry = std::pair<std::size_t, T>;
    using Row = std::vector<Entry>;

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);

    /// Duplicate coordinates are summed; entries that end up zero are dropped.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet<T>> triplets);
    static SparseMatrix from_dense(const std::vector<std::vector<T>>& dense);
    static SparseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;

    T get(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, const T& value);
    std::span<const Entry> row(std::size_t i) const { return data_.at(i); }

    /// Replaces row i; the row must already be canonical (sorted, no zeros).
    void set_row(std::size_t i, Row row);

    SparseMatrix transpose() const;
    std::vector<std::vector<T>> to_dense() const;
    std::vector<T> column(std::size_t j) const;
    bool is_zero() const { return nnz() == 0; }

    /// (row, col, value) in row-major order.
    std::vector<Triplet<T>> triplets() const;

    SparseMatrix operator*(const SparseMatrix& other) const;
    SparseMatrix operator+(const SparseMatrix& other) const;
    SparseMatrix operator-(const SparseMatrix& other) const;
    SparseMatrix operator-() const;
    SparseMatrix scaled(const T& s) const;
    std::vector<T> apply(std::span<const T> v) const;

    bool operator==(const SparseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Row> data_;
};

using RationalMatrix = SparseMatrix<Rational>;
using IntegerMatrix = SparseMatrix<Integer>;

RationalMatrix to_rational(const IntegerMatrix& m);

/// Rank over Q by sparse fraction-free elimination with a Markowitz-style
/// pivot rule (minimum fill, ties broken by lowest row then lowest column).
std::size_t rank(const RationalMatrix& m);
std::size_t rank(const IntegerMatrix& m);

/// Basis of {v : m v = 0}, one vector per free column of the reduced row
/// echelon form, in increasing free-column order.
std::vector<RationalVector> nullspace_basis(const RationalMatrix& m);

/// Some x with m x = b, or nullopt when the system is inconsistent.
/// Free variables are set to zero. Throws std::invalid_argument when
/// b.size() != m.rows().
std::optional<RationalVector> solve(const RationalMatrix& m, std::span<const Rational> b);

std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Elementary divisors d_1 | d_2 | ... of length min(rows, cols), zeros last.
std::vector<Integer> smith_normal_form(const IntegerMatrix& m);

/// Incremental row-echelon accumulator: feeds vectors one at a time and keeps
/// a basis of their span, reduced against earlier pivots.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    /// Returns true when v was independent of the vectors added so far.
    bool add(std::span<const Rational> v);
    bool add_sparse(std::vector<std::pair<std::size_t, Rational>> v);
    bool contains(std::span<const Rational> v) const;

    std::size_t rank() const { return pivots_.size(); }
    std::size_t dim() const { return dim_; }

private:
    using SparseRow = std::vector<std::pair<std::size_t, Rational>>;
    SparseRow reduce(SparseRow v) const;

    std::size_t dim_;
    std::map<std::size_t, SparseRow> pivots_;  // pivot column -> row with unit pivot
};

}  // namespace nilhom::linalg
