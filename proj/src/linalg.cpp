#include "nilhom/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <tuple>

namespace nilhom::linalg {

// ---------------------------------------------------------------------------
// SparseMatrix

template <class T>
SparseMatrix<T>::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

template <class T>
SparseMatrix<T> SparseMatrix<T>::from_triplets(std::size_t rows, std::size_t cols,
                                               std::vector<Triplet<T>> triplets) {
    SparseMatrix m(rows, cols);
    std::sort(triplets.begin(), triplets.end(), [](const auto& a, const auto& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
    for (std::size_t k = 0; k < triplets.size();) {
        auto& t = triplets[k];
        if (t.row >= rows || t.col >= cols)
            throw std::out_of_range("SparseMatrix::from_triplets: index out of range");
        T sum = t.value;
        std::size_t l = k + 1;
        while (l < triplets.size() && triplets[l].row == t.row && triplets[l].col == t.col) {
            sum += triplets[l].value;
            ++l;
        }
        if (sum != 0) m.data_[t.row].emplace_back(t.col, std::move(sum));
        k = l;
    }
    return m;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::from_dense(const std::vector<std::vector<T>>& dense) {
    std::size_t cols = dense.empty() ? 0 : dense.front().size();
    SparseMatrix m(dense.size(), cols);
    for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i].size() != cols)
            throw std::invalid_argument("SparseMatrix::from_dense: ragged rows");
        for (std::size_t j = 0; j < cols; ++j)
            if (dense[i][j] != 0) m.data_[i].emplace_back(j, dense[i][j]);
    }
    return m;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].emplace_back(i, T(1));
    return m;
}

template <class T>
std::size_t SparseMatrix<T>::nnz() const {
    std::size_t n = 0;
    for (const auto& r : data_) n += r.size();
    return n;
}

template <class T>
T SparseMatrix<T>::get(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseMatrix::get");
    const auto& r = data_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::size_t c) { return e.first < c; });
    if (it != r.end() && it->first == j) return it->second;
    return T(0);
}

template <class T>
void SparseMatrix<T>::set(std::size_t i, std::size_t j, const T& value) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseMatrix::set");
    auto& r = data_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j,
                               [](const Entry& e, std::size_t c) { return e.first < c; });
    bool present = it != r.end() && it->first == j;
    if (value == 0) {
        if (present) r.erase(it);
    } else if (present) {
        it->second = value;
    } else {
        r.insert(it, Entry(j, value));
    }
}

template <class T>
void SparseMatrix<T>::set_row(std::size_t i, Row row) {
    if (i >= rows_) throw std::out_of_range("SparseMatrix::set_row");
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k].first >= cols_ || row[k].second == 0 ||
            (k > 0 && row[k - 1].first >= row[k].first))
            throw std::invalid_argument("SparseMatrix::set_row: row not canonical");
    }
    data_[i] = std::move(row);
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::transpose() const {
    SparseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i]) t.data_[j].emplace_back(i, v);
    return t;
}

template <class T>
std::vector<std::vector<T>> SparseMatrix<T>::to_dense() const {
    std::vector<std::vector<T>> d(rows_, std::vector<T>(cols_, T(0)));
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i]) d[i][j] = v;
    return d;
}

template <class T>
std::vector<T> SparseMatrix<T>::column(std::size_t j) const {
    std::vector<T> c(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i) c[i] = get(i, j);
    return c;
}

template <class T>
std::vector<Triplet<T>> SparseMatrix<T>::triplets() const {
    std::vector<Triplet<T>> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, v] : data_[i]) out.push_back({i, j, v});
    return out;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::operator*(const SparseMatrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("SparseMatrix::operator*: shape mismatch");
    SparseMatrix out(rows_, other.cols_);
    std::vector<T> acc(other.cols_, T(0));
    std::vector<char> touched(other.cols_, 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < rows_; ++i) {
        cols.clear();
        for (const auto& [k, a] : data_[i]) {
            for (const auto& [j, b] : other.data_[k]) {
                if (!touched[j]) {
                    touched[j] = 1;
                    cols.push_back(j);
                }
                acc[j] += a * b;
            }
        }
        std::sort(cols.begin(), cols.end());
        for (std::size_t j : cols) {
            if (acc[j] != 0) out.data_[i].emplace_back(j, acc[j]);
            acc[j] = 0;
            touched[j] = 0;
        }
    }
    return out;
}

namespace {

template <class T>
typename SparseMatrix<T>::Row merge_rows(const typename SparseMatrix<T>::Row& a,
                                         const typename SparseMatrix<T>::Row& b, int sign) {
    typename SparseMatrix<T>::Row out;
    out.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
            out.push_back(a[p++]);
        } else if (p == a.size() || b[q].first < a[p].first) {
            out.emplace_back(b[q].first, sign > 0 ? T(b[q].second) : T(-b[q].second));
            ++q;
        } else {
            T s = sign > 0 ? T(a[p].second + b[q].second) : T(a[p].second - b[q].second);
            if (s != 0) out.emplace_back(a[p].first, std::move(s));
            ++p;
            ++q;
        }
    }
    return out;
}

}  // namespace

template <class T>
SparseMatrix<T> SparseMatrix<T>::operator+(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SparseMatrix::operator+: shape mismatch");
    SparseMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = merge_rows<T>(data_[i], other.data_[i], 1);
    return out;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::operator-(const SparseMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("SparseMatrix::operator-: shape mismatch");
    SparseMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) out.data_[i] = merge_rows<T>(data_[i], other.data_[i], -1);
    return out;
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::operator-() const {
    return scaled(T(-1));
}

template <class T>
SparseMatrix<T> SparseMatrix<T>::scaled(const T& s) const {
    SparseMatrix out(rows_, cols_);
    if (s == 0) return out;
    for (std::size_t i = 0; i < rows_; ++i) {
        out.data_[i].reserve(data_[i].size());
        for (const auto& [j, v] : data_[i]) out.data_[i].emplace_back(j, T(v * s));
    }
    return out;
}

template <class T>
std::vector<T> SparseMatrix<T>::apply(std::span<const T> v) const {
    if (v.size() != cols_) throw std::invalid_argument("SparseMatrix::apply: length mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (const auto& [j, a] : data_[i]) out[i] += a * v[j];
    return out;
}

template class SparseMatrix<Rational>;
template class SparseMatrix<Integer>;

RationalMatrix to_rational(const IntegerMatrix& m) {
    RationalMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        RationalMatrix::Row row;
        row.reserve(m.row(i).size());
        for (const auto& [j, v] : m.row(i)) row.emplace_back(j, Rational(v));
        out.set_row(i, std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rank: sparse fraction-free elimination

namespace {

using IntRow = std::vector<std::pair<std::size_t, Integer>>;

void remove_content(IntRow& row) {
    if (row.empty()) return;
    Integer g = abs(row.front().second);
    for (std::size_t k = 1; k < row.size() && g != 1; ++k) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), row[k].second.get_mpz_t());
    if (g != 1)
        for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// fa * a - fb * b
IntRow combine(const IntRow& a, const Integer& fa, const IntRow& b, const Integer& fb) {
    IntRow out;
    out.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    Integer t;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
            out.emplace_back(a[p].first, fa * a[p].second);
            ++p;
        } else if (p == a.size() || b[q].first < a[p].first) {
            out.emplace_back(b[q].first, -fb * b[q].second);
            ++q;
        } else {
            t = fa * a[p].second - fb * b[q].second;
            if (t != 0) out.emplace_back(a[p].first, t);
            ++p;
            ++q;
        }
    }
    return out;
}

const Integer* find_entry(const IntRow& row, std::size_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != row.end() && it->first == col) return &it->second;
    return nullptr;
}

class SparseEliminator {
public:
    SparseEliminator(std::vector<IntRow> rows, std::size_t ncols)
        : rows_(std::move(rows)), col_rows_(ncols), col_count_(ncols, 0), live_(rows_.size(), 1) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            remove_content(rows_[i]);
            for (const auto& e : rows_[i]) {
                col_rows_[e.first].push_back(static_cast<std::uint32_t>(i));
                ++col_count_[e.first];
            }
        }
        for (std::size_t c = 0; c < ncols; ++c)
            if (col_count_[c] > 0) queue_.emplace(col_count_[c], c);
    }

    std::size_t run() {
        std::size_t rank = 0;
        while (!queue_.empty()) {
            auto [row, col] = choose_pivot();
            ++rank;
            eliminate(row, col);
        }
        return rank;
    }

private:
    static constexpr std::size_t kCandidateColumns = 8;

    void adjust_count(std::size_t col, long delta) {
        if (col_count_[col] > 0) queue_.erase({col_count_[col], col});
        col_count_[col] = static_cast<std::size_t>(static_cast<long>(col_count_[col]) + delta);
        if (col_count_[col] > 0) queue_.emplace(col_count_[col], col);
    }

    // Drops stale and duplicate row references for a column.
    std::vector<std::uint32_t>& live_rows(std::size_t col) {
        auto& list = col_rows_[col];
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        std::erase_if(list, [&](std::uint32_t i) { return !live_[i] || find_entry(rows_[i], col) == nullptr; });
        return list;
    }

    std::pair<std::size_t, std::size_t> choose_pivot() {
        std::size_t min_count = queue_.begin()->first;
        std::tuple<std::size_t, std::size_t, std::size_t> best{SIZE_MAX, SIZE_MAX, SIZE_MAX};
        std::size_t seen = 0;
        std::vector<std::size_t> candidates;
        for (auto it = queue_.begin(); it != queue_.end() && seen < kCandidateColumns; ++it, ++seen) {
            // a singleton column costs nothing; no need to look further
            if (min_count == 1 && it->first > 1) break;
            candidates.push_back(it->second);
        }
        for (std::size_t col : candidates) {
            std::size_t cc = col_count_[col];
            for (std::uint32_t i : live_rows(col)) {
                std::size_t cost = (rows_[i].size() - 1) * (cc - 1);
                std::tuple<std::size_t, std::size_t, std::size_t> cand{cost, i, col};
                if (cand < best) best = cand;
            }
        }
        return {std::get<1>(best), std::get<2>(best)};
    }

    void eliminate(std::size_t k, std::size_t p) {
        live_[k] = 0;
        for (const auto& e : rows_[k]) adjust_count(e.first, -1);
        const Integer pivot = *find_entry(rows_[k], p);
        std::vector<std::uint32_t> targets = live_rows(p);
        Integer g, fa, fb;
        for (std::uint32_t i : targets) {
            const Integer a = *find_entry(rows_[i], p);
            mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), pivot.get_mpz_t());
            fa = pivot / g;
            fb = a / g;
            IntRow updated = combine(rows_[i], fa, rows_[k], fb);
            remove_content(updated);
            update_counts(i, rows_[i], updated);
            rows_[i] = std::move(updated);
        }
        col_rows_[p].clear();
        IntRow().swap(rows_[k]);
    }

    void update_counts(std::size_t i, const IntRow& before, const IntRow& after) {
        std::size_t p = 0, q = 0;
        while (p < before.size() || q < after.size()) {
            if (q == after.size() || (p < before.size() && before[p].first < after[q].first)) {
                adjust_count(before[p].first, -1);
                ++p;
            } else if (p == before.size() || after[q].first < before[p].first) {
                adjust_count(after[q].first, +1);
                col_rows_[after[q].first].push_back(static_cast<std::uint32_t>(i));
                ++q;
            } else {
                ++p;
                ++q;
            }
        }
    }

    std::vector<IntRow> rows_;
    std::vector<std::vector<std::uint32_t>> col_rows_;
    std::vector<std::size_t> col_count_;
    std::vector<char> live_;
    std::set<std::pair<std::size_t, std::size_t>> queue_;  // (count, column)
};

}  // namespace

std::size_t rank(const IntegerMatrix& m) {
    std::vector<IntRow> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        if (!r.empty()) rows.emplace_back(r.begin(), r.end());
    }
    return SparseEliminator(std::move(rows), m.cols()).run();
}

std::size_t rank(const RationalMatrix& m) {
    std::vector<IntRow> rows;
    rows.reserve(m.rows());
    Integer l;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        if (r.empty()) continue;
        l = 1;
        for (const auto& [j, v] : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
        IntRow row;
        row.reserve(r.size());
        for (const auto& [j, v] : r) row.emplace_back(j, Integer(v.get_num() * (l / v.get_den())));
        rows.push_back(std::move(row));
    }
    return SparseEliminator(std::move(rows), m.cols()).run();
}

// ---------------------------------------------------------------------------
// Reduced row echelon form over Q

namespace {

using QRow = std::vector<std::pair<std::size_t, Rational>>;

// a - s * b
QRow axpy(const QRow& a, const Rational& s, const QRow& b) {
    QRow out;
    out.reserve(a.size() + b.size());
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        if (q == b.size() || (p < a.size() && a[p].first < b[q].first)) {
            out.push_back(a[p++]);
        } else if (p == a.size() || b[q].first < a[p].first) {
            out.emplace_back(b[q].first, -s * b[q].second);
            ++q;
        } else {
            Rational t = a[p].second - s * b[q].second;
            if (t != 0) out.emplace_back(a[p].first, std::move(t));
            ++p;
            ++q;
        }
    }
    return out;
}

const Rational* find_q(const QRow& row, std::size_t col) {
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::size_t c) { return e.first < c; });
    if (it != row.end() && it->first == col) return &it->second;
    return nullptr;
}

// Pivot column -> fully reduced row with unit pivot.
std::map<std::size_t, QRow> rref(const std::vector<QRow>& rows) {
    std::map<std::size_t, QRow> piv;
    for (const auto& input : rows) {
        QRow v = input;
        while (!v.empty()) {
            auto it = piv.find(v.front().first);
            if (it == piv.end()) break;
            Rational s = v.front().second;
            v = axpy(v, s, it->second);
        }
        // reduce the tail too, so later back-substitution stays short
        for (std::size_t k = 1; k < v.size();) {
            auto it = piv.find(v[k].first);
            if (it == piv.end()) {
                ++k;
                continue;
            }
            Rational s = v[k].second;
            v = axpy(v, s, it->second);
        }
        if (v.empty()) continue;
        Rational lead = v.front().second;
        for (auto& e : v) e.second /= lead;
        std::size_t pc = v.front().first;
        // eliminate the new pivot column from existing rows
        for (auto& [c, row] : piv) {
            if (const Rational* x = find_q(row, pc)) {
                Rational s = *x;
                row = axpy(row, s, v);
            }
        }
        piv.emplace(pc, std::move(v));
    }
    return piv;
}

std::vector<QRow> rows_of(const RationalMatrix& m) {
    std::vector<QRow> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.emplace_back(r.begin(), r.end());
    }
    return rows;
}

}  // namespace

std::vector<RationalVector> nullspace_basis(const RationalMatrix& m) {
    auto piv = rref(rows_of(m));
    std::vector<RationalVector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (piv.count(f)) continue;
        RationalVector v(m.cols(), Rational(0));
        v[f] = 1;
        for (const auto& [pc, row] : piv)
            if (const Rational* x = find_q(row, f)) v[pc] = -*x;
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RationalVector> solve(const RationalMatrix& m, std::span<const Rational> b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side length does not match rows");
    auto rows = rows_of(m);
    const std::size_t aug = m.cols();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (b[i] != 0) rows[i].emplace_back(aug, b[i]);
    auto piv = rref(rows);
    if (piv.count(aug)) return std::nullopt;
    RationalVector x(m.cols(), Rational(0));
    for (const auto& [pc, row] : piv)
        if (const Rational* v = find_q(row, aug)) x[pc] = *v;
    return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix is not square");
    const std::size_t n = m.rows();
    auto rows = rows_of(m);
    for (std::size_t i = 0; i < n; ++i) rows[i].emplace_back(n + i, Rational(1));
    auto piv = rref(rows);
    std::vector<Triplet<Rational>> t;
    for (std::size_t i = 0; i < n; ++i) {
        auto it = piv.find(i);
        if (it == piv.end()) return std::nullopt;
        for (const auto& [c, v] : it->second)
            if (c >= n) t.push_back({i, c - n, v});
    }
    return RationalMatrix::from_triplets(n, n, std::move(t));
}

// ---------------------------------------------------------------------------
// Smith normal form (dense; desk-scale inputs)

std::vector<Integer> smith_normal_form(const IntegerMatrix& input) {
    auto a = input.to_dense();
    const std::size_t rows = input.rows(), cols = input.cols();
    const std::size_t n = std::min(rows, cols);
    std::vector<Integer> diag;
    diag.reserve(n);

    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (a[i][j] != 0 && (pi == rows || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == rows) {
                diag.resize(n, Integer(0));
                return diag;
            }
            std::swap(a[t], a[pi]);
            for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][t], a[i][pj]);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (a[i][t] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (a[t][j] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility correction: fold an offending row into row t
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        diag.push_back(abs(a[t][t]));
    }
    return diag;
}

// ---------------------------------------------------------------------------
// EchelonBasis

EchelonBasis::SparseRow EchelonBasis::reduce(SparseRow v) const {
    std::size_t k = 0;
    while (k < v.size()) {
        auto it = pivots_.find(v[k].first);
        if (it == pivots_.end()) {
            ++k;
            continue;
        }
        Rational s = v[k].second;
        v = axpy(v, s, it->second);
    }
    return v;
}

bool EchelonBasis::add_sparse(SparseRow v) {
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::erase_if(v, [](const auto& e) { return e.second == 0; });
    for (const auto& e : v)
        if (e.first >= dim_) throw std::out_of_range("EchelonBasis: index out of range");
    v = reduce(std::move(v));
    if (v.empty()) return false;
    Rational lead = v.front().second;
    for (auto& e : v) e.second /= lead;
    pivots_.emplace(v.front().first, std::move(v));
    return true;
}

bool EchelonBasis::add(std::span<const Rational> v) {
    if (v.size() != dim_) throw std::invalid_argument("EchelonBasis::add: length mismatch");
    SparseRow row;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) row.emplace_back(i, v[i]);
    return add_sparse(std::move(row));
}

bool EchelonBasis::contains(std::span<const Rational> v) const {
    if (v.size() != dim_) throw std::invalid_argument("EchelonBasis::contains: length mismatch");
    SparseRow row;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) row.emplace_back(i, v[i]);
    return reduce(std::move(row)).empty();
}

}  // namespace nilhom::linalg
