#include "nilhom/free_lie.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace nilhom::lie {

std::string format_word(const Word& w) {
    std::string out;
    out.reserve(w.size());
    for (char ch : w) {
        int letter = static_cast<unsigned char>(ch) + 1;
        if (letter < 10)
            out.push_back(static_cast<char>('0' + letter));
        else
            out.push_back(static_cast<char>('a' + letter - 10));
    }
    return out;
}

Word parse_word(const std::string& text, std::size_t rank) {
    if (text.empty()) throw std::invalid_argument("parse_word: empty word");
    Word w;
    for (char ch : text) {
        int letter;
        if (ch >= '1' && ch <= '9')
            letter = ch - '0';
        else if (ch >= 'a' && ch <= 'z')
            letter = ch - 'a' + 10;
        else
            throw std::invalid_argument("parse_word: bad letter '" + std::string(1, ch) + "'");
        if (static_cast<std::size_t>(letter) > rank)
            throw std::invalid_argument("parse_word: letter exceeds rank in '" + text + "'");
        w.push_back(static_cast<char>(letter - 1));
    }
    return w;
}

bool is_lyndon(const Word& w) {
    if (w.empty()) return false;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (!(w < w.substr(k) + w.substr(0, k))) return false;
    return true;
}

std::vector<Word> lyndon_words(std::size_t rank, std::size_t max_length) {
    std::vector<Word> out;
    if (rank == 0 || max_length == 0) return out;
    const char last = static_cast<char>(rank - 1);
    Word w(1, 0);
    while (!w.empty()) {
        out.push_back(w);
        std::size_t m = w.size();
        while (w.size() < max_length) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == last) w.pop_back();
        if (!w.empty()) ++w.back();
    }
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

namespace {

int mobius(std::size_t n) {
    int mu = 1;
    for (std::size_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

}  // namespace

std::size_t witt_dimension(std::size_t rank, std::size_t n) {
    if (n == 0) throw std::invalid_argument("witt_dimension: degree must be >= 1");
    mpz_class sum = 0, power;
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        int mu = mobius(d);
        if (mu == 0) continue;
        mpz_ui_pow_ui(power.get_mpz_t(), rank, n / d);
        sum += mu * power;
    }
    sum /= static_cast<unsigned long>(n);
    if (!sum.fits_ulong_p()) throw std::overflow_error("witt_dimension: result too large");
    return sum.get_ui();
}

// ---------------------------------------------------------------------------
// TensorElement

TensorElement::TensorElement(std::size_t rank, Terms terms) : rank_(rank), terms_(std::move(terms)) {
    std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
    for (const auto& [w, c] : terms_)
        for (char ch : w)
            if (static_cast<std::size_t>(static_cast<unsigned char>(ch)) >= rank_)
                throw std::invalid_argument("TensorElement: letter out of range");
}

TensorElement TensorElement::word(std::size_t rank, const Word& w, const Rational& coeff) {
    TensorElement t(rank);
    t.add(w, coeff);
    return t;
}

Rational TensorElement::coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::size_t TensorElement::max_degree() const {
    std::size_t d = 0;
    for (const auto& [w, c] : terms_) d = std::max(d, w.size());
    return d;
}

std::size_t TensorElement::min_degree() const {
    if (terms_.empty()) return 0;
    std::size_t d = SIZE_MAX;
    for (const auto& [w, c] : terms_) d = std::min(d, w.size());
    return d;
}

bool TensorElement::is_homogeneous() const {
    return min_degree() == max_degree();
}

TensorElement TensorElement::homogeneous_part(std::size_t n) const {
    TensorElement out(rank_);
    for (const auto& [w, c] : terms_)
        if (w.size() == n) out.terms_.emplace(w, c);
    return out;
}

TensorElement TensorElement::truncated(std::size_t max_degree) const {
    TensorElement out(rank_);
    for (const auto& [w, c] : terms_)
        if (w.size() <= max_degree) out.terms_.emplace(w, c);
    return out;
}

void TensorElement::add(const Word& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void TensorElement::check_rank(const TensorElement& other) const {
    if (rank_ != other.rank_) throw std::invalid_argument("TensorElement: rank mismatch");
}

TensorElement& TensorElement::operator+=(const TensorElement& other) {
    check_rank(other);
    for (const auto& [w, c] : other.terms_) add(w, c);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& other) {
    check_rank(other);
    for (const auto& [w, c] : other.terms_) add(w, -c);
    return *this;
}

TensorElement TensorElement::operator+(const TensorElement& other) const {
    TensorElement out = *this;
    out += other;
    return out;
}

TensorElement TensorElement::operator-(const TensorElement& other) const {
    TensorElement out = *this;
    out -= other;
    return out;
}

TensorElement TensorElement::operator-() const {
    return scaled(-1);
}

TensorElement TensorElement::scaled(const Rational& s) const {
    TensorElement out(rank_);
    if (s == 0) return out;
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, c * s);
    return out;
}

TensorElement TensorElement::multiply(const TensorElement& other, std::size_t max_degree) const {
    check_rank(other);
    TensorElement out(rank_);
    for (const auto& [u, a] : terms_) {
        if (u.size() > max_degree) continue;
        for (const auto& [v, b] : other.terms_) {
            if (u.size() + v.size() > max_degree) continue;
            out.add(u + v, a * b);
        }
    }
    return out;
}

TensorElement TensorElement::commutator(const TensorElement& other, std::size_t max_degree) const {
    return multiply(other, max_degree) - other.multiply(*this, max_degree);
}

// ---------------------------------------------------------------------------
// HallBasis

namespace {

// Longest proper suffix that is Lyndon; its complement is the left factor.
std::size_t standard_split(const Word& w) {
    for (std::size_t k = 1; k < w.size(); ++k)
        if (is_lyndon(w.substr(k))) return k;
    return w.size();
}

}  // namespace

HallBasis::HallBasis(std::size_t rank, std::size_t max_degree) : rank_(rank), max_degree_(max_degree) {
    if (rank == 0 || max_degree == 0)
        throw std::invalid_argument("HallBasis: rank and degree must be >= 1");
    auto words = lyndon_words(rank, max_degree);
    elements_.reserve(words.size());
    offsets_.assign(max_degree + 1, words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        Element e;
        e.word = words[i];
        e.degree = e.word.size();
        e.weight.assign(rank, 0);
        for (char ch : e.word) ++e.weight[static_cast<unsigned char>(ch)];
        if (e.degree == 1) {
            e.expansion = TensorElement::word(rank, e.word);
        } else {
            std::size_t k = standard_split(e.word);
            e.left = index_.at(e.word.substr(0, k));
            e.right = index_.at(e.word.substr(k));
            e.expansion = elements_[*e.left].expansion.commutator(elements_[*e.right].expansion, e.degree);
        }
        if (offsets_[e.degree - 1] == words.size()) offsets_[e.degree - 1] = i;
        index_.emplace(e.word, i);
        elements_.push_back(std::move(e));
    }
}

std::pair<std::size_t, std::size_t> HallBasis::degree_range(std::size_t n) const {
    if (n == 0 || n > max_degree_) return {size(), size()};
    return {offsets_[n - 1], offsets_[n]};
}

std::size_t HallBasis::degree_size(std::size_t n) const {
    auto [b, e] = degree_range(n);
    return e - b;
}

std::optional<std::size_t> HallBasis::index_of(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::shared_ptr<const HallBasis> hall_basis(std::size_t rank, std::size_t max_degree) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const HallBasis>> memo;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(rank, max_degree);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto basis = std::make_shared<const HallBasis>(rank, max_degree);
    memo.emplace(key, basis);
    return basis;
}

// ---------------------------------------------------------------------------
// LieElement

LieElement::LieElement(std::shared_ptr<const HallBasis> basis, Coords coords)
    : basis_(std::move(basis)), coords_(std::move(coords)) {
    std::erase_if(coords_, [](const auto& kv) { return kv.second == 0; });
    for (const auto& [i, c] : coords_)
        if (!basis_ || i >= basis_->size()) throw std::out_of_range("LieElement: index out of range");
}

LieElement LieElement::basis_element(std::shared_ptr<const HallBasis> basis, std::size_t i,
                                     const Rational& coeff) {
    return LieElement(std::move(basis), Coords{{i, coeff}});
}

LieElement LieElement::generator(std::shared_ptr<const HallBasis> basis, std::size_t letter) {
    if (letter >= basis->rank()) throw std::out_of_range("LieElement::generator");
    return basis_element(std::move(basis), letter);
}

Rational LieElement::coordinate(std::size_t i) const {
    auto it = coords_.find(i);
    return it == coords_.end() ? Rational(0) : it->second;
}

linalg::RationalVector LieElement::dense() const {
    linalg::RationalVector v(basis_->size(), Rational(0));
    for (const auto& [i, c] : coords_) v[i] = c;
    return v;
}

LieElement LieElement::from_dense(std::shared_ptr<const HallBasis> basis, const linalg::RationalVector& v) {
    if (v.size() != basis->size()) throw std::invalid_argument("LieElement::from_dense: length mismatch");
    Coords coords;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) coords.emplace(i, v[i]);
    return LieElement(std::move(basis), std::move(coords));
}

LieElement LieElement::homogeneous_part(std::size_t n) const {
    auto [b, e] = basis_->degree_range(n);
    Coords out;
    for (const auto& [i, c] : coords_)
        if (i >= b && i < e) out.emplace(i, c);
    return LieElement(basis_, std::move(out));
}

void LieElement::check_basis(const LieElement& other) const {
    if (basis_ != other.basis_ &&
        (!basis_ || !other.basis_ || basis_->rank() != other.basis_->rank() ||
         basis_->max_degree() != other.basis_->max_degree()))
        throw std::invalid_argument("LieElement: basis mismatch");
}

LieElement LieElement::operator+(const LieElement& other) const {
    check_basis(other);
    Coords out = coords_;
    for (const auto& [i, c] : other.coords_) out[i] += c;
    return LieElement(basis_, std::move(out));
}

LieElement LieElement::operator-(const LieElement& other) const {
    check_basis(other);
    Coords out = coords_;
    for (const auto& [i, c] : other.coords_) out[i] -= c;
    return LieElement(basis_, std::move(out));
}

LieElement LieElement::operator-() const {
    return scaled(-1);
}

LieElement LieElement::scaled(const Rational& s) const {
    Coords out;
    if (s != 0)
        for (const auto& [i, c] : coords_) out.emplace(i, c * s);
    return LieElement(basis_, std::move(out));
}

bool LieElement::operator==(const LieElement& other) const {
    check_basis(other);
    return coords_ == other.coords_;
}

// ---------------------------------------------------------------------------

TensorElement expand_to_tensor(const LieElement& a) {
    TensorElement out(a.basis()->rank());
    for (const auto& [i, c] : a.coords()) out += a.basis()->element(i).expansion.scaled(c);
    return out;
}

LieElement tensor_to_hall(const TensorElement& t, std::shared_ptr<const HallBasis> basis) {
    if (t.rank() != basis->rank()) throw std::invalid_argument("tensor_to_hall: rank mismatch");
    if (t.max_degree() > basis->max_degree())
        throw std::invalid_argument("tensor_to_hall: word longer than the basis degree");
    // The expansion of the Lyndon element P_w is w plus lexicographically larger
    // words of the same length, so the smallest surviving word of a Lie
    // polynomial is always Lyndon.
    TensorElement rest = t;
    LieElement::Coords coords;
    while (!rest.is_zero()) {
        const auto& [w, c] = *rest.terms().begin();
        if (w.empty()) throw NotPrimitiveError("tensor_to_hall: constant term is not a Lie element");
        auto idx = basis->index_of(w);
        if (!idx) throw NotPrimitiveError("tensor_to_hall: component of degree " + std::to_string(w.size()) +
                                          " is not a Lie element (word " + format_word(w) + ")");
        Rational coeff = c;
        const auto& expansion = basis->element(*idx).expansion;
        if (expansion.coefficient(w) != 1) throw std::logic_error("tensor_to_hall: expansion not unitriangular");
        rest -= expansion.scaled(coeff);
        coords.emplace(*idx, coeff);
    }
    return LieElement(std::move(basis), std::move(coords));
}

LieElement bracket(const LieElement& a, const LieElement& b) {
    if (a.basis() != b.basis() &&
        (a.basis()->rank() != b.basis()->rank() || a.basis()->max_degree() != b.basis()->max_degree()))
        throw std::invalid_argument("bracket: basis mismatch");
    const auto& basis = a.basis();
    auto prod = expand_to_tensor(a).commutator(expand_to_tensor(b), basis->max_degree());
    return tensor_to_hall(prod, basis);
}

TensorElement left_normed_bracketing(const TensorElement& t) {
    TensorElement out(t.rank());
    for (const auto& [w, c] : t.terms()) {
        if (w.empty()) continue;
        TensorElement acc = TensorElement::word(t.rank(), w.substr(0, 1), c);
        for (std::size_t k = 1; k < w.size(); ++k) {
            TensorElement next(t.rank());
            Word letter = w.substr(k, 1);
            for (const auto& [u, a] : acc.terms()) {
                next.add(u + letter, a);
                next.add(letter + u, -a);
            }
            acc = std::move(next);
        }
        out += acc;
    }
    return out;
}

LieElement dynkin(const TensorElement& t, std::shared_ptr<const HallBasis> basis) {
    if (t.is_zero()) return LieElement(std::move(basis));
    if (!t.is_homogeneous()) throw std::invalid_argument("dynkin: input is not homogeneous");
    std::size_t b = t.max_degree();
    if (b == 0) throw std::invalid_argument("dynkin: degree-0 input");
    return tensor_to_hall(left_normed_bracketing(t), std::move(basis)).scaled(Rational(1, b));
}

linalg::RationalMatrix induced_map_lie(const linalg::RationalMatrix& a, std::size_t degree) {
    if (degree == 0) throw std::invalid_argument("induced_map_lie: degree must be >= 1");
    const std::size_t r = a.cols(), s = a.rows();
    const std::size_t src_dim = r ? witt_dimension(r, degree) : 0;
    const std::size_t dst_dim = s ? witt_dimension(s, degree) : 0;
    if (src_dim == 0 || dst_dim == 0) return linalg::RationalMatrix(dst_dim, src_dim);

    auto src = hall_basis(r, degree);
    auto dst = hall_basis(s, degree);
    std::vector<TensorElement> letter_image;
    letter_image.reserve(r);
    for (std::size_t j = 0; j < r; ++j) {
        TensorElement img(s);
        for (std::size_t i = 0; i < s; ++i) img.add(Word(1, static_cast<char>(i)), a.get(i, j));
        letter_image.push_back(std::move(img));
    }
    auto [sb, se] = src->degree_range(degree);
    auto [db, de] = dst->degree_range(degree);
    std::vector<linalg::Triplet<Rational>> triplets;
    for (std::size_t col = sb; col < se; ++col) {
        TensorElement image(s);
        for (const auto& [w, c] : src->element(col).expansion.terms()) {
            TensorElement term = TensorElement::word(s, Word(), c);
            for (char ch : w) term = term.multiply(letter_image[static_cast<unsigned char>(ch)], degree);
            image += term;
        }
        auto lie = tensor_to_hall(image, dst);
        for (const auto& [i, c] : lie.coords()) {
            if (i < db || i >= de) throw std::logic_error("induced_map_lie: image left its degree");
            triplets.push_back({i - db, col - sb, c});
        }
    }
    return linalg::RationalMatrix::from_triplets(dst_dim, src_dim, std::move(triplets));
}

linalg::RationalMatrix induced_map_lie(const linalg::IntegerMatrix& a, std::size_t degree) {
    return induced_map_lie(linalg::to_rational(a), degree);
}

}  // namespace nilhom::lie
