#include "nilhom/lie_homology.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace nilhom::homology {

void add_scaled(Vector& acc, const Vector& v, const Rational& s) {
    if (s == 0) return;
    for (const auto& [i, c] : v) {
        auto [it, inserted] = acc.try_emplace(i, c * s);
        if (!inserted) {
            it->second += c * s;
            if (it->second == 0) acc.erase(it);
        }
    }
}

namespace {

Weight weight_sum(const Weight& a, const Weight& b) {
    Weight out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return out;
}

}  // namespace

GradedLieAlgebra::GradedLieAlgebra(std::vector<std::string> labels, std::vector<Weight> weights,
                                   std::vector<std::size_t> degrees, Brackets brackets)
    : labels_(std::move(labels)), weights_(std::move(weights)), degrees_(std::move(degrees)),
      brackets_(std::move(brackets)) {
    const std::size_t m = labels_.size();
    if (weights_.empty()) weights_.assign(m, Weight{});
    const bool check_degrees = !degrees_.empty();
    if (!check_degrees) degrees_.assign(m, 0);
    if (weights_.size() != m || degrees_.size() != m)
        throw std::invalid_argument("GradedLieAlgebra: label/weight/degree counts differ");
    weight_rank_ = m ? weights_.front().size() : 0;
    for (const auto& w : weights_)
        if (w.size() != weight_rank_) throw std::invalid_argument("GradedLieAlgebra: ragged weights");

    for (auto it = brackets_.begin(); it != brackets_.end();) {
        auto [i, j] = it->first;
        if (i >= j || j >= m) throw std::invalid_argument("GradedLieAlgebra: bracket key must satisfy i < j < dim");
        std::erase_if(it->second, [](const auto& kv) { return kv.second == 0; });
        if (it->second.empty()) {
            it = brackets_.erase(it);
            continue;
        }
        Weight expected = weight_sum(weights_[i], weights_[j]);
        for (const auto& [k, c] : it->second) {
            if (k >= m) throw std::invalid_argument("GradedLieAlgebra: bracket index out of range");
            if (weights_[k] != expected)
                throw std::invalid_argument("GradedLieAlgebra: bracket [" + labels_[i] + ", " + labels_[j] +
                                            "] is not weight homogeneous");
            if (check_degrees && degrees_[k] != degrees_[i] + degrees_[j])
                throw std::invalid_argument("GradedLieAlgebra: bracket [" + labels_[i] + ", " + labels_[j] +
                                            "] breaks the grading");
        }
        ++it;
    }

    // Jacobi on basis triples
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                Vector jac;
                auto term = [&](std::size_t a, std::size_t b, std::size_t c) {
                    Vector inner = bracket_basis(b, c);
                    for (const auto& [l, x] : inner) add_scaled(jac, bracket_basis(a, l), x);
                };
                term(i, j, k);
                term(j, k, i);
                term(k, i, j);
                if (!jac.empty())
                    throw std::invalid_argument("GradedLieAlgebra: Jacobi identity fails on (" + labels_[i] + ", " +
                                                labels_[j] + ", " + labels_[k] + ")");
            }
}

Vector GradedLieAlgebra::bracket_basis(std::size_t i, std::size_t j) const {
    if (i == j) return {};
    auto it = brackets_.find({std::min(i, j), std::max(i, j)});
    if (it == brackets_.end()) return {};
    if (i < j) return it->second;
    Vector out;
    for (const auto& [k, c] : it->second) out.emplace(k, -c);
    return out;
}

Vector GradedLieAlgebra::bracket(const Vector& a, const Vector& b) const {
    Vector out;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) add_scaled(out, bracket_basis(i, j), x * y);
    return out;
}

GradedLieAlgebra free_nilpotent_lie(std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) throw std::invalid_argument("free_nilpotent_lie: rank and class must be >= 1");
    auto basis = lie::hall_basis(r, c);
    const std::size_t m = basis->size();
    std::vector<std::string> labels;
    std::vector<Weight> weights;
    std::vector<std::size_t> degrees;
    for (const auto& e : basis->elements()) {
        labels.push_back(lie::format_word(e.word));
        weights.push_back(e.weight);
        degrees.push_back(e.degree);
    }
    GradedLieAlgebra::Brackets brackets;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            if (degrees[i] + degrees[j] > c) continue;
            auto v = lie::bracket(lie::LieElement::basis_element(basis, i), lie::LieElement::basis_element(basis, j));
            if (!v.is_zero()) brackets.emplace(std::make_pair(i, j), Vector(v.coords().begin(), v.coords().end()));
        }
    return GradedLieAlgebra(std::move(labels), std::move(weights), std::move(degrees), std::move(brackets));
}

std::shared_ptr<const GradedLieAlgebra> shared_free_nilpotent_lie(std::size_t r, std::size_t c) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const GradedLieAlgebra>> memo;
    std::lock_guard lock(mutex);
    auto& slot = memo[{r, c}];
    if (!slot) slot = std::make_shared<const GradedLieAlgebra>(free_nilpotent_lie(r, c));
    return slot;
}

// ---------------------------------------------------------------------------
// Exterior algebra bookkeeping. Wedge monomials are bit masks over the basis.

namespace {

using Mask = unsigned __int128;
constexpr std::size_t kMaxDim = 128;

struct MaskHash {
    std::size_t operator()(Mask m) const noexcept {
        auto lo = static_cast<std::uint64_t>(m), hi = static_cast<std::uint64_t>(m >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

Mask bit(std::size_t i) {
    return Mask(1) << i;
}

int popcount(Mask m) {
    return std::popcount(static_cast<std::uint64_t>(m)) + std::popcount(static_cast<std::uint64_t>(m >> 64));
}

// Number of set bits strictly below position k.
int count_below(Mask m, std::size_t k) {
    return popcount(m & (bit(k) - 1));
}

void check_dim(const GradedLieAlgebra& g) {
    if (g.dim() > kMaxDim)
        throw std::invalid_argument("Chevalley-Eilenberg complex limited to dimension " + std::to_string(kMaxDim));
}

// Visits every d-subset of [0, m) in lexicographic order.
template <class F>
void for_each_subset(std::size_t m, std::size_t d, F&& f) {
    if (d > m) return;
    std::vector<std::size_t> idx(d);
    for (std::size_t k = 0; k < d; ++k) idx[k] = k;
    for (;;) {
        f(idx);
        std::size_t k = d;
        while (k > 0 && idx[k - 1] == m - d + k - 1) --k;
        if (k == 0) return;
        ++idx[k - 1];
        for (std::size_t l = k; l < d; ++l) idx[l] = idx[l - 1] + 1;
    }
}

struct Block {
    std::vector<Mask> monomials;
};

std::map<Weight, Block> wedge_blocks(const GradedLieAlgebra& g, std::size_t d) {
    std::map<Weight, Block> blocks;
    Weight w(g.weight_rank());
    for_each_subset(g.dim(), d, [&](const std::vector<std::size_t>& idx) {
        std::fill(w.begin(), w.end(), 0);
        Mask mask = 0;
        for (std::size_t i : idx) {
            mask |= bit(i);
            const auto& wi = g.weight(i);
            for (std::size_t k = 0; k < w.size(); ++k) w[k] += wi[k];
        }
        blocks[w].monomials.push_back(mask);
    });
    return blocks;
}

using BracketTable = std::vector<std::vector<std::pair<std::size_t, Rational>>>;

BracketTable bracket_table(const GradedLieAlgebra& g) {
    const std::size_t m = g.dim();
    BracketTable table(m * m);
    for (const auto& [key, v] : g.structure_constants())
        table[key.first * m + key.second].assign(v.begin(), v.end());
    return table;
}

// Boundary of one wedge monomial of degree d, as (mask, coefficient) pairs
// sorted by mask.
std::vector<std::pair<Mask, Rational>> boundary_of(Mask mono, std::size_t m, const BracketTable& table) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
        if (mono & bit(i)) idx.push_back(i);
    std::vector<std::pair<Mask, Rational>> terms;
    for (std::size_t s = 0; s < idx.size(); ++s)
        for (std::size_t t = s + 1; t < idx.size(); ++t) {
            const auto& br = table[idx[s] * m + idx[t]];
            if (br.empty()) continue;
            // (-1)^{s+t} with 1-based positions equals (-1)^{s+t} 0-based
            const int sign_st = ((s + t) % 2 == 0) ? 1 : -1;
            Mask rest = mono & ~bit(idx[s]) & ~bit(idx[t]);
            for (const auto& [k, c] : br) {
                if (rest & bit(k)) continue;
                int sign = (count_below(rest, k) % 2 == 0) ? sign_st : -sign_st;
                terms.emplace_back(rest | bit(k), sign > 0 ? Rational(c) : Rational(-c));
            }
        }
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Mask, Rational>> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const auto& e) { return e.second == 0; });
    return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> wedge_basis(std::size_t m, std::size_t d) {
    std::vector<std::vector<std::size_t>> out;
    for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) { out.push_back(idx); });
    return out;
}

linalg::RationalMatrix ce_boundary(const GradedLieAlgebra& g, std::size_t d) {
    check_dim(g);
    const std::size_t m = g.dim();
    if (d > m) throw std::invalid_argument("ce_boundary: degree exceeds the dimension");
    if (d == 0) return linalg::RationalMatrix(0, 1);
    std::unordered_map<Mask, std::size_t, MaskHash> row_index;
    std::size_t rows = 0;
    for_each_subset(m, d - 1, [&](const std::vector<std::size_t>& idx) {
        Mask mask = 0;
        for (std::size_t i : idx) mask |= bit(i);
        row_index.emplace(mask, rows++);
    });
    auto table = bracket_table(g);
    std::vector<linalg::Triplet<Rational>> triplets;
    std::size_t col = 0;
    for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) {
        Mask mask = 0;
        for (std::size_t i : idx) mask |= bit(i);
        for (auto& [target, c] : boundary_of(mask, m, table)) triplets.push_back({row_index.at(target), col, c});
        ++col;
    });
    return linalg::RationalMatrix::from_triplets(rows, col, std::move(triplets));
}

bool boundary_squared_vanishes(const GradedLieAlgebra& g, std::size_t d) {
    check_dim(g);
    const std::size_t m = g.dim();
    if (d < 2 || d > m) return true;
    auto table = bracket_table(g);
    bool ok = true;
    for_each_subset(m, d, [&](const std::vector<std::size_t>& idx) {
        if (!ok) return;
        Mask mask = 0;
        for (std::size_t i : idx) mask |= bit(i);
        std::map<Mask, Rational> acc;
        for (const auto& [mid, c] : boundary_of(mask, m, table))
            for (const auto& [target, e] : boundary_of(mid, m, table)) acc[target] += c * e;
        for (const auto& [target, v] : acc)
            if (v != 0) ok = false;
    });
    return ok;
}

WeightCounts wedge_weights(const GradedLieAlgebra& g, std::size_t d) {
    check_dim(g);
    WeightCounts out;
    for (const auto& [w, block] : wedge_blocks(g, d)) out.emplace(w, block.monomials.size());
    return out;
}

WeightCounts boundary_ranks(const GradedLieAlgebra& g, std::size_t d) {
    check_dim(g);
    const std::size_t m = g.dim();
    WeightCounts out;
    if (d == 0 || d > m || g.is_abelian()) return out;
    auto table = bracket_table(g);
    auto sources = wedge_blocks(g, d);
    auto targets = wedge_blocks(g, d - 1);
    for (const auto& [w, block] : sources) {
        auto tgt = targets.find(w);
        if (tgt == targets.end()) continue;
        std::unordered_map<Mask, std::size_t, MaskHash> col_index;
        col_index.reserve(tgt->second.monomials.size());
        for (std::size_t k = 0; k < tgt->second.monomials.size(); ++k) col_index.emplace(tgt->second.monomials[k], k);
        // rows are images of source monomials: the transpose of the boundary
        linalg::RationalMatrix image(block.monomials.size(), col_index.size());
        for (std::size_t k = 0; k < block.monomials.size(); ++k) {
            linalg::RationalMatrix::Row row;
            for (auto& [target, c] : boundary_of(block.monomials[k], m, table))
                row.emplace_back(col_index.at(target), std::move(c));
            std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            image.set_row(k, std::move(row));
        }
        std::size_t r = linalg::rank(image);
        if (r) out.emplace(w, r);
    }
    return out;
}

WeightCounts weighted_betti(const GradedLieAlgebra& g, std::size_t d) {
    check_dim(g);
    WeightCounts out;
    if (d > g.dim()) return out;
    auto chains = wedge_weights(g, d);
    auto out_rank = boundary_ranks(g, d);
    auto in_rank = boundary_ranks(g, d + 1);
    for (const auto& [w, n] : chains) {
        std::size_t a = out_rank.count(w) ? out_rank.at(w) : 0;
        std::size_t b = in_rank.count(w) ? in_rank.at(w) : 0;
        if (a + b > n) throw std::logic_error("weighted_betti: boundary ranks exceed chain dimension");
        if (n - a - b) out.emplace(w, n - a - b);
    }
    return out;
}

std::size_t total(const WeightCounts& counts) {
    std::size_t s = 0;
    for (const auto& [w, n] : counts) s += n;
    return s;
}

std::size_t homology_dimension(const GradedLieAlgebra& g, std::size_t d) {
    return total(weighted_betti(g, d));
}

std::vector<std::size_t> betti_numbers(const GradedLieAlgebra& g) {
    check_dim(g);
    const std::size_t m = g.dim();
    // ranks[d] = rank of the boundary out of Lambda^d, for d = 0 .. m + 1
    std::vector<std::size_t> ranks(m + 2, 0);
    for (std::size_t d = 1; d <= m; ++d) ranks[d] = total(boundary_ranks(g, d));
    std::vector<std::size_t> betti(m + 1);
    mpz_class binom;
    for (std::size_t d = 0; d <= m; ++d) {
        mpz_bin_uiui(binom.get_mpz_t(), m, d);
        betti[d] = binom.get_ui() - ranks[d] - ranks[d + 1];
    }
    return betti;
}

std::vector<std::size_t> group_betti(std::size_t r, std::size_t c) {
    return betti_numbers(*shared_free_nilpotent_lie(r, c));
}

std::vector<std::size_t> lower_central_series_dims(const GradedLieAlgebra& g) {
    const std::size_t m = g.dim();
    std::vector<std::size_t> dims{m};
    std::vector<Vector> current;
    for (std::size_t i = 0; i < m; ++i) current.push_back(Vector{{i, Rational(1)}});
    while (!current.empty()) {
        linalg::EchelonBasis span(m);
        std::vector<Vector> next;
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& v : current) {
                Vector b = g.bracket(Vector{{i, Rational(1)}}, v);
                if (b.empty()) continue;
                if (span.add_sparse({b.begin(), b.end()})) next.push_back(std::move(b));
            }
        dims.push_back(next.size());
        if (next.size() == current.size()) break;  // not nilpotent
        current = std::move(next);
    }
    return dims;
}

std::vector<Vector> center_basis(const GradedLieAlgebra& g) {
    const std::size_t m = g.dim();
    // row (j * m + k), column i: coefficient of e_k in [e_i, e_j]
    std::vector<linalg::Triplet<Rational>> triplets;
    for (const auto& [key, v] : g.structure_constants()) {
        auto [i, j] = key;
        for (const auto& [k, c] : v) {
            triplets.push_back({j * m + k, i, c});
            triplets.push_back({i * m + k, j, -c});
        }
    }
    auto mat = linalg::RationalMatrix::from_triplets(m * m, m, std::move(triplets));
    std::vector<Vector> out;
    for (const auto& v : linalg::nullspace_basis(mat)) {
        Vector s;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) s.emplace(i, v[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace nilhom::homology
