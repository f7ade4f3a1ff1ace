#pragma once

#include <numeric>
#include <optional>

#include "stacksort/matcher.hpp"
#include "stacksort/polynomial.hpp"

namespace stacksort {

namespace detail {

// Exact multivariate division: returns p / d when the division leaves no
// remainder, nothing otherwise.  Works in the term map's lex order.
inline std::optional<MultiPoly> exact_divide(const MultiPoly& p, const MultiPoly& d) {
    if (d.is_zero()) return std::nullopt;
    MultiPoly rem = p;
    MultiPoly quo = MultiPoly::zero(p.arity);
    const auto& [ed, cd] = *d.terms.rbegin();
    while (!rem.is_zero()) {
        const auto& [er, cr] = *rem.terms.rbegin();
        if (cr % cd != 0) return std::nullopt;
        Exponents eq(p.arity);
        for (int i = 0; i < p.arity; ++i) {
            eq[i] = er[i] - ed[i];
            if (eq[i] < 0) return std::nullopt;
        }
        MultiPoly t = MultiPoly::monomial(std::move(eq), cr / cd);
        quo += t;
        rem -= t * d;
    }
    return quo;
}

// A rational function whose denominator stays factored: a registry keeps
// each distinct denominator polynomial once, fractions reference it by id
// with an exponent.  Keeping factors separate is what lets sums cancel
// instead of snowballing.
class FactorRegistry {
  public:
    int intern(const MultiPoly& p) {
        for (std::size_t i = 0; i < factors_.size(); ++i)
            if (factors_[i] == p) return static_cast<int>(i);
        factors_.push_back(p);
        return static_cast<int>(factors_.size()) - 1;
    }
    const MultiPoly& operator[](int id) const { return factors_[id]; }

  private:
    std::vector<MultiPoly> factors_;
};

struct FFrac {
    MultiPoly num;
    std::map<int, int> den;  // factor id -> exponent
};

class FFracOps {
  public:
    explicit FFracOps(FactorRegistry& reg) : reg_(reg) {}

    FFrac of(MultiPoly p) const { return {std::move(p), {}}; }

    void cancel(FFrac& f) const {
        if (f.num.is_zero()) {
            f.den.clear();
            return;
        }
        for (auto it = f.den.begin(); it != f.den.end();) {
            while (it->second > 0) {
                auto q = exact_divide(f.num, reg_[it->first]);
                if (!q) break;
                f.num = std::move(*q);
                --it->second;
            }
            it = it->second == 0 ? f.den.erase(it) : std::next(it);
        }
    }

    FFrac add(const FFrac& a, const FFrac& b) const {
        FFrac r;
        r.den = a.den;
        for (const auto& [id, e] : b.den) {
            auto [it, fresh] = r.den.emplace(id, e);
            if (!fresh) it->second = std::max(it->second, e);
        }
        MultiPoly an = a.num, bn = b.num;
        for (const auto& [id, e] : r.den) {
            int ea = 0, eb = 0;
            if (auto it = a.den.find(id); it != a.den.end()) ea = it->second;
            if (auto it = b.den.find(id); it != b.den.end()) eb = it->second;
            for (int i = ea; i < e; ++i) an = an * reg_[id];
            for (int i = eb; i < e; ++i) bn = bn * reg_[id];
        }
        r.num = an + bn;
        cancel(r);
        return r;
    }

    FFrac mul(const FFrac& a, const MultiPoly& p) const {
        FFrac r{a.num * p, a.den};
        cancel(r);
        return r;
    }

    FFrac divide_by_factor(FFrac a, const MultiPoly& d) const {
        if (auto q = exact_divide(a.num, d)) {
            a.num = std::move(*q);
            return a;
        }
        ++a.den[reg_.intern(d)];
        return a;
    }

    MultiPoly expand_den(const FFrac& f) const {
        MultiPoly d = MultiPoly::constant(f.num.arity, 1);
        for (const auto& [id, e] : f.den)
            for (int i = 0; i < e; ++i) d = d * reg_[id];
        return d;
    }

  private:
    FactorRegistry& reg_;
};

// Fraction-free Gauss-Jordan (Montante/Bareiss): solves A x = b over the
// polynomial ring.  Every intermediate entry is a minor of the input, so
// each division is exact; the matrix ends as det * I and the returned
// solution is x_i = num_i / det.
struct FractionFreeSolution {
    std::vector<MultiPoly> numerators;
    MultiPoly det;
};

inline FractionFreeSolution bareiss_solve(std::vector<std::vector<MultiPoly>> a,
                                          std::vector<MultiPoly> b) {
    const int s = static_cast<int>(a.size());
    const int arity = b.at(0).arity;
    MultiPoly prev = MultiPoly::constant(arity, 1);
    auto div = [](MultiPoly&& p, const MultiPoly& d) {
        auto q = exact_divide(p, d);
        if (!q) throw std::logic_error("fraction-free elimination lost exact divisibility");
        return std::move(*q);
    };
    for (int k = 0; k < s; ++k) {
        int pivot = -1;
        for (int r = k; r < s; ++r)
            if (!a[r][k].is_zero()) { pivot = r; break; }
        if (pivot < 0) throw std::logic_error("singular cluster system");
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (int r = 0; r < s; ++r) {
            if (r == k) continue;
            MultiPoly factor = a[r][k];
            for (int c = k; c < s; ++c)
                a[r][c] = div(a[k][k] * a[r][c] - factor * a[k][c], prev);
            b[r] = div(a[k][k] * b[r] - factor * b[k], prev);
        }
        prev = a[k][k];
    }
    return {std::move(b), std::move(prev)};
}

// Strongly connected components of the overlap graph, emitted in a
// topological order of the condensation (dependencies first).
inline std::vector<std::vector<int>> scc_topological(
    const std::vector<std::vector<int>>& succ) {
    const int n = static_cast<int>(succ.size());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> comps;
    int counter = 0;

    // Iterative Tarjan; frames carry the next successor offset.
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
        while (!frames.empty()) {
            int v = frames.back().first;
            if (frames.back().second == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (frames.back().second < succ[v].size()) {
                int w = succ[v][frames.back().second++];
                if (index[w] == -1) {
                    frames.emplace_back(w, 0);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::vector<int> c;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    c.push_back(w);
                } while (w != v);
                std::sort(c.begin(), c.end());
                comps.push_back(std::move(c));
            }
            frames.pop_back();
            if (!frames.empty()) {
                int parent = frames.back().first;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    // Tarjan emits components in reverse topological order of the
    // condensation for edges u -> v; reverse to process sources first.
    std::reverse(comps.begin(), comps.end());
    return comps;
}

}  // namespace detail

// Goulden-Jackson cluster method: the generating function of all strings
// over the alphabet avoiding every forbidden word as a factor.  Each
// letter contributes the variable letter_to_var[letter-1]; a word's
// weight is the product of its letters' variables.
//
// Clusters chain marked occurrences of forbidden words, each overlapping
// its predecessor by a nonempty proper suffix-prefix match.  With C_v the
// signed weight of clusters ending in word v, the system is
//     C_v + sum_u O(u,v) C_u = -weight(v),
// where O(u,v) sums the weight of v's tail beyond each overlap, and the
// full counting function is F = 1 / (1 - S - sum_v C_v) with S the sum of
// letter weights.  Overlap cycles (bordered words, mutually overlapping
// families) make the C_v rational; those strongly connected components
// are solved by fraction-free elimination so the only denominators that
// ever appear are component determinants and self-overlap binomials.
inline RationalGF cluster_gf(int alphabet_size, int arity,
                             const std::vector<int>& letter_to_var,
                             const std::vector<MoveString>& forbidden) {
    if (static_cast<int>(letter_to_var.size()) != alphabet_size)
        throw std::invalid_argument("one variable per letter required");
    for (int v : letter_to_var)
        if (v < 0 || v >= arity) throw std::invalid_argument("variable index out of range");
    for (const auto& w : forbidden) {
        if (w.empty()) throw std::invalid_argument("empty forbidden word");
        for (char c : w)
            if (move_of_char(c) < 1 || move_of_char(c) > alphabet_size)
                throw std::invalid_argument("forbidden word uses a foreign letter");
    }
    for (const auto& w : forbidden)
        for (const auto& other : forbidden)
            if (&w != &other && other.find(w) != MoveString::npos)
                throw std::invalid_argument("forbidden set is not substring-minimal");

    auto weight_of = [&](const MoveString& w, std::size_t from) {
        Exponents e(arity, 0);
        for (std::size_t i = from; i < w.size(); ++i) ++e[letter_to_var[move_of_char(w[i]) - 1]];
        return MultiPoly::monomial(std::move(e), 1);
    };

    const int m = static_cast<int>(forbidden.size());
    // overlap[u][v]: sum over proper nonempty suffix(u) = prefix(v)
    // matches of the weight of v beyond the overlap.  Stored sparsely.
    std::vector<std::map<int, MultiPoly>> overlap_into(m);  // v -> (u -> O(u,v))
    std::vector<std::vector<int>> succ(m);
    for (int u = 0; u < m; ++u)
        for (int v = 0; v < m; ++v) {
            const MoveString &wu = forbidden[u], &wv = forbidden[v];
            std::size_t lim = std::min(wu.size(), wv.size());
            MultiPoly o = MultiPoly::zero(arity);
            for (std::size_t len = 1; len < lim; ++len)
                if (wu.compare(wu.size() - len, len, wv, 0, len) == 0)
                    o += weight_of(wv, len);
            if (!o.is_zero()) {
                succ[u].push_back(v);
                overlap_into[v].emplace(u, std::move(o));
            }
        }

    detail::FactorRegistry registry;
    detail::FFracOps ops(registry);
    std::vector<detail::FFrac> cluster(m, ops.of(MultiPoly::zero(arity)));

    for (const auto& comp : detail::scc_topological(succ)) {
        std::vector<bool> in_comp(m, false);
        for (int v : comp) in_comp[v] = true;

        // Right-hand sides: -weight(v) minus already-solved contributions.
        std::vector<detail::FFrac> rhs;
        rhs.reserve(comp.size());
        for (int v : comp) {
            detail::FFrac r = ops.of(-weight_of(forbidden[v], 0));
            for (const auto& [u, o] : overlap_into[v])
                if (!in_comp[u]) r = ops.add(r, ops.mul(cluster[u], -o));
            rhs.push_back(std::move(r));
        }

        if (comp.size() == 1) {
            int v = comp[0];
            auto self = overlap_into[v].find(v);
            if (self == overlap_into[v].end()) {
                cluster[v] = std::move(rhs[0]);
            } else {
                // (1 + O(v,v)) C_v = rhs
                MultiPoly d = MultiPoly::constant(arity, 1) + self->second;
                cluster[v] = ops.divide_by_factor(std::move(rhs[0]), d);
            }
            continue;
        }

        // A coupled component: bring the right-hand sides over a common
        // denominator, solve the polynomial system fraction-free, and
        // register the component determinant as the one new factor.
        std::map<int, int> common;
        for (const auto& r : rhs)
            for (const auto& [id, e] : r.den) {
                auto [it, fresh] = common.emplace(id, e);
                if (!fresh) it->second = std::max(it->second, e);
            }
        const int s = static_cast<int>(comp.size());
        std::vector<MultiPoly> b;
        b.reserve(s);
        for (const auto& r : rhs) {
            MultiPoly scaled = r.num;
            for (const auto& [id, e] : common) {
                int have = 0;
                if (auto it = r.den.find(id); it != r.den.end()) have = it->second;
                for (int i = have; i < e; ++i) scaled = scaled * registry[id];
            }
            b.push_back(std::move(scaled));
        }
        std::vector<std::vector<MultiPoly>> a(s,
                                              std::vector<MultiPoly>(s, MultiPoly::zero(arity)));
        for (int i = 0; i < s; ++i) {
            a[i][i] = MultiPoly::constant(arity, 1);
            for (const auto& [u, o] : overlap_into[comp[i]])
                if (in_comp[u]) {
                    int j = static_cast<int>(std::find(comp.begin(), comp.end(), u) -
                                             comp.begin());
                    a[i][j] += o;
                }
        }
        detail::FractionFreeSolution sol = detail::bareiss_solve(std::move(a), std::move(b));
        for (int i = 0; i < s; ++i) {
            detail::FFrac f{std::move(sol.numerators[i]), common};
            f = ops.divide_by_factor(std::move(f), sol.det);
            ops.cancel(f);
            cluster[comp[i]] = std::move(f);
        }
    }

    detail::FFrac total = ops.of(MultiPoly::zero(arity));
    for (int v = 0; v < m; ++v) total = ops.add(total, cluster[v]);

    MultiPoly s_letters = MultiPoly::zero(arity);
    for (int letter = 1; letter <= alphabet_size; ++letter)
        s_letters += MultiPoly::variable(arity, letter_to_var[letter - 1]);

    // F = 1 / (1 - S - C) with C = total.num / D.
    MultiPoly d_total = ops.expand_den(total);
    MultiPoly one = MultiPoly::constant(arity, 1);
    RationalGF gf{d_total, (one - s_letters) * d_total - total.num};

    long long content = 0;
    for (const auto& [e, c] : gf.num.terms) content = detail::gcd_ll(content, c);
    for (const auto& [e, c] : gf.den.terms) content = detail::gcd_ll(content, c);
    long long d0 = gf.den.constant_term();
    if (d0 == 0) throw std::logic_error("cluster denominator lost its constant term");
    if ((d0 < 0) != (content < 0)) content = -content;
    if (content != 1 && content != 0) {
        for (auto& [e, c] : gf.num.terms) c /= content;
        for (auto& [e, c] : gf.den.terms) c /= content;
    }
    return gf;
}

// All letters share one variable x: counts by string length.
inline RationalGF cluster_gf_uniform(int alphabet_size,
                                     const std::vector<MoveString>& forbidden) {
    return cluster_gf(alphabet_size, 1, std::vector<int>(alphabet_size, 0), forbidden);
}

// Letter i carries its own variable x_i: counts by per-letter multiplicity.
inline RationalGF cluster_gf_per_letter(int alphabet_size,
                                        const std::vector<MoveString>& forbidden) {
    std::vector<int> ltv(alphabet_size);
    std::iota(ltv.begin(), ltv.end(), 0);
    return cluster_gf(alphabet_size, alphabet_size, ltv, forbidden);
}

// Independent counting oracle: walks the string trie directly, pruning
// only below a matched factor, and counts the leaves.  Never touches the
// cluster algebra.
inline long long brute_count(int alphabet_size, const std::vector<MoveString>& forbidden,
                             int length, int max_total_length = 14) {
    if (length < 0) throw std::invalid_argument("negative length");
    if (length > max_total_length)
        throw budget_error("brute_count length " + std::to_string(length) + " exceeds cap " +
                           std::to_string(max_total_length));
    FactorMatcher matcher(alphabet_size, forbidden);
    std::function<long long(int, int)> walk = [&](int state, int remaining) -> long long {
        if (remaining == 0) return 1;
        long long total = 0;
        for (int m = 1; m <= alphabet_size; ++m) {
            int ns = matcher.step(state, m);
            if (!matcher.matched(ns)) total += walk(ns, remaining - 1);
        }
        return total;
    };
    return walk(matcher.start(), length);
}

// Same oracle constrained to an exact per-letter count vector.
inline long long brute_count_by_counts(const std::vector<int>& letter_counts,
                                       const std::vector<MoveString>& forbidden,
                                       int max_total_length = 14) {
    const int alphabet_size = static_cast<int>(letter_counts.size());
    int total_len = 0;
    for (int c : letter_counts) {
        if (c < 0) throw std::invalid_argument("negative letter count");
        total_len += c;
    }
    if (total_len > max_total_length)
        throw budget_error("brute_count total " + std::to_string(total_len) + " exceeds cap " +
                           std::to_string(max_total_length));
    FactorMatcher matcher(alphabet_size, forbidden);
    std::vector<int> remaining = letter_counts;
    std::function<long long(int, int)> walk = [&](int state, int left) -> long long {
        if (left == 0) return 1;
        long long total = 0;
        for (int m = 1; m <= alphabet_size; ++m) {
            if (remaining[m - 1] == 0) continue;
            int ns = matcher.step(state, m);
            if (matcher.matched(ns)) continue;
            --remaining[m - 1];
            total += walk(ns, left - 1);
            ++remaining[m - 1];
        }
        return total;
    };
    return walk(matcher.start(), total_len);
}

}  // namespace stacksort
