#pragma once

#include <atomic>
#include <cstdint>
#include <queue>
#include <set>
#include <thread>
#include <unordered_set>

#include "stacksort/core.hpp"
#include "stacksort/language.hpp"

namespace stacksort {

// Set of permutations of 1..n, e.g. P(n,k), the permutations generable
// by k stacks.
struct PermSet {
    int n = 0;
    std::set<std::vector<int>> members;

    std::size_t size() const { return members.size(); }
    bool contains(const std::vector<int>& pi) const { return members.count(pi) > 0; }
};

struct KnEntry {
    int n;
    int k_n;
};

// Explicit resource cap for the state-space searches.  Exceeding it
// raises budget_error; a search never reports "unsortable" merely
// because it ran out of budget.
struct SearchBudget {
    std::size_t max_states = 20'000'000;
};

namespace detail {

// Packs (consumed, stacks[, output]) into 128 bits: one nibble per label,
// one per container length.  Supports n <= 12 and k <= 6, which covers
// everything the searches are budgeted for.
struct PackedState {
    std::uint64_t lo = 0, hi = 0;
    friend bool operator==(const PackedState&, const PackedState&) = default;
};

struct PackedStateHash {
    std::size_t operator()(const PackedState& s) const {
        std::uint64_t h = s.lo * 0x9E3779B97F4A7C15ull;
        h ^= (s.hi + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2));
        return static_cast<std::size_t>(h * 0xC2B2AE3D27D4EB4Full);
    }
};

class NibblePacker {
  public:
    void push(int v) {
        if (pos_ < 16)
            lo_ |= static_cast<std::uint64_t>(v & 0xF) << (4 * pos_);
        else
            hi_ |= static_cast<std::uint64_t>(v & 0xF) << (4 * (pos_ - 16));
        ++pos_;
    }
    PackedState done() const { return {lo_, hi_}; }

  private:
    std::uint64_t lo_ = 0, hi_ = 0;
    int pos_ = 0;
};

inline void check_packable(int n, int k) {
    if (n > 12 || k > 6)
        throw budget_error("search supports n <= 12 and k <= 6");
}

}  // namespace detail

// True iff some move string sends s_pi to F(n, k).  Search over
// (consumed-input, stack contents); since the target output is sorted,
// the final move is only taken when it emits the next expected element,
// which fixes the output and keeps the key small.
inline bool is_sortable(const std::vector<int>& pi, int k, SearchBudget budget = {}) {
    validate_permutation(pi);
    const int n = static_cast<int>(pi.size());
    if (k == 0) return std::is_sorted(pi.begin(), pi.end());
    if (k < 0) throw std::invalid_argument("negative stack count");
    if (n == 0) return true;
    detail::check_packable(n, k);

    std::vector<std::vector<int>> stacks(k);
    std::unordered_set<detail::PackedState, detail::PackedStateHash> visited;
    int consumed = 0, emitted = 0;

    auto key = [&]() {
        detail::NibblePacker p;
        p.push(consumed);
        for (const auto& st : stacks) {
            p.push(static_cast<int>(st.size()));
            for (int v : st) p.push(v);
        }
        return p.done();
    };

    std::function<bool()> dfs = [&]() -> bool {
        if (emitted == n) return true;
        if (!visited.insert(key()).second) return false;
        if (visited.size() > budget.max_states)
            throw budget_error("is_sortable exceeded max_states");
        // Drain toward the output first: finds witnesses sooner.
        if (!stacks[k - 1].empty() && stacks[k - 1].back() == emitted + 1) {
            stacks[k - 1].pop_back();
            ++emitted;
            bool hit = dfs();
            --emitted;
            stacks[k - 1].push_back(emitted + 1);
            if (hit) return true;
        }
        for (int i = k - 1; i >= 1; --i) {
            if (stacks[i - 1].empty()) continue;
            int x = stacks[i - 1].back();
            stacks[i - 1].pop_back();
            stacks[i].push_back(x);
            bool hit = dfs();
            stacks[i].pop_back();
            stacks[i - 1].push_back(x);
            if (hit) return true;
        }
        if (consumed < n) {
            stacks[0].push_back(pi[consumed]);
            ++consumed;
            bool hit = dfs();
            --consumed;
            stacks[0].pop_back();
            if (hit) return true;
        }
        return false;
    };
    return dfs();
}

// Exact P(n, k): depth-first search over live states reachable from
// I(n, k), collecting the output order of every final state.  The
// visited set keys on the full structural state, output included.
inline PermSet generable_perms(int n, int k, SearchBudget budget = {}) {
    if (n < 0 || k < 0) throw std::invalid_argument("need n, k >= 0");
    PermSet result;
    result.n = n;
    if (k == 0 || n == 0) {
        result.members.insert(identity_permutation(n));
        return result;
    }
    detail::check_packable(n, k);

    std::vector<std::vector<int>> stacks(k);
    std::vector<int> output;
    std::unordered_set<detail::PackedState, detail::PackedStateHash> visited;
    int consumed = 0;

    auto key = [&]() {
        detail::NibblePacker p;
        p.push(consumed);
        for (const auto& st : stacks) {
            p.push(static_cast<int>(st.size()));
            for (int v : st) p.push(v);
        }
        p.push(static_cast<int>(output.size()));
        for (int v : output) p.push(v);
        return p.done();
    };

    std::function<void()> dfs = [&]() {
        if (!visited.insert(key()).second) return;
        if (visited.size() > budget.max_states)
            throw budget_error("generable_perms exceeded max_states");
        if (static_cast<int>(output.size()) == n) {
            result.members.insert(output);
            return;
        }
        if (!stacks[k - 1].empty()) {
            int x = stacks[k - 1].back();
            stacks[k - 1].pop_back();
            output.push_back(x);
            dfs();
            output.pop_back();
            stacks[k - 1].push_back(x);
        }
        for (int i = k - 1; i >= 1; --i) {
            if (stacks[i - 1].empty()) continue;
            int x = stacks[i - 1].back();
            stacks[i - 1].pop_back();
            stacks[i].push_back(x);
            dfs();
            stacks[i].pop_back();
            stacks[i - 1].push_back(x);
        }
        if (consumed < n) {
            stacks[0].push_back(consumed + 1);
            ++consumed;
            dfs();
            --consumed;
            stacks[0].pop_back();
        }
    };
    dfs();
    return result;
}

// Smallest k such that every permutation of n elements is sortable.
// Scans k upward; within a k, stops at the first unsortable permutation.
// Sortability checks are independent, so they fan out over workers.
inline KnEntry compute_kn(int n, SearchBudget budget = {}, int workers = 1) {
    if (n < 0) throw std::invalid_argument("need n >= 0");
    for (int k = 0;; ++k) {
        if (k > 8) throw std::logic_error("k_n search runaway");
        bool all_ok = true;
        if (workers <= 1 || n < 2) {
            std::vector<int> pi = identity_permutation(n);
            do {
                if (!is_sortable(pi, k, budget)) {
                    all_ok = false;
                    break;
                }
            } while (std::next_permutation(pi.begin(), pi.end()));
        } else {
            // Deal permutations round-robin; first failure wins, budget
            // errors surface after all workers stop.
            std::atomic<bool> failed{false};
            std::atomic<bool> budget_hit{false};
            std::vector<std::thread> pool;
            for (int wi = 0; wi < workers; ++wi) {
                pool.emplace_back([&, wi]() {
                    std::vector<int> pi = identity_permutation(n);
                    std::size_t idx = 0;
                    do {
                        if (failed.load(std::memory_order_relaxed) ||
                            budget_hit.load(std::memory_order_relaxed))
                            return;
                        if (idx++ % workers != static_cast<std::size_t>(wi)) continue;
                        try {
                            if (!is_sortable(pi, k, budget))
                                failed.store(true, std::memory_order_relaxed);
                        } catch (const budget_error&) {
                            budget_hit.store(true, std::memory_order_relaxed);
                        }
                    } while (std::next_permutation(pi.begin(), pi.end()));
                });
            }
            for (auto& t : pool) t.join();
            if (budget_hit.load()) throw budget_error("compute_kn exceeded max_states");
            all_ok = !failed.load();
        }
        if (all_ok) return {n, k};
    }
}

// {a . b : a in A, b in B} with (a . b)(x) = a(b(x)).
inline PermSet compose_sets(const PermSet& a, const PermSet& b) {
    if (a.n != b.n) throw std::invalid_argument("composing sets over different n");
    PermSet result;
    result.n = a.n;
    std::vector<int> ab(a.n);
    for (const auto& pa : a.members)
        for (const auto& pb : b.members) {
            for (int i = 0; i < a.n; ++i) ab[i] = pa[pb[i] - 1];
            result.members.insert(ab);
        }
    return result;
}

// Merges per-stack move strings w_i over {m_i, m_{i+1}} into one string
// whose stack-i subsequence is exactly w_i.  Precedence: consecutive
// symbols within each w_i; shared letters are identified by occurrence
// index.  The merge lists symbols in a topological order of that
// precedence (smallest (letter, occurrence) first, so the result is
// deterministic).
inline MoveString interleave(const std::vector<MoveString>& per_stack) {
    const int k = static_cast<int>(per_stack.size());
    if (k == 0) throw std::invalid_argument("no stacks");
    const int n = letter_count(per_stack[0], 1);
    for (int i = 0; i < k; ++i) {
        const MoveString& w = per_stack[i];
        int lo = 0, hi = 0;  // prefix counts of m_{i+1} and m_{i+2}
        for (char c : w) {
            int m = move_of_char(c);
            if (m == i + 1)
                ++lo;
            else if (m == i + 2)
                ++hi;
            else
                throw std::invalid_argument("stack string " + std::to_string(i + 1) +
                                            " uses a foreign letter");
            if (hi > lo) throw std::invalid_argument("stack string pops before pushing");
        }
        if (lo != n || hi != n)
            throw std::invalid_argument("stack strings disagree on element count");
    }

    // Node id for the j-th occurrence of m_letter (0-based j).
    auto node = [&](int letter, int j) { return (letter - 1) * n + j; };
    const int total = (k + 1) * n;
    std::vector<std::vector<int>> succ(total);
    std::vector<int> indegree(total, 0);
    for (int i = 0; i < k; ++i) {
        std::vector<int> seen(k + 2, 0);
        int prev = -1;
        for (char c : per_stack[i]) {
            int m = move_of_char(c);
            int cur = node(m, seen[m]++);
            if (prev >= 0) {
                succ[prev].push_back(cur);
                ++indegree[cur];
            }
            prev = cur;
        }
    }

    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < total; ++v)
        if (indegree[v] == 0) ready.push(v);
    MoveString result;
    result.reserve(total);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        result.push_back(char_of_move(v / n + 1));
        for (int w : succ[v])
            if (--indegree[w] == 0) ready.push(w);
    }
    if (static_cast<int>(result.size()) != total)
        throw std::invalid_argument("cyclic precedence between stack strings");
    return result;
}

}  // namespace stacksort
