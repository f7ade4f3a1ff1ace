#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "stacksort/core.hpp"

namespace stacksort {

// The three nested string languages over M_k = {m_1, ..., m_{k+1}}:
//   type I   -- n-complete strings (carry n elements end to end),
//   type II  -- every letter appears exactly n times,
//   type III -- all strings of length n(k+1).
enum class LanguageTier { one, two, three };

// Prefix-count characterization: |u|_1 >= |u|_2 >= ... >= |u|_{k+1} >= 0
// for every prefix u, and every letter appears exactly n times.
inline bool is_n_complete(const MoveString& w, int n, int k) {
    validate_move_string(w, k);
    std::vector<int> counts(k + 1, 0);
    for (char c : w) {
        int m = move_of_char(c);
        ++counts[m - 1];
        if (m == 1) {
            if (counts[0] > n) return false;
        } else if (counts[m - 1] > counts[m - 2]) {
            return false;
        }
    }
    for (int c : counts)
        if (c != n) return false;
    return true;
}

struct CompletenessCheck {
    bool by_simulation;     // w * I(n,k) is a final state
    bool by_partition;      // w splits into n subsequences m_1 m_2 ... m_{k+1}
    bool by_prefix_counts;  // the prefix-count condition
    bool agree() const { return by_simulation == by_partition && by_partition == by_prefix_counts; }
};

namespace detail {

// Greedy subsequence partition: each m_i extends the earliest partial copy
// of m_1 m_2 ... m_{k+1} currently waiting for m_i.
inline bool partitions_into_chains(const MoveString& w, int n, int k) {
    std::vector<int> waiting(k + 1, 0);  // waiting[i]: copies that consumed m_1..m_i
    int started = 0, completed = 0;
    for (char c : w) {
        int m = move_of_char(c);
        if (m == 1) {
            if (++started > n) return false;
            ++waiting[1];
        } else {
            if (waiting[m - 1] == 0) return false;
            --waiting[m - 1];
            if (m == k + 1)
                ++completed;
            else
                ++waiting[m];
        }
    }
    return started == n && completed == n;
}

}  // namespace detail

// Evaluates the three equivalent conditions independently; used for
// cross-validation, the implementations share nothing.
inline CompletenessCheck complete_characterizations(const MoveString& w, int n, int k) {
    validate_move_string(w, k);
    CompletenessCheck r{};
    r.by_simulation = is_final(apply_string(w, initial_state(n, k)));
    r.by_partition = detail::partitions_into_chains(w, n, k);
    r.by_prefix_counts = is_n_complete(w, n, k);
    return r;
}

namespace detail {

inline unsigned long long checked_mul_u64(unsigned long long a, unsigned long long b) {
    unsigned long long r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("count does not fit in 64 bits");
    return r;
}

template <typename Fn>
void enumerate_type_one(std::vector<int>& counts, int n, int k, MoveString& prefix, Fn&& yield) {
    if (static_cast<int>(prefix.size()) == n * (k + 1)) {
        yield(const_cast<const MoveString&>(prefix));
        return;
    }
    for (int m = 1; m <= k + 1; ++m) {
        bool ok = (m == 1) ? counts[0] < n : counts[m - 1] < counts[m - 2];
        if (!ok) continue;
        ++counts[m - 1];
        prefix.push_back(char_of_move(m));
        enumerate_type_one(counts, n, k, prefix, yield);
        prefix.pop_back();
        --counts[m - 1];
    }
}

template <typename Fn>
void enumerate_fixed_counts(std::vector<int>& remaining, int k, MoveString& prefix, Fn&& yield) {
    bool done = true;
    for (int r : remaining)
        if (r > 0) { done = false; break; }
    if (done) {
        yield(const_cast<const MoveString&>(prefix));
        return;
    }
    for (int m = 1; m <= k + 1; ++m) {
        if (remaining[m - 1] == 0) continue;
        --remaining[m - 1];
        prefix.push_back(char_of_move(m));
        enumerate_fixed_counts(remaining, k, prefix, yield);
        prefix.pop_back();
        ++remaining[m - 1];
    }
}

template <typename Fn>
void enumerate_all_of_length(int len, int k, MoveString& prefix, Fn&& yield) {
    if (static_cast<int>(prefix.size()) == len) {
        yield(const_cast<const MoveString&>(prefix));
        return;
    }
    for (int m = 1; m <= k + 1; ++m) {
        prefix.push_back(char_of_move(m));
        enumerate_all_of_length(len, k, prefix, yield);
        prefix.pop_back();
    }
}

}  // namespace detail

// Streams every member of the chosen language for the given n and k.
// The caller bounds the work via max_total_length (strings have length
// n(k+1)); exceeding it raises budget_error before any enumeration.
inline void enumerate_language(int n, int k, LanguageTier tier,
                               const std::function<void(const MoveString&)>& yield,
                               int max_total_length = 18) {
    if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0 and k >= 1");
    if (k + 1 > max_moves_alphabet) throw std::invalid_argument("k + 1 > 9");
    if (n * (k + 1) > max_total_length)
        throw budget_error("enumeration length " + std::to_string(n * (k + 1)) +
                           " exceeds cap " + std::to_string(max_total_length));
    MoveString prefix;
    prefix.reserve(n * (k + 1));
    switch (tier) {
        case LanguageTier::one: {
            std::vector<int> counts(k + 1, 0);
            detail::enumerate_type_one(counts, n, k, prefix, yield);
            break;
        }
        case LanguageTier::two: {
            std::vector<int> remaining(k + 1, n);
            detail::enumerate_fixed_counts(remaining, k, prefix, yield);
            break;
        }
        case LanguageTier::three:
            detail::enumerate_all_of_length(n * (k + 1), k, prefix, yield);
            break;
    }
}

inline std::vector<MoveString> language(int n, int k, LanguageTier tier, int max_total_length = 18) {
    std::vector<MoveString> out;
    enumerate_language(n, k, tier, [&](const MoveString& w) { out.push_back(w); }, max_total_length);
    return out;
}

// Cardinality without materializing: a power for type III, a multinomial
// for type II, and a lattice-path count (DP over prefix-count vectors)
// for type I.  Throws overflow_error if the count exceeds 64 bits.
inline unsigned long long count_language(int n, int k, LanguageTier tier) {
    if (n < 0 || k < 1) throw std::invalid_argument("need n >= 0 and k >= 1");
    switch (tier) {
        case LanguageTier::three: {
            unsigned long long r = 1;
            for (int i = 0; i < n * (k + 1); ++i) r = detail::checked_mul_u64(r, k + 1);
            return r;
        }
        case LanguageTier::two: {
            // (n(k+1))! / (n!)^{k+1}, built incrementally as a product of
            // binomials to stay in integers.
            unsigned long long r = 1;
            int placed = 0;
            for (int i = 0; i < k + 1; ++i) {
                // choose positions of letter i+1 among the remaining slots
                unsigned long long binom = 1;
                for (int j = 1; j <= n; ++j) {
                    binom = detail::checked_mul_u64(binom, placed + j);
                    binom /= j;  // exact: running product of j consecutive integers
                }
                r = detail::checked_mul_u64(r, binom);
                placed += n;
            }
            return r;
        }
        case LanguageTier::one: {
            std::map<std::vector<int>, unsigned long long> memo;
            std::function<unsigned long long(std::vector<int>&)> walk =
                [&](std::vector<int>& counts) -> unsigned long long {
                bool full = true;
                for (int c : counts)
                    if (c != n) { full = false; break; }
                if (full) return 1;
                auto it = memo.find(counts);
                if (it != memo.end()) return it->second;
                unsigned long long total = 0;
                for (int m = 1; m <= k + 1; ++m) {
                    bool ok = (m == 1) ? counts[0] < n : counts[m - 1] < counts[m - 2];
                    if (!ok) continue;
                    ++counts[m - 1];
                    unsigned long long sub = walk(counts);
                    --counts[m - 1];
                    if (__builtin_add_overflow(total, sub, &total))
                        throw std::overflow_error("count does not fit in 64 bits");
                }
                memo.emplace(counts, total);
                return total;
            };
            std::vector<int> counts(k + 1, 0);
            return walk(counts);
        }
    }
    throw std::logic_error("unreachable");
}

// If w carries all n elements to the output queue, the permutation it
// generates (the output order); otherwise nothing.
inline std::optional<std::vector<int>> generated_permutation(const MoveString& w, int n, int k) {
    SystemState s = apply_string(w, initial_state(n, k));
    if (!is_final(s)) return std::nullopt;
    return s.output;
}

}  // namespace stacksort
