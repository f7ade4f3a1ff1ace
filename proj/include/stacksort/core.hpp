#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace stacksort {

// A move string is a word over the move alphabet {m_1, ..., m_{k+1}},
// written as a digit string: "1213" means m_1 m_2 m_1 m_3.  The digit
// encoding restricts systems to k + 1 <= 9.
using MoveString = std::string;

constexpr int max_moves_alphabet = 9;

// Thrown when a search or enumeration exceeds its configured resource cap.
// Distinct from a negative answer: callers must never confuse "ran out of
// budget" with "does not exist".
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline int move_of_char(char c) { return c - '0'; }
inline char char_of_move(int m) { return static_cast<char>('0' + m); }

inline void validate_move_string(const MoveString& w, int k) {
    if (k + 1 > max_moves_alphabet)
        throw std::invalid_argument("digit encoding supports at most k + 1 = 9 moves");
    for (char c : w) {
        int m = move_of_char(c);
        if (m < 1 || m > k + 1)
            throw std::invalid_argument("move index out of range in \"" + w + "\"");
    }
}

// Number of occurrences of m_i in w.
inline int letter_count(const MoveString& w, int i) {
    return static_cast<int>(std::count(w.begin(), w.end(), char_of_move(i)));
}

// State of a system of k stacks in series between an input queue and an
// output queue.  Element labels are positive integers, distinct within a
// state.  The illegal state is absorbing and carries no content, so all
// illegal states compare equal regardless of k.
struct SystemState {
    bool illegal = false;
    std::vector<int> input;                // front of queue first
    std::vector<std::vector<int>> stacks;  // bottom of stack first
    std::vector<int> output;               // front of queue first

    int stack_count() const { return static_cast<int>(stacks.size()); }
    friend bool operator==(const SystemState&, const SystemState&) = default;
};

inline SystemState illegal_state() {
    SystemState s;
    s.illegal = true;
    return s;
}

inline void validate_permutation(const std::vector<int>& pi) {
    std::vector<bool> seen(pi.size(), false);
    for (int v : pi) {
        if (v < 1 || v > static_cast<int>(pi.size()) || seen[v - 1])
            throw std::invalid_argument("not a permutation of 1..n");
        seen[v - 1] = true;
    }
}

// Initial state s_pi: input queue holds pi(1), ..., pi(n) front to back.
inline SystemState state_of_permutation(const std::vector<int>& pi, int k) {
    if (k < 0) throw std::invalid_argument("negative stack count");
    validate_permutation(pi);
    SystemState s;
    s.input = pi;
    s.stacks.assign(k, {});
    return s;
}

// Final state t_pi: output queue holds pi(1), ..., pi(n) front to back.
inline SystemState final_state_of_permutation(const std::vector<int>& pi, int k) {
    if (k < 0) throw std::invalid_argument("negative stack count");
    validate_permutation(pi);
    SystemState s;
    s.stacks.assign(k, {});
    s.output = pi;
    return s;
}

inline std::vector<int> identity_permutation(int n) {
    std::vector<int> pi(n);
    std::iota(pi.begin(), pi.end(), 1);
    return pi;
}

// I(n, k): elements 1..n in the input queue in sorted order.
inline SystemState initial_state(int n, int k) {
    return state_of_permutation(identity_permutation(n), k);
}

// F(n, k): elements 1..n in the output queue in sorted order.
inline SystemState final_state(int n, int k) {
    return final_state_of_permutation(identity_permutation(n), k);
}

// One move: m_1 dequeues from the input queue onto stack 1, m_i pops
// stack i-1 onto stack i, m_{k+1} pops stack k onto the output queue.
// Moving from an empty container yields the illegal state; the illegal
// state absorbs every move.
inline SystemState apply_move(int move, SystemState s) {
    if (s.illegal) return s;
    const int k = s.stack_count();
    if (move < 1 || move > k + 1)
        throw std::invalid_argument("move index out of range for k = " + std::to_string(k));
    int x;
    if (move == 1) {
        if (s.input.empty()) return illegal_state();
        x = s.input.front();
        s.input.erase(s.input.begin());
    } else {
        auto& src = s.stacks[move - 2];
        if (src.empty()) return illegal_state();
        x = src.back();
        src.pop_back();
    }
    if (move == k + 1)
        s.output.push_back(x);
    else
        s.stacks[move - 1].push_back(x);
    return s;
}

// w * s: left-to-right action of a move string on a state.
inline SystemState apply_string(const MoveString& w, SystemState s) {
    for (char c : w) {
        s = apply_move(move_of_char(c), std::move(s));
        if (s.illegal) return s;  // absorbing
    }
    return s;
}

// A state is final when every element sits in the output queue.
inline bool is_final(const SystemState& s) {
    if (s.illegal || !s.input.empty()) return false;
    for (const auto& st : s.stacks)
        if (!st.empty()) return false;
    return true;
}

inline bool is_sorted_final(const SystemState& s) {
    return is_final(s) && std::is_sorted(s.output.begin(), s.output.end()) &&
           (s.output.empty() || s.output.front() == 1);
}

// Multiset of labels across all containers, sorted.  Empty for illegal.
inline std::vector<int> all_labels(const SystemState& s) {
    std::vector<int> labels;
    if (s.illegal) return labels;
    labels.insert(labels.end(), s.input.begin(), s.input.end());
    for (const auto& st : s.stacks) labels.insert(labels.end(), st.begin(), st.end());
    labels.insert(labels.end(), s.output.begin(), s.output.end());
    std::sort(labels.begin(), labels.end());
    return labels;
}

namespace detail {
inline void append_container(std::string& out, const std::vector<int>& c) {
    out += '[';
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(c[i]);
    }
    out += ']';
}
}  // namespace detail

// Text form: `in:[4,2,3,1] s1:[] s2:[] out:[]`, or `illegal`.
inline std::string to_text(const SystemState& s) {
    if (s.illegal) return "illegal";
    std::string out = "in:";
    detail::append_container(out, s.input);
    for (int i = 0; i < s.stack_count(); ++i) {
        out += " s" + std::to_string(i + 1) + ":";
        detail::append_container(out, s.stacks[i]);
    }
    out += " out:";
    detail::append_container(out, s.output);
    return out;
}

}  // namespace stacksort
