#pragma once

#include <array>
#include <queue>

#include "stacksort/core.hpp"

namespace stacksort {

// Aho-Corasick automaton specialized to one question: does a word contain
// any member of a fixed factor set?  Matching states collapse into a
// single absorbing sink, so a scan can stop at the first hit and an
// enumerator can prune the whole subtree below it.
class FactorMatcher {
  public:
    FactorMatcher(int alphabet_size, const std::vector<MoveString>& words)
        : alpha_(alphabet_size) {
        if (alpha_ < 1 || alpha_ > max_moves_alphabet)
            throw std::invalid_argument("alphabet size out of range");
        next_.push_back({});  // root
        next_[0].fill(-1);
        for (const auto& w : words) {
            if (w.empty()) throw std::invalid_argument("empty forbidden word");
            int s = 0;
            for (char c : w) {
                int a = move_of_char(c) - 1;
                if (a < 0 || a >= alpha_)
                    throw std::invalid_argument("forbidden word uses a foreign letter");
                if (next_[s][a] < 0) {
                    next_[s][a] = static_cast<int>(next_.size());
                    next_.push_back({});
                    next_.back().fill(-1);
                }
                s = next_[s][a];
            }
            terminal_.resize(next_.size(), false);
            terminal_[s] = true;
        }
        terminal_.resize(next_.size(), false);
        build_links();
    }

    int start() const { return 0; }
    int sink() const { return sink_; }
    bool matched(int state) const { return state == sink_; }

    int step(int state, int letter) const { return next_[state][letter - 1]; }

    bool contains_factor(const MoveString& w) const {
        int s = 0;
        for (char c : w) {
            s = next_[s][move_of_char(c) - 1];
            if (s == sink_) return true;
        }
        return false;
    }

    std::size_t state_count() const { return next_.size(); }

  private:
    void build_links() {
        sink_ = static_cast<int>(next_.size());
        next_.push_back({});
        next_[sink_].fill(sink_);
        terminal_.push_back(true);

        std::vector<int> fail(next_.size(), 0);
        std::queue<int> bfs;
        for (int a = 0; a < alpha_; ++a) {
            int t = next_[0][a];
            if (t < 0) {
                next_[0][a] = 0;
            } else {
                fail[t] = 0;
                bfs.push(t);
            }
        }
        while (!bfs.empty()) {
            int s = bfs.front();
            bfs.pop();
            if (terminal_[fail[s]]) terminal_[s] = true;
            for (int a = 0; a < alpha_; ++a) {
                int t = next_[s][a];
                if (t < 0) {
                    next_[s][a] = terminal_[s] ? sink_ : next_[fail[s]][a];
                } else {
                    fail[t] = next_[fail[s]][a];
                    bfs.push(t);
                }
            }
            if (terminal_[s])
                for (int a = 0; a < alpha_; ++a) next_[s][a] = sink_;
        }
        // Redirect every edge into a terminal state straight to the sink.
        for (auto& row : next_)
            for (int a = 0; a < alpha_; ++a)
                if (terminal_[row[a]]) row[a] = sink_;
    }

    int alpha_;
    int sink_ = 0;
    std::vector<std::array<int, max_moves_alphabet>> next_;
    std::vector<bool> terminal_;
};

}  // namespace stacksort
