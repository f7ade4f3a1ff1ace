#pragma once

#include <thread>

#include "stacksort/core.hpp"
#include "stacksort/matcher.hpp"

namespace stacksort {

// An oriented relation between move strings that act identically on
// every state: `from` rewrites to the lexicographically larger `to`.
struct RewriteRule {
    MoveString from, to;
    friend bool operator==(const RewriteRule&, const RewriteRule&) = default;
};

struct DiscoveryConfig {
    int workers = 1;
    std::size_t max_strings_per_length = 500'000'000;
};

// A live state loaded so that no string of length <= len_budget can hit
// an empty container: len_budget labels in the input queue and in each
// stack, all distinct, output empty.
inline SystemState probe_state(int len_budget, int k) {
    if (len_budget < 1 || k < 1) throw std::invalid_argument("need len_budget >= 1, k >= 1");
    SystemState s;
    s.stacks.assign(k, {});
    for (int i = 1; i <= len_budget; ++i) s.input.push_back(i);
    for (int j = 0; j < k; ++j)
        for (int i = 1; i <= len_budget; ++i) s.stacks[j].push_back((j + 1) * len_budget + i);
    return s;
}

// Decides u ~ v (identical action on every state): apply both to a probe
// state big enough that neither can go illegal; one state is enough.
inline bool equivalent(const MoveString& u, const MoveString& v, int k) {
    validate_move_string(u, k);
    validate_move_string(v, k);
    if (u == v) return true;
    int budget = std::max<int>({1, static_cast<int>(u.size()), static_cast<int>(v.size())});
    SystemState s = probe_state(budget, k);
    SystemState su = apply_string(u, s);
    SystemState sv = apply_string(v, std::move(s));
    return !su.illegal && su == sv;
}

namespace detail {

// Compact, order-independent key for grouping strings by the state they
// produce.  All containers participate; the probe keeps labels < 256.
inline std::string state_key(const SystemState& s) {
    std::string key;
    key.reserve(s.input.size() + s.output.size() + 3 * s.stacks.size() + 4);
    auto put = [&key](const std::vector<int>& c) {
        key.push_back(static_cast<char>(c.size()));
        for (int v : c) key.push_back(static_cast<char>(v));
    };
    put(s.input);
    for (const auto& st : s.stacks) put(st);
    put(s.output);
    return key;
}

// Enumerates strings of the given length that avoid every factor in
// `avoid`, pairing each with the state it drives the probe state to.
// The walk threads one mutable state through the recursion.
inline void probe_images(int length, int k, const FactorMatcher& avoid,
                         const MoveString& prefix,
                         std::vector<std::pair<std::string, MoveString>>& out,
                         std::size_t cap) {
    SystemState base = probe_state(length, k);
    int ac = avoid.start();
    for (char c : prefix) {
        ac = avoid.step(ac, move_of_char(c));
        if (avoid.matched(ac)) return;
        base = apply_move(move_of_char(c), std::move(base));
    }
    MoveString word = prefix;
    std::function<void(const SystemState&, int)> walk = [&](const SystemState& s, int state) {
        if (static_cast<int>(word.size()) == length) {
            out.emplace_back(state_key(s), word);
            if (out.size() > cap) throw budget_error("relation discovery exceeded string cap");
            return;
        }
        for (int m = 1; m <= k + 1; ++m) {
            int ns = avoid.step(state, m);
            if (avoid.matched(ns)) continue;
            word.push_back(char_of_move(m));
            walk(apply_move(m, s), ns);
            word.pop_back();
        }
    };
    walk(base, ac);
}

}  // namespace detail

// The lex-smaller sides of the rules, pruned so that no word contains
// another as a factor.  Rule sets produced by discover_relations are
// already minimal; pruning makes the operation total on arbitrary input.
inline std::vector<MoveString> derive_forbidden(const std::vector<RewriteRule>& rules) {
    std::vector<MoveString> words;
    words.reserve(rules.size());
    for (const auto& r : rules) words.push_back(r.from);
    std::sort(words.begin(), words.end(), [](const MoveString& a, const MoveString& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::vector<MoveString> minimal;
    for (const auto& w : words) {
        bool redundant = false;
        for (const auto& kept : minimal)
            if (w.find(kept) != MoveString::npos) { redundant = true; break; }
        if (!redundant) minimal.push_back(w);
    }
    std::sort(minimal.begin(), minimal.end());
    return minimal;
}

// Exhaustive relation discovery up to max_len.  For each length L, all
// strings irreducible under the rules found so far are partitioned by
// their image of probe_state(L, k); the lex-greatest member of each
// class becomes the rewrite target of every other member.  A reducible
// string can never contribute: any applicable rule sends it to a
// lex-greater member of its own class, so class maxima are irreducible
// and reducible members are already covered by the earlier rule.
inline std::vector<RewriteRule> discover_relations(int max_len, int k,
                                                   DiscoveryConfig cfg = {}) {
    if (max_len < 2 || k < 1) throw std::invalid_argument("need max_len >= 2, k >= 1");
    if (k + 1 > max_moves_alphabet) throw std::invalid_argument("k + 1 > 9");
    std::vector<RewriteRule> rules;
    std::vector<MoveString> forbidden;

    for (int length = 2; length <= max_len; ++length) {
        FactorMatcher avoid(k + 1, forbidden);
        std::vector<std::pair<std::string, MoveString>> images;

        int workers = std::max(1, cfg.workers);
        if (workers == 1 || length < 4) {
            detail::probe_images(length, k, avoid, "", images, cfg.max_strings_per_length);
        } else {
            // Partition the string space by two-letter prefix; fragments
            // merge in prefix order, so the result is worker-independent.
            std::vector<MoveString> prefixes;
            for (int a = 1; a <= k + 1; ++a)
                for (int b = 1; b <= k + 1; ++b)
                    prefixes.push_back({char_of_move(a), char_of_move(b)});
            std::vector<std::vector<std::pair<std::string, MoveString>>> parts(prefixes.size());
            std::atomic<std::size_t> next{0};
            std::atomic<bool> overflow{false};
            std::vector<std::thread> pool;
            for (int wi = 0; wi < workers; ++wi) {
                pool.emplace_back([&]() {
                    for (std::size_t i = next.fetch_add(1); i < prefixes.size();
                         i = next.fetch_add(1)) {
                        try {
                            detail::probe_images(length, k, avoid, prefixes[i], parts[i],
                                                 cfg.max_strings_per_length / prefixes.size());
                        } catch (const budget_error&) {
                            overflow.store(true);
                            return;
                        }
                    }
                });
            }
            for (auto& t : pool) t.join();
            if (overflow.load()) throw budget_error("relation discovery exceeded string cap");
            for (auto& part : parts)
                images.insert(images.end(), std::make_move_iterator(part.begin()),
                              std::make_move_iterator(part.end()));
        }

        std::sort(images.begin(), images.end());
        // Within a group the last entry is the lex-max member: the target.
        struct Group {
            MoveString target;
            std::size_t begin, end;
        };
        std::vector<Group> groups;
        for (std::size_t i = 0; i < images.size();) {
            std::size_t j = i;
            while (j < images.size() && images[j].first == images[i].first) ++j;
            if (j - i >= 2) groups.push_back({images[j - 1].second, i, j});
            i = j;
        }
        std::sort(groups.begin(), groups.end(),
                  [](const Group& a, const Group& b) { return a.target < b.target; });
        for (const auto& g : groups)
            for (std::size_t i = g.begin; i + 1 < g.end; ++i)
                rules.push_back({images[i].second, g.target});
        forbidden = derive_forbidden(rules);
    }
    return rules;
}

// Leftmost-then-longest rewriting to the canonical (lex-maximal)
// representative.  Each step is strictly lex-increasing at fixed length,
// so the loop terminates.
inline MoveString rewrite_to_canonical(MoveString w, std::vector<RewriteRule> rules) {
    std::sort(rules.begin(), rules.end(), [](const RewriteRule& a, const RewriteRule& b) {
        return a.from.size() != b.from.size() ? a.from.size() > b.from.size()
                                              : a.from < b.from;
    });
    bool changed = true;
    while (changed) {
        changed = false;
        std::size_t best_pos = MoveString::npos;
        const RewriteRule* best = nullptr;
        for (const auto& r : rules) {
            std::size_t pos = w.find(r.from);
            if (pos == MoveString::npos) continue;
            if (pos < best_pos ||
                (pos == best_pos && r.from.size() > best->from.size())) {
                best_pos = pos;
                best = &r;
            }
        }
        if (best) {
            w.replace(best_pos, best->from.size(), best->to);
            changed = true;
        }
    }
    return w;
}

struct RuleCheck {
    bool ok = true;
    std::string failure;  // first failing rule and the reason
};

// Audits a rule set against every RewriteRule invariant, including the
// semantic one: from ~ to on a probe state.
inline RuleCheck verify_rules(const std::vector<RewriteRule>& rules, int k) {
    auto fail = [](const RewriteRule& r, const std::string& why) {
        return RuleCheck{false, r.from + " -> " + r.to + ": " + why};
    };
    for (const auto& r : rules) {
        try {
            validate_move_string(r.from, k);
            validate_move_string(r.to, k);
        } catch (const std::invalid_argument& e) {
            return fail(r, e.what());
        }
        if (r.from.size() != r.to.size()) return fail(r, "sides differ in length");
        if (r.from == r.to) return fail(r, "sides are identical");
        if (r.from > r.to) return fail(r, "not oriented lex-increasing");
        for (int i = 1; i <= k + 1; ++i)
            if (letter_count(r.from, i) != letter_count(r.to, i))
                return fail(r, "per-letter counts differ");
        if (!equivalent(r.from, r.to, k)) return fail(r, "sides are not equivalent");
    }
    return {};
}

}  // namespace stacksort
