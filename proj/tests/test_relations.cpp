#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "stacksort/language.hpp"
#include "stacksort/relations.hpp"

using namespace stacksort;

namespace {

std::vector<MoveString> strings_of_length(int len, int k) {
    std::vector<MoveString> words{""};
    for (int p = 0; p < len; ++p) {
        std::vector<MoveString> next;
        for (const auto& w : words)
            for (int m = 1; m <= k + 1; ++m) next.push_back(w + char_of_move(m));
        words = std::move(next);
    }
    return words;
}

const std::vector<RewriteRule> base_rules{
    {"13", "31"}, {"1223", "2312"}, {"1232", "2123"}};

}  // namespace

TEST_CASE("probe states") {
    SystemState s = probe_state(1, 2);
    CHECK(s.input == std::vector<int>{1});
    CHECK(s.stacks[0] == std::vector<int>{2});
    CHECK(s.stacks[1] == std::vector<int>{3});
    CHECK(s.output.empty());

    SystemState big = probe_state(16, 2);
    CHECK(all_labels(big).size() == 48);
    CHECK(all_labels(big).back() == 48);  // globally distinct labels
}

TEST_CASE("no string within the length budget goes illegal on a probe state") {
    for (int budget = 1; budget <= 4; ++budget) {
        SystemState s = probe_state(budget, 2);
        for (int len = 0; len <= budget; ++len)
            for (const auto& w : strings_of_length(len, 2))
                REQUIRE_FALSE(apply_string(w, s).illegal);
    }
}

TEST_CASE("equivalence spot checks") {
    CHECK(equivalent("13", "31", 2));
    CHECK(equivalent("1223", "2312", 2));
    CHECK(equivalent("1232", "2123", 2));
    CHECK(equivalent("122233", "223312", 2));
    CHECK(equivalent("112223", "231122", 2));
    CHECK_FALSE(equivalent("12", "21", 2));
    CHECK_FALSE(equivalent("123", "213", 2));
    CHECK(equivalent("", "", 2));
    CHECK_FALSE(equivalent("1", "13", 2));  // unequal letter counts
}

TEST_CASE("equivalence really is action equality on short strings") {
    // Grouping by probe image must match pairwise equivalence.
    for (const auto& u : strings_of_length(3, 2))
        for (const auto& v : strings_of_length(3, 2)) {
            SystemState s = probe_state(3, 2);
            bool same = apply_string(u, s) == apply_string(v, s);
            REQUIRE(equivalent(u, v, 2) == same);
        }
}

TEST_CASE("discovery at length 4 finds exactly the three base rules") {
    auto rules = discover_relations(4, 2);
    CHECK(rules.size() == 3);
    std::set<std::pair<MoveString, MoveString>> found;
    for (const auto& r : rules) found.insert({r.from, r.to});
    CHECK(found == std::set<std::pair<MoveString, MoveString>>{
                       {"13", "31"}, {"1223", "2312"}, {"1232", "2123"}});
}

TEST_CASE("discovery at length 6 adds the two six-letter rules") {
    auto rules = discover_relations(6, 2);
    std::set<std::pair<MoveString, MoveString>> found;
    for (const auto& r : rules) found.insert({r.from, r.to});
    for (const auto& r : base_rules) CHECK(found.count({r.from, r.to}) == 1);
    CHECK(found.count({"112223", "231122"}) == 1);
    CHECK(found.count({"122233", "223312"}) == 1);
    CHECK(verify_rules(rules, 2).ok);
}

TEST_CASE("discovery is worker-count independent") {
    auto one = discover_relations(5, 2, {1});
    auto four = discover_relations(5, 2, {4});
    CHECK(one == four);
}

TEST_CASE("forbidden words from rules") {
    CHECK(derive_forbidden(base_rules) ==
          std::vector<MoveString>{"1223", "1232", "13"});
    std::vector<RewriteRule> extended = base_rules;
    extended.push_back({"112223", "231122"});
    extended.push_back({"122233", "223312"});
    CHECK(derive_forbidden(extended) ==
          std::vector<MoveString>{"112223", "122233", "1223", "1232", "13"});
    CHECK(derive_forbidden({}).empty());
    // substring-minimal pruning
    CHECK(derive_forbidden({{"13", "31"}, {"132", "312"}}) == std::vector<MoveString>{"13"});
}

TEST_CASE("rewriting to the canonical representative") {
    CHECK(rewrite_to_canonical("13", base_rules) == "31");
    CHECK(rewrite_to_canonical("113", base_rules) == "311");
    CHECK(rewrite_to_canonical("1223", base_rules) == "2312");
    // Fixpoint on anything avoiding the forbidden words.
    FactorMatcher avoid(3, derive_forbidden(base_rules));
    for (const auto& w : strings_of_length(5, 2))
        if (!avoid.contains_factor(w)) REQUIRE(rewrite_to_canonical(w, base_rules) == w);
}

TEST_CASE("rewriting preserves the generated permutation on complete strings") {
    for (const auto& w : language(3, 2, LanguageTier::one)) {
        MoveString canon = rewrite_to_canonical(w, base_rules);
        REQUIRE(generated_permutation(canon, 3, 2) == generated_permutation(w, 3, 2));
    }
}

TEST_CASE("rewriting preserves the action on a probe state") {
    SystemState s = probe_state(7, 2);
    for (int len = 0; len <= 7; ++len)
        for (const auto& w : strings_of_length(len, 2)) {
            MoveString canon = rewrite_to_canonical(w, base_rules);
            REQUIRE(apply_string(w, s) == apply_string(canon, s));
        }
}

TEST_CASE("rewriting is lex-increasing and terminates") {
    auto rules = discover_relations(6, 2);
    for (const auto& w : strings_of_length(6, 2)) {
        MoveString canon = rewrite_to_canonical(w, rules);
        REQUIRE(canon.size() == w.size());
        REQUIRE(canon >= w);
        REQUIRE(rewrite_to_canonical(canon, rules) == canon);  // idempotent
    }
}

TEST_CASE("equivalent strings share a canonical form up to length 6") {
    auto rules = discover_relations(6, 2);
    for (int len = 2; len <= 6; ++len) {
        SystemState s = probe_state(len, 2);
        std::map<std::string, MoveString> canon_of_class;
        for (const auto& w : strings_of_length(len, 2)) {
            std::string image = to_text(apply_string(w, s));
            MoveString canon = rewrite_to_canonical(w, rules);
            auto [it, fresh] = canon_of_class.emplace(image, canon);
            if (!fresh) REQUIRE(it->second == canon);
        }
    }
}

TEST_CASE("the base rules miss a longer relation") {
    // 122233 ~ 223312 holds, yet neither side moves under the base rules:
    // the rule set is strictly coarser than full equivalence.
    CHECK(equivalent("122233", "223312", 2));
    CHECK(rewrite_to_canonical("122233", base_rules) == "122233");
    CHECK(rewrite_to_canonical("223312", base_rules) == "223312");
}

TEST_CASE("rule verification") {
    CHECK(verify_rules(base_rules, 2).ok);
    CHECK(verify_rules({}, 2).ok);

    RuleCheck bad = verify_rules({{"12", "21"}}, 2);
    CHECK_FALSE(bad.ok);
    CHECK(bad.failure.find("not equivalent") != std::string::npos);

    CHECK_FALSE(verify_rules({{"31", "13"}}, 2).ok);    // wrong orientation
    CHECK_FALSE(verify_rules({{"13", "131"}}, 2).ok);   // length mismatch
    CHECK_FALSE(verify_rules({{"13", "13"}}, 2).ok);    // identical sides
    CHECK_FALSE(verify_rules({{"14", "41"}, {"13", "31"}}, 2).ok);  // foreign letter
}
