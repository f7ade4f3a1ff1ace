#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "stacksort/permutations.hpp"

using namespace stacksort;

namespace {

unsigned long long catalan(int n) {
    std::vector<unsigned long long> c{1};
    for (int i = 1; i <= n; ++i) {
        unsigned long long v = 0;
        for (int j = 0; j < i; ++j) v += c[j] * c[i - 1 - j];
        c.push_back(v);
    }
    return c[n];
}

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> pi = identity_permutation(n);
    do out.push_back(pi);
    while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

// Positions i < j < k with pi(k) < pi(i) < pi(j): the pattern blocking
// single-stack sorting.
bool contains_231(const std::vector<int>& pi) {
    int n = static_cast<int>(pi.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (pi[k] < pi[i] && pi[i] < pi[j]) return true;
    return false;
}

std::vector<int> inverse(const std::vector<int>& pi) {
    std::vector<int> inv(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) inv[pi[i] - 1] = static_cast<int>(i) + 1;
    return inv;
}

}  // namespace

TEST_CASE("single-stack counts are Catalan") {
    for (int n = 0; n <= 6; ++n) CHECK(generable_perms(n, 1).size() == catalan(n));
    CHECK(generable_perms(4, 1).size() == 14);
}

TEST_CASE("two stacks generate all of S_4") {
    PermSet p = generable_perms(4, 2);
    CHECK(p.size() == 24);
    for (const auto& pi : all_permutations(4)) CHECK(p.contains(pi));
}

TEST_CASE("sortability") {
    for (int k = 1; k <= 3; ++k) CHECK(is_sortable({1, 2, 3, 4}, k));
    CHECK(is_sortable({}, 1));
    CHECK_FALSE(is_sortable({2, 3, 1}, 1));
    CHECK(is_sortable({3, 1, 2}, 1));
    CHECK(is_sortable({2, 3, 1}, 2));
    for (const auto& pi : all_permutations(5)) CHECK(is_sortable(pi, 2));  // k_5 = 2
}

TEST_CASE("single-stack sortability matches the pattern characterization") {
    for (int n = 0; n <= 6; ++n)
        for (const auto& pi : all_permutations(n))
            REQUIRE(is_sortable(pi, 1) == !contains_231(pi));
}

TEST_CASE("sortable iff the inverse is generable") {
    for (int n = 0; n <= 5; ++n)
        for (int k = 1; k <= 2; ++k) {
            PermSet p = generable_perms(n, k);
            for (const auto& pi : all_permutations(n))
                REQUIRE(is_sortable(pi, k) == p.contains(inverse(pi)));
        }
}

TEST_CASE("generable sets nest and respect the 4^{nk} bound") {
    for (int n = 0; n <= 5; ++n) {
        PermSet p1 = generable_perms(n, 1);
        PermSet p2 = generable_perms(n, 2);
        for (const auto& pi : p1.members) REQUIRE(p2.contains(pi));
        CHECK(static_cast<double>(p1.size()) <= std::pow(4.0, n));
        CHECK(static_cast<double>(p2.size()) <= std::pow(4.0, 2 * n));
    }
}

TEST_CASE("a pair of stacks is two single stacks composed") {
    for (int n = 0; n <= 4; ++n) {
        PermSet p1 = generable_perms(n, 1);
        CHECK(compose_sets(p1, p1).members == generable_perms(n, 2).members);
    }
}

TEST_CASE("composing with the identity set") {
    PermSet ident{3, {{1, 2, 3}}};
    PermSet b = generable_perms(3, 1);
    CHECK(compose_sets(ident, b).members == b.members);
    CHECK(compose_sets(b, ident).members == b.members);
}

TEST_CASE("k_n for small n") {
    const int expected[] = {0, 0, 1, 2, 2, 2, 2};
    for (int n = 0; n <= 6; ++n) CHECK(compute_kn(n).k_n == expected[n]);
}

TEST_CASE("parallel k_n agrees with sequential") {
    CHECK(compute_kn(5, {}, 2).k_n == 2);
}

TEST_CASE("budget exhaustion is loud") {
    CHECK_THROWS_AS(is_sortable({5, 1, 4, 2, 6, 3, 7, 8}, 2, {10}), budget_error);
    CHECK_THROWS_AS(generable_perms(6, 2, {10}), budget_error);
}

TEST_CASE("interleave merges per-stack strings") {
    CHECK(interleave({"1122"}) == "1122");  // k = 1: nothing to merge
    MoveString merged = interleave({"1122", "2233"});
    CHECK(is_n_complete(merged, 2, 2));
    // reversal then reversal: the identity
    CHECK(generated_permutation(merged, 2, 2) == std::vector<int>{1, 2});
}

TEST_CASE("interleave realizes the composition of the per-stack actions") {
    for (int n = 2; n <= 3; ++n) {
        auto singles = language(n, 1, LanguageTier::one);  // over letters 1, 2
        for (const auto& w1 : singles)
            for (const auto& w2_raw : singles) {
                MoveString w2;
                for (char c : w2_raw) w2 += char_of_move(move_of_char(c) + 1);
                MoveString merged = interleave({w1, w2});
                REQUIRE(is_n_complete(merged, n, 2));
                auto sigma1 = generated_permutation(w1, n, 1);
                auto sigma2 = generated_permutation(w2_raw, n, 1);
                REQUIRE(sigma1.has_value());
                REQUIRE(sigma2.has_value());
                // Stack 2 consumes stack 1's output stream, so the merged
                // system generates sigma1 applied after sigma2.
                std::vector<int> composed(n);
                for (int i = 0; i < n; ++i) composed[i] = (*sigma1)[(*sigma2)[i] - 1];
                REQUIRE(generated_permutation(merged, n, 2) == composed);
            }
    }
}

TEST_CASE("interleave rejects malformed inputs") {
    CHECK_THROWS_AS(interleave({"2211", "2233"}), std::invalid_argument);  // pops first
    CHECK_THROWS_AS(interleave({"1122", "2323", "4343"}), std::invalid_argument);
    CHECK_THROWS_AS(interleave({"11", "23"}), std::invalid_argument);
}
