#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "stacksort/core.hpp"

using namespace stacksort;

TEST_CASE("initial and final states") {
    SystemState empty = initial_state(0, 2);
    CHECK(empty.input.empty());
    CHECK(empty.stacks.size() == 2);
    CHECK(empty.output.empty());
    CHECK(is_final(empty));

    SystemState s = initial_state(4, 2);
    CHECK(s.input == std::vector<int>{1, 2, 3, 4});
    CHECK(s.stacks == std::vector<std::vector<int>>{{}, {}});

    SystemState one_stack = initial_state(3, 1);
    CHECK(one_stack.input == std::vector<int>{1, 2, 3});
    CHECK(one_stack.stacks.size() == 1);

    CHECK(final_state(3, 2).output == std::vector<int>{1, 2, 3});
}

TEST_CASE("states from permutations") {
    CHECK(state_of_permutation({1, 2, 3, 4}, 2) == initial_state(4, 2));
    CHECK(state_of_permutation({4, 2, 3, 1}, 2).input == std::vector<int>{4, 2, 3, 1});
    CHECK(state_of_permutation({}, 1) == initial_state(0, 1));
    CHECK(final_state_of_permutation({2, 1}, 1).output == std::vector<int>{2, 1});
    CHECK(final_state_of_permutation({1, 2, 3}, 2) == final_state(3, 2));
    CHECK_THROWS_AS(state_of_permutation({1, 1}, 1), std::invalid_argument);
    CHECK_THROWS_AS(state_of_permutation({2, 3}, 1), std::invalid_argument);
}

TEST_CASE("single moves") {
    SystemState s = apply_move(1, initial_state(1, 1));
    CHECK(s.input.empty());
    CHECK(s.stacks[0] == std::vector<int>{1});

    CHECK(apply_move(2, initial_state(1, 1)).illegal);  // pop from empty stack

    SystemState done = apply_move(2, s);
    CHECK(done.output == std::vector<int>{1});
    CHECK(is_sorted_final(done));

    CHECK(apply_move(1, initial_state(0, 1)).illegal);  // dequeue from empty input
    CHECK_THROWS_AS(apply_move(3, initial_state(1, 1)), std::invalid_argument);
}

TEST_CASE("zero-stack system passes elements straight through") {
    SystemState s = initial_state(2, 0);
    s = apply_move(1, s);
    s = apply_move(1, s);
    CHECK(s.output == std::vector<int>{1, 2});
    CHECK(is_sorted_final(s));
}

TEST_CASE("move strings act by folding") {
    // The 12-move sorting of 4,2,3,1 on two stacks.
    SystemState s = apply_string("121121232333", state_of_permutation({4, 2, 3, 1}, 2));
    CHECK(s == final_state(4, 2));

    SystemState probe = state_of_permutation({2, 1}, 1);
    CHECK(apply_string("", probe) == probe);

    CHECK(apply_string("13", initial_state(1, 2)).illegal);  // stack 2 empty when m3 fires
}

TEST_CASE("illegal state absorbs every string") {
    for (const MoveString w : {"", "1", "123", "332211"})
        CHECK(apply_string(w, illegal_state()).illegal);
}

namespace {

// Every state with m labelled elements spread over input, k stacks and
// output: pick an ordering of 1..m and cut it into k + 2 segments.
std::vector<SystemState> states_with_up_to(int max_elements, int k) {
    std::vector<SystemState> states;
    for (int m = 0; m <= max_elements; ++m) {
        std::vector<int> order(m);
        std::iota(order.begin(), order.end(), 1);
        do {
            std::vector<int> cuts(k + 1, 0);
            std::function<void(int, int)> choose = [&](int idx, int from) {
                if (idx == k + 1) {
                    SystemState s;
                    int pos = 0;
                    auto take = [&](int upto) {
                        std::vector<int> seg(order.begin() + pos, order.begin() + upto);
                        pos = upto;
                        return seg;
                    };
                    s.input = take(cuts[0]);
                    for (int i = 0; i < k; ++i) s.stacks.push_back(take(cuts[i + 1]));
                    s.output = std::vector<int>(order.begin() + pos, order.end());
                    states.push_back(std::move(s));
                    return;
                }
                for (int c = from; c <= m; ++c) {
                    cuts[idx] = c;
                    choose(idx + 1, c);
                }
            };
            choose(0, 0);
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return states;
}

std::vector<MoveString> strings_up_to(int max_len, int k) {
    std::vector<MoveString> all{""};
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (static_cast<int>(all[i].size()) >= max_len) continue;
        for (int m = 1; m <= k + 1; ++m) all.push_back(all[i] + char_of_move(m));
    }
    return all;
}

}  // namespace

TEST_CASE("monoid action law on bounded states") {
    auto states = states_with_up_to(3, 2);
    auto words = strings_up_to(3, 2);
    for (const auto& u : words)
        for (const auto& v : words)
            for (const auto& s : states)
                REQUIRE(apply_string(u + v, s) == apply_string(v, apply_string(u, s)));
}

TEST_CASE("monoid action law, longer words on four-element states") {
    auto states = states_with_up_to(4, 2);
    // Deterministic sample of longer pairs.
    std::mt19937 rng(20240817);
    auto random_word = [&](int len) {
        MoveString w;
        for (int i = 0; i < len; ++i) w += char_of_move(1 + rng() % 3);
        return w;
    };
    for (int trial = 0; trial < 400; ++trial) {
        MoveString u = random_word(1 + rng() % 6);
        MoveString v = random_word(1 + rng() % 6);
        const auto& s = states[rng() % states.size()];
        REQUIRE(apply_string(u + v, s) == apply_string(v, apply_string(u, s)));
    }
}

TEST_CASE("element conservation along live trajectories") {
    std::vector<int> everything{1, 2, 3, 4, 5};
    for (const auto& w : strings_up_to(5, 2)) {
        SystemState s = apply_string(w, initial_state(5, 2));
        if (!s.illegal) CHECK(all_labels(s) == everything);
    }
}

TEST_CASE("state text form") {
    SystemState s = apply_string("1211", state_of_permutation({4, 2, 3, 1}, 2));
    CHECK(to_text(s) == "in:[1] s1:[2,3] s2:[4] out:[]");
    CHECK(to_text(illegal_state()) == "illegal");
    CHECK(to_text(initial_state(0, 1)) == "in:[] s1:[] out:[]");
}

TEST_CASE("move string validation") {
    CHECK_NOTHROW(validate_move_string("123", 2));
    CHECK_THROWS_AS(validate_move_string("124", 2), std::invalid_argument);
    CHECK_THROWS_AS(validate_move_string("103", 2), std::invalid_argument);
    CHECK(letter_count("121121232333", 1) == 4);
    CHECK(letter_count("121121232333", 2) == 4);
    CHECK(letter_count("121121232333", 3) == 4);
}
