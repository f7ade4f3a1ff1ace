#include <catch2/catch_amalgamated.hpp>

#include "stacksort/asymptotics.hpp"

using namespace stacksort;

namespace {

MultiPoly univariate(std::initializer_list<std::pair<int, long long>> terms) {
    MultiPoly p = MultiPoly::zero(1);
    for (auto [deg, c] : terms) p.add_term({deg}, c);
    return p;
}

// 1 - 3x + x^2 + 2x^4
const MultiPoly den_base = univariate({{0, 1}, {1, -3}, {2, 1}, {4, 2}});
// 1 - 3x + x^2 + 2x^4 + 2x^6
const MultiPoly den_extended = univariate({{0, 1}, {1, -3}, {2, 1}, {4, 2}, {6, 2}});
// 1 - 2x + 2x^6
const MultiPoly den_121 = univariate({{0, 1}, {1, -2}, {6, 2}});

RationalGF over_one(const MultiPoly& den) { return {MultiPoly::constant(1, 1), den}; }

}  // namespace

TEST_CASE("smallest positive roots") {
    CHECK(min_positive_root(univariate({{0, 1}, {1, -2}})) == Catch::Approx(0.5).margin(1e-12));
    CHECK(min_positive_root(den_base) == Catch::Approx(0.40671).margin(1e-4));
    CHECK(min_positive_root(den_extended) == Catch::Approx(0.41278).margin(1e-4));
}

TEST_CASE("root residuals are tiny and the bracket brackets") {
    for (const MultiPoly* p : {&den_base, &den_extended, &den_121}) {
        double root = min_positive_root(*p);
        double val = p->evaluate(std::vector<double>{root});
        CHECK(std::fabs(val) < 1e-10);
        double left = p->evaluate(std::vector<double>{root - 1e-6});
        double right = p->evaluate(std::vector<double>{root + 1e-6});
        CHECK(left > 0);
        CHECK(right < 0);
    }
}

TEST_CASE("roots outside the unit interval are an error") {
    CHECK_THROWS_AS(min_positive_root(univariate({{0, 1}, {1, -1}, {2, 1}})),
                    std::domain_error);  // no real root in (0, 1]
    CHECK_THROWS_AS(min_positive_root(univariate({{0, -1}, {1, 2}})), std::invalid_argument);
}

TEST_CASE("growth per element") {
    GrowthReport base = growth_per_element(over_one(den_base), 3);
    CHECK(base.per_element_growth == Catch::Approx(14.864).epsilon(1e-3));
    CHECK(base.per_string_growth == Catch::Approx(1.0 / base.lambda_min));

    GrowthReport extended = growth_per_element(over_one(den_extended), 3);
    CHECK(extended.per_element_growth == Catch::Approx(14.218).epsilon(1e-3));

    GrowthReport weighted = growth_per_element(over_one(den_121), 4);
    CHECK(weighted.per_element_growth == Catch::Approx(13.708).epsilon(1e-3));

    CHECK(base.lambda_min > 0);
    CHECK(base.lambda_min < 1);
    CHECK(base.per_element_growth > 1);
}

TEST_CASE("bound constants") {
    CHECK(bound_constant(1, 4).constant == Catch::Approx(0.5).margin(1e-12));
    CHECK(bound_constant(2, 14.864).constant == Catch::Approx(0.51364).margin(1e-5));
    CHECK(bound_constant(2, 14.218).constant == Catch::Approx(0.52224).margin(1e-5));
    CHECK(bound_constant(2, 13.708).constant == Catch::Approx(0.52953).margin(1e-5));
}

TEST_CASE("bound constant chained from the actual roots") {
    double b_base = growth_per_element(over_one(den_base), 3).per_element_growth;
    CHECK(bound_constant(2, b_base).constant == Catch::Approx(0.51364).margin(1e-4));
    double b_ext = growth_per_element(over_one(den_extended), 3).per_element_growth;
    CHECK(bound_constant(2, b_ext).constant == Catch::Approx(0.52224).margin(1e-4));
    double b_121 = growth_per_element(over_one(den_121), 4).per_element_growth;
    CHECK(bound_constant(2, b_121).constant == Catch::Approx(0.52953).margin(1e-4));
}

TEST_CASE("bound constant is monotone in b and linear in ell") {
    double prev = bound_constant(2, 2.0).constant;
    for (double b : {4.0, 8.0, 14.0, 20.0}) {
        double cur = bound_constant(2, b).constant;
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK(bound_constant(4, 14.864).constant ==
          Catch::Approx(2 * bound_constant(2, 14.864).constant));
}

TEST_CASE("identical inputs give bit-identical results") {
    double a = min_positive_root(den_base);
    double b = min_positive_root(den_base);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    GrowthReport g1 = growth_per_element(over_one(den_extended), 3);
    GrowthReport g2 = growth_per_element(over_one(den_extended), 3);
    CHECK(std::memcmp(&g1, &g2, sizeof g1) == 0);
}

TEST_CASE("rejects bad growth inputs") {
    CHECK_THROWS_AS(bound_constant(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(bound_constant(2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(growth_per_element(over_one(den_base), 0), std::invalid_argument);
}
