#pragma once

#include <fstream>

#include <json.hpp>

#include "stacksort/asymptotics.hpp"
#include "stacksort/core.hpp"
#include "stacksort/optimize.hpp"
#include "stacksort/polynomial.hpp"
#include "stacksort/relations.hpp"

namespace stacksort {

using nlohmann::json;

inline json state_to_json(const SystemState& s) {
    if (s.illegal) return json{{"illegal", true}};
    json stacks = json::array();
    for (const auto& st : s.stacks) stacks.push_back(st);
    return json{{"illegal", false}, {"input", s.input}, {"stacks", stacks}, {"output", s.output}};
}

// Rule files: {"header": {"k", "max_len", "convention"}, "rules": [{"from", "to"}]}.
inline json rules_to_json(const std::vector<RewriteRule>& rules, int k, int max_len,
                          const std::string& convention) {
    json arr = json::array();
    for (const auto& r : rules) arr.push_back({{"from", r.from}, {"to", r.to}});
    return json{{"header", {{"k", k}, {"max_len", max_len}, {"convention", convention}}},
                {"rules", arr}};
}

inline std::vector<RewriteRule> rules_from_json(const json& j) {
    std::vector<RewriteRule> rules;
    for (const auto& r : j.at("rules"))
        rules.push_back({r.at("from").get<std::string>(), r.at("to").get<std::string>()});
    return rules;
}

inline json forbidden_to_json(const std::vector<MoveString>& words, int k) {
    return json{{"k", k}, {"words", words}};
}

inline std::vector<MoveString> forbidden_from_json(const json& j) {
    return j.at("words").get<std::vector<MoveString>>();
}

// Polynomials: arrays of {"exponents", "coeff"} in exponent-vector order
// (the term map already iterates lexicographically).
inline json poly_to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms) terms.push_back({{"exponents", e}, {"coeff", c}});
    return json{{"arity", p.arity}, {"terms", terms}};
}

inline MultiPoly poly_from_json(const json& j) {
    MultiPoly p = MultiPoly::zero(j.at("arity").get<int>());
    for (const auto& t : j.at("terms"))
        p.add_term(t.at("exponents").get<Exponents>(), t.at("coeff").get<long long>());
    return p;
}

inline json gf_to_json(const RationalGF& gf) {
    return json{{"numerator", poly_to_json(gf.num)}, {"denominator", poly_to_json(gf.den)}};
}

inline RationalGF gf_from_json(const json& j) {
    return {poly_from_json(j.at("numerator")), poly_from_json(j.at("denominator"))};
}

inline json growth_to_json(const GrowthReport& g, const MultiPoly& denominator) {
    return json{{"denominator", poly_to_json(denominator)},
                {"lambda_min", g.lambda_min},
                {"per_string_growth", g.per_string_growth},
                {"b", g.per_element_growth}};
}

inline json bound_to_json(const BoundReport& b) {
    return json{{"ell", b.group_size}, {"b", b.growth}, {"constant", b.constant}};
}

inline json optimum_to_json(const OptimizationResult& r, const WeightAssignment& weights) {
    return json{{"point", r.point},
                {"multiplicity", r.multiplicity},
                {"objective", r.objective},
                {"constraint_residual", r.constraint_residual},
                {"stationarity_residual", r.stationarity_residual},
                {"weights", weights}};
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return json::parse(in);
}

}  // namespace stacksort
