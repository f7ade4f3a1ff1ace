#pragma once

#include <filesystem>

#include "stacksort/cluster.hpp"
#include "stacksort/io.hpp"
#include "stacksort/permutations.hpp"

namespace stacksort {

inline const char* discovery_convention =
    "lengths ascending; classes keyed by probe-state image; target = lex-max member; "
    "a member emits a rule only if irreducible by earlier rules";

struct PipelineConfig {
    int k = 2;
    int max_relation_len = 4;
    bool optimize = false;        // add continuous + integer-weight paths
    bool identify_outer = false;  // tie the weight of m_{k+1} to that of m_1
    int max_weight = 8;
    int workers = 1;
    SearchBudget budget;
    std::string rules_file;  // reuse a rule file instead of discovering
    std::string out_dir;     // artifact directory; empty = no files
};

// Full lower-bound pipeline: relations -> forbidden words -> cluster
// generating function -> (optional) weight optimization -> growth ->
// bound constant.  Every intermediate artifact is persisted as soon as
// it exists, so a failing stage leaves its inputs on disk.
inline json run_bound_pipeline(const PipelineConfig& cfg) {
    if (cfg.k < 1 || cfg.k + 1 > max_moves_alphabet)
        throw std::invalid_argument("need 1 <= k <= 8");
    const bool persist = !cfg.out_dir.empty();
    if (persist) std::filesystem::create_directories(cfg.out_dir);
    auto artifact = [&](const std::string& name, const json& j) {
        if (persist) write_json_file(cfg.out_dir + "/" + name, j);
    };
    auto stage = [](const std::string& name, auto&& fn) {
        try {
            return fn();
        } catch (const budget_error&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("stage " + name + ": " + e.what());
        }
    };

    std::vector<RewriteRule> rules = stage("relations", [&] {
        if (!cfg.rules_file.empty()) return rules_from_json(read_json_file(cfg.rules_file));
        return discover_relations(cfg.max_relation_len, cfg.k, {cfg.workers});
    });
    artifact("rules.json",
             rules_to_json(rules, cfg.k, cfg.max_relation_len, discovery_convention));
    stage("verify", [&] {
        RuleCheck check = verify_rules(rules, cfg.k);
        if (!check.ok) throw std::runtime_error("unsound rule " + check.failure);
        return 0;
    });

    std::vector<MoveString> forbidden = derive_forbidden(rules);
    artifact("forbidden.json", forbidden_to_json(forbidden, cfg.k));

    RationalGF gf = stage("cluster", [&] { return cluster_gf_per_letter(cfg.k + 1, forbidden); });
    artifact("gf.json", gf_to_json(gf));

    json report;
    report["k"] = cfg.k;
    report["ell"] = cfg.k;
    report["relation_count"] = rules.size();
    report["forbidden_count"] = forbidden.size();

    // Uniform weights: every letter counts 1, growth per element over
    // k + 1 letters.
    stage("uniform-growth", [&] {
        WeightAssignment ones(cfg.k + 1, 1);
        RationalGF uni{gf.num.substitute_powers(ones), gf.den.substitute_powers(ones)};
        GrowthReport growth = growth_per_element(uni, cfg.k + 1);
        BoundReport bound = bound_constant(cfg.k, growth.per_element_growth);
        report["uniform"] = growth_to_json(growth, uni.den);
        report["uniform"]["bound"] = bound_to_json(bound);
        return 0;
    });

    if (cfg.optimize) {
        MultiPoly den = gf.den;
        std::vector<int> var_map(cfg.k + 1);
        std::vector<int> multiplicity;
        if (cfg.identify_outer) {
            for (int i = 0; i < cfg.k; ++i) var_map[i] = i;
            var_map[cfg.k] = 0;
            den = den.merge_variables(var_map, cfg.k);
            multiplicity.assign(cfg.k, 1);
            multiplicity[0] = 2;
        } else {
            std::iota(var_map.begin(), var_map.end(), 0);
            multiplicity.assign(cfg.k + 1, 1);
        }

        OptimizationResult opt =
            stage("optimize", [&] { return optimize_weights(den, multiplicity); });
        WeightAssignment weights =
            stage("rationalize", [&] { return rationalize_weights(opt.point, cfg.max_weight); });
        artifact("optimum.json", optimum_to_json(opt, weights));

        BoundReport continuous = bound_constant(cfg.k, opt.objective);
        report["continuous"] = optimum_to_json(opt, weights);
        report["continuous"]["bound"] = bound_to_json(continuous);

        stage("integer-growth", [&] {
            // Expand merged weights back to one weight per letter, then
            // substitute into the full multivariate function.
            WeightAssignment per_letter(cfg.k + 1);
            for (int i = 0; i <= cfg.k; ++i) per_letter[i] = weights[var_map[i]];
            RationalGF uni{gf.num.substitute_powers(per_letter),
                           gf.den.substitute_powers(per_letter)};
            int exponent_per_element = 0;
            for (int w : per_letter) exponent_per_element += w;
            GrowthReport growth = growth_per_element(uni, exponent_per_element);
            BoundReport bound = bound_constant(cfg.k, growth.per_element_growth);
            report["integer"] = growth_to_json(growth, uni.den);
            report["integer"]["weights"] = per_letter;
            report["integer"]["bound"] = bound_to_json(bound);
            return 0;
        });
    }

    artifact("bound.json", report);
    return report;
}

// k_n rows with per-row budget status; exhaustion is reported, never
// silently truncated.
inline json kn_table_json(int max_n, SearchBudget budget = {}, int workers = 1) {
    json rows = json::array();
    for (int n = 0; n <= max_n; ++n) {
        try {
            KnEntry e = compute_kn(n, budget, workers);
            rows.push_back({{"n", e.n}, {"k_n", e.k_n}, {"status", "ok"}});
        } catch (const budget_error& err) {
            rows.push_back({{"n", n}, {"status", "budget_exhausted"}, {"detail", err.what()}});
        }
    }
    return rows;
}

}  // namespace stacksort
