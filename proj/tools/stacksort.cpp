// Command-line front end: simulate the stack game, tabulate k_n, count
// generable permutations, discover/verify move-string relations, build
// forbidden-factor generating functions, optimize letter weights, and run
// the whole lower-bound pipeline with cached artifacts.

#include <iostream>

#include <CLI11.hpp>

#include "stacksort/pipeline.hpp"

using namespace stacksort;

namespace {

std::vector<int> parse_permutation(const std::string& text) {
    std::vector<int> pi;
    if (text.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t next = text.find(',', pos);
            if (next == std::string::npos) next = text.size();
            pi.push_back(std::stoi(text.substr(pos, next - pos)));
            pos = next + 1;
        }
    } else {
        for (char c : text) {
            if (c < '1' || c > '9') throw std::invalid_argument("bad digit in permutation");
            pi.push_back(c - '0');
        }
    }
    validate_permutation(pi);
    return pi;
}

int cmd_simulate(const std::string& perm_text, const std::string& moves, int k) {
    std::vector<int> pi = parse_permutation(perm_text);
    validate_move_string(moves, k);
    SystemState s = state_of_permutation(pi, k);
    std::cout << "step 0: " << to_text(s) << "\n";
    for (std::size_t i = 0; i < moves.size(); ++i) {
        s = apply_move(move_of_char(moves[i]), std::move(s));
        std::cout << "step " << i + 1 << " m" << moves[i] << ": " << to_text(s) << "\n";
        if (s.illegal) {
            std::cout << "illegal at step " << i + 1 << "\n";
            return 1;
        }
    }
    bool sorted = is_sorted_final(s);
    std::cout << (sorted ? "sorted" : "not sorted") << "\n";
    return sorted ? 0 : 1;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json_file(out_path, j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stack-series sorting toolkit"};
    app.require_subcommand(1);

    // simulate
    std::string sim_perm, sim_moves;
    int sim_k = 2;
    auto* simulate = app.add_subcommand("simulate", "replay a move string on a permutation");
    simulate->add_option("permutation", sim_perm)->required();
    simulate->add_option("moves", sim_moves)->required();
    simulate->add_option("--k", sim_k, "number of stacks");

    // kn-table
    int kn_max_n = 6;
    std::size_t kn_max_states = SearchBudget{}.max_states;
    int kn_workers = 1;
    std::string kn_json;
    auto* kn = app.add_subcommand("kn-table", "minimal stacks per element count");
    kn->add_option("--max-n", kn_max_n)->required();
    kn->add_option("--max-states", kn_max_states, "per-search state cap");
    kn->add_option("--workers", kn_workers);
    kn->add_option("--json", kn_json, "also write the table as JSON");

    // perms
    int perms_n = 4, perms_k = 2;
    bool perms_list = false;
    std::size_t perms_max_states = SearchBudget{}.max_states;
    auto* perms = app.add_subcommand("perms", "permutations generable by k stacks");
    perms->add_option("--n", perms_n)->required();
    perms->add_option("--k", perms_k)->required();
    perms->add_flag("--list", perms_list, "list the members");
    perms->add_option("--max-states", perms_max_states);

    // relations discover / verify
    auto* relations = app.add_subcommand("relations", "move-string relation tools");
    relations->require_subcommand(1);
    int rel_k = 2, rel_max_len = 4, rel_workers = 1;
    std::string rel_out;
    auto* discover = relations->add_subcommand("discover", "find rewrite rules by probing");
    discover->add_option("--k", rel_k);
    discover->add_option("--max-len", rel_max_len)->required();
    discover->add_option("--out", rel_out, "rule file to write");
    discover->add_option("--workers", rel_workers);
    std::string verify_file;
    int verify_k = 2;
    auto* verify = relations->add_subcommand("verify", "audit a rule file");
    verify->add_option("rules", verify_file)->required();
    verify->add_option("--k", verify_k);

    // gf
    std::string gf_rules_file, gf_forbidden_file, gf_out, gf_weights = "per-letter";
    int gf_k = 2, gf_series_cap = -1;
    auto* gf_cmd = app.add_subcommand("gf", "generating function of factor-avoiding strings");
    gf_cmd->add_option("--rules-file", gf_rules_file);
    gf_cmd->add_option("--forbidden", gf_forbidden_file);
    gf_cmd->add_option("--weights", gf_weights, "uniform or per-letter");
    gf_cmd->add_option("--k", gf_k);
    gf_cmd->add_option("--out", gf_out);
    gf_cmd->add_option("--series-cap", gf_series_cap, "print series coefficients up to here");

    // optimize
    std::string opt_gf_file, opt_out;
    bool opt_identify = false;
    int opt_max_weight = 8, opt_k = 2;
    auto* opt_cmd = app.add_subcommand("optimize", "optimal letter weights on a denominator");
    opt_cmd->add_option("--gf", opt_gf_file)->required();
    opt_cmd->add_flag("--identify", opt_identify, "tie the last weight to the first");
    opt_cmd->add_option("--max-weight", opt_max_weight);
    opt_cmd->add_option("--k", opt_k);
    opt_cmd->add_option("--out", opt_out);

    // bound
    PipelineConfig bound_cfg;
    std::string bound_weights = "uniform";
    auto* bound = app.add_subcommand("bound", "full lower-bound pipeline");
    bound->add_option("--k", bound_cfg.k);
    bound->add_option("--max-relation-len", bound_cfg.max_relation_len);
    bound->add_option("--weights", bound_weights, "uniform or optimized");
    bound->add_flag("--identify", bound_cfg.identify_outer);
    bound->add_option("--max-weight", bound_cfg.max_weight);
    bound->add_option("--workers", bound_cfg.workers);
    bound->add_option("--rules-file", bound_cfg.rules_file, "skip discovery");
    bound->add_option("--out-dir", bound_cfg.out_dir, "artifact directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return cmd_simulate(sim_perm, sim_moves, sim_k);

        if (*kn) {
            json rows = kn_table_json(kn_max_n, {kn_max_states}, kn_workers);
            std::cout << "  n  k_n\n";
            for (const auto& row : rows) {
                std::cout << std::setw(3) << row["n"].get<int>() << "  ";
                if (row["status"] == "ok")
                    std::cout << row["k_n"].get<int>() << "\n";
                else
                    std::cout << "(budget exhausted)\n";
            }
            if (!kn_json.empty()) write_json_file(kn_json, rows);
            for (const auto& row : rows)
                if (row["status"] != "ok") return 1;
            return 0;
        }

        if (*perms) {
            PermSet p = generable_perms(perms_n, perms_k, {perms_max_states});
            json out{{"n", perms_n}, {"k", perms_k}, {"count", p.size()}};
            if (perms_list) {
                json members = json::array();
                for (const auto& pi : p.members) members.push_back(pi);
                out["members"] = members;
            }
            std::cout << out.dump(2) << "\n";
            return 0;
        }

        if (*discover) {
            auto rules = discover_relations(rel_max_len, rel_k, {rel_workers});
            json j = rules_to_json(rules, rel_k, rel_max_len, discovery_convention);
            emit(j, rel_out);
            std::cerr << "discovered " << rules.size() << " rules up to length " << rel_max_len
                      << "\n";
            return 0;
        }

        if (*verify) {
            json j = read_json_file(verify_file);
            int k = j.contains("header") ? j["header"].value("k", verify_k) : verify_k;
            RuleCheck check = verify_rules(rules_from_json(j), k);
            if (check.ok) {
                std::cout << "ok\n";
                return 0;
            }
            std::cout << "FAIL " << check.failure << "\n";
            return 1;
        }

        if (*gf_cmd) {
            std::vector<MoveString> words;
            if (!gf_rules_file.empty()) {
                json j = read_json_file(gf_rules_file);
                if (j.contains("header")) gf_k = j["header"].value("k", gf_k);
                words = derive_forbidden(rules_from_json(j));
            } else if (!gf_forbidden_file.empty()) {
                json j = read_json_file(gf_forbidden_file);
                if (j.contains("k")) gf_k = j["k"].get<int>();
                words = forbidden_from_json(j);
            } else {
                throw std::invalid_argument("need --rules-file or --forbidden");
            }
            RationalGF gf = gf_weights == "uniform" ? cluster_gf_uniform(gf_k + 1, words)
                                                    : cluster_gf_per_letter(gf_k + 1, words);
            json out = gf_to_json(gf);
            if (gf_series_cap >= 0 && gf_weights == "uniform")
                out["series"] = series_univariate(gf, gf_series_cap);
            emit(out, gf_out);
            return 0;
        }

        if (*opt_cmd) {
            RationalGF gf = gf_from_json(read_json_file(opt_gf_file));
            MultiPoly den = gf.den;
            std::vector<int> multiplicity(den.arity, 1);
            if (opt_identify) {
                std::vector<int> var_map(den.arity);
                std::iota(var_map.begin(), var_map.end(), 0);
                var_map.back() = 0;
                den = den.merge_variables(var_map, den.arity - 1);
                multiplicity.assign(den.arity, 1);
                multiplicity[0] = 2;
            }
            OptimizationResult r = optimize_weights(den, multiplicity);
            WeightAssignment weights = rationalize_weights(r.point, opt_max_weight);
            json out = optimum_to_json(r, weights);
            out["bound"] = bound_to_json(bound_constant(opt_k, r.objective));
            emit(out, opt_out);
            return 0;
        }

        if (*bound) {
            bound_cfg.optimize = bound_weights == "optimized";
            json report = run_bound_pipeline(bound_cfg);
            std::cout << report.dump(2) << "\n";
            return 0;
        }
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
