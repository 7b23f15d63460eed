#include "afslab/labcli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "afslab/common.hpp"
#include "afslab/dataset.hpp"
#include "afslab/exact.hpp"
#include "afslab/ga.hpp"
#include "afslab/milp.hpp"

namespace afslab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Published benchmark anchors for the best-effort comparison report.
constexpr double kPublishedBudgetObjectives[12] = {2.45, 3.79, 5.11,  6.36,
                                               7.54, 8.58, 9.29,  9.88,
                                               10.33, 10.52, 10.66, 10.69};
constexpr double kPublishedBreakdownObjective = 5.11;
const std::vector<NodeId> kPublishedBreakdownPlan = {3, 6, 16};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& content) {
    fs::create_directories(dir);
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw Error("failed writing " + path);
    return path;
}

int parse_int_strict(const std::string& text) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(text, &pos);
        if (pos != text.size()) {
            throw ParseError(ParseError::Kind::BadFormat,
                             "trailing characters in number: " + text);
        }
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(ParseError::Kind::BadFormat, "bad number: " + text);
    }
}

bool uses_exact(const ExperimentSpec& spec) { return spec.solver != "ga"; }
bool uses_ga(const ExperimentSpec& spec) { return spec.solver != "exact"; }

void validate_spec(const ExperimentSpec& spec) {
    if (spec.solver != "exact" && spec.solver != "ga" && spec.solver != "both") {
        throw ValidationError("solver must be exact, ga, or both");
    }
    if (spec.k < 1) throw ValidationError("k must be at least 1");
    if (spec.seeds < 1) throw ValidationError("seeds must be at least 1");
    if (spec.samples < 1) throw ValidationError("samples must be at least 1");
    if (spec.sof_fraction < 0.0 || spec.sof_fraction > 1.0) {
        throw ValidationError("sof fraction must lie in [0, 1]");
    }
}

std::vector<int> resolve_budgets(const ExperimentSpec& spec) {
    std::vector<int> budgets;
    if (spec.budgets_text.empty()) {
        for (int b = 1; b <= 12; ++b) budgets.push_back(b);
    } else {
        budgets = parse_budget_list(spec.budgets_text);
    }
    for (int b : budgets) {
        if (b < 0) throw ValidationError("budgets must be nonnegative");
    }
    return budgets;
}

int resolve_budget(const ExperimentSpec& spec, int command_default) {
    if (spec.budget < 0) return command_default;
    return spec.budget;
}

void guard_exact(const ExperimentSpec& spec, const Instance& inst) {
    if (!uses_exact(spec) || spec.allow_large_exact) return;
    if (inst.candidates.size() > 32) {
        throw GuardError(
            "exact solve refused for " + std::to_string(inst.candidates.size()) +
            " candidates (> 32); pass --allow-large-exact to override");
    }
}

// Every number a table reports must be the evaluator's own verdict on the
// reported plan.
void verify_result(const Instance& inst, const SolveResult& res) {
    const double fresh = evaluate_plan(inst, res.plan).objective;
    if (std::abs(fresh - res.objective) > 1e-9) {
        throw Error("internal: solver objective disagrees with evaluate_plan");
    }
}

GAConfig ga_config(const ExperimentSpec& spec, unsigned seed) {
    GAConfig cfg;
    cfg.population = spec.population;
    cfg.generations = spec.generations;
    cfg.children = spec.children;
    if (spec.p_mut >= 0.0) cfg.p_mut = spec.p_mut;
    cfg.seed = seed;
    return cfg;
}

SolveResult run_exact(const ExperimentSpec& spec, const Instance& inst) {
    guard_exact(spec, inst);
    SolveResult res = solve_exact(inst);
    verify_result(inst, res);
    return res;
}

SolveResult run_heuristic(const ExperimentSpec& spec, const Instance& inst,
                          unsigned seed,
                          std::vector<GenerationStats>* log = nullptr) {
    SolveResult res = run_ga(inst, ga_config(spec, seed), log);
    verify_result(inst, res);
    return res;
}

// One solve for sweep cells: exact unless the settings ask for the heuristic.
SolveResult run_cell(const ExperimentSpec& spec, const Instance& inst,
                     unsigned cell_seed) {
    if (spec.solver == "ga") return run_heuristic(spec, inst, cell_seed);
    return run_exact(spec, inst);
}

json plan_json(const StationPlan& plan, double objective) {
    return json{{"plan", plan.nodes}, {"cost", plan.cost}, {"objective", objective}};
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::vector<int> parse_budget_list(const std::string& text) {
    if (text.empty()) {
        throw ParseError(ParseError::Kind::BadFormat, "empty budget list");
    }
    std::vector<int> budgets;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = parse_int_strict(text.substr(0, dots));
        const int hi = parse_int_strict(text.substr(dots + 2));
        if (lo > hi) {
            throw ParseError(ParseError::Kind::BadFormat,
                             "descending budget range: " + text);
        }
        for (int b = lo; b <= hi; ++b) budgets.push_back(b);
        return budgets;
    }
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) budgets.push_back(parse_int_strict(part));
    if (budgets.empty()) {
        throw ParseError(ParseError::Kind::BadFormat, "empty budget list");
    }
    return budgets;
}

Instance make_spec_instance(const ExperimentSpec& spec) {
    validate_spec(spec);
    std::shared_ptr<const Network> net;
    if (spec.network_file.empty()) {
        net = std::shared_ptr<const Network>(&sioux_falls_network(),
                                             [](const Network*) {});
    } else {
        net = std::make_shared<const Network>(load_network_file(spec.network_file));
    }
    std::map<NodeId, double> probs = spec.probs_file.empty()
                                         ? sioux_falls_probabilities()
                                         : parse_probability_csv(read_file(spec.probs_file));
    auto catalog =
        std::make_shared<const PathCatalog>(build_catalog(*net, spec.k));
    const VehicleSpec vehicle(spec.range, spec.sof_fraction * spec.range);
    return make_unit_cost_instance(net, catalog, std::move(probs),
                                   std::max(spec.budget, 0), vehicle);
}

CommandResult cmd_solve(const ExperimentSpec& spec) {
    Instance base = make_spec_instance(spec);
    const std::vector<int> budgets = resolve_budgets(spec);
    const int breakdown_budget = resolve_budget(spec, 3);

    std::vector<int> solve_budgets = budgets;
    if (std::find(solve_budgets.begin(), solve_budgets.end(), breakdown_budget) ==
        solve_budgets.end()) {
        solve_budgets.push_back(breakdown_budget);
    }

    struct PerBudget {
        std::optional<SolveResult> exact;
        std::vector<double> ga_objectives;
        std::optional<SolveResult> ga_best;
    };
    std::map<int, PerBudget> results;
    if (uses_exact(spec)) guard_exact(spec, base);
    for (int b : solve_budgets) {
        const Instance inst = base.with_budget(b);
        PerBudget& cell = results[b];
        if (uses_exact(spec)) cell.exact = run_exact(spec, inst);
        if (uses_ga(spec)) {
            for (int s = 0; s < spec.seeds; ++s) {
                SolveResult res =
                    run_heuristic(spec, inst, spec.seed + static_cast<unsigned>(s));
                cell.ga_objectives.push_back(res.objective);
                if (!cell.ga_best || res.objective > cell.ga_best->objective) {
                    cell.ga_best = std::move(res);
                }
            }
        }
    }

    CommandResult out;

    {
        std::ostringstream csv;
        csv << "budget,ga_mean,exact,diff_pct\n";
        for (int b : budgets) {
            const PerBudget& cell = results.at(b);
            csv << b << ',';
            double mean = 0.0;
            if (!cell.ga_objectives.empty()) {
                for (double v : cell.ga_objectives) mean += v;
                mean /= static_cast<double>(cell.ga_objectives.size());
                csv << fmt_double(mean);
            }
            csv << ',';
            if (cell.exact) csv << fmt_double(cell.exact->objective);
            csv << ',';
            if (cell.exact && !cell.ga_objectives.empty()) {
                const double ex = cell.exact->objective;
                csv << fmt_double(ex > 0.0 ? (ex - mean) / ex * 100.0 : 0.0);
            }
            csv << '\n';
        }
        out.files.push_back(write_file(spec.out_dir, "table2.csv", csv.str()));
    }

    const auto chosen = [&](int b) -> const SolveResult& {
        const PerBudget& cell = results.at(b);
        return cell.exact ? *cell.exact : *cell.ga_best;
    };

    {
        json plans = json::array();
        std::ostringstream coverage;
        coverage << "budget,node,p_r,z_r\n";
        for (int b : budgets) {
            const SolveResult& res = chosen(b);
            const Instance inst = base.with_budget(b);
            const CoverageReport rep = evaluate_plan(inst, res.plan);
            json row = plan_json(res.plan, rep.objective);
            row["budget"] = b;
            row["solver"] = results.at(b).exact ? "exact" : "ga";
            plans.push_back(std::move(row));
            for (const auto& [node, z] : rep.node_coverage) {
                coverage << b << ',' << node << ','
                         << fmt_double(inst.probabilities.at(node)) << ','
                         << fmt_double(z) << '\n';
            }
        }
        out.files.push_back(write_file(spec.out_dir, "plans.json",
                                       dump_json({{"budgets", plans}})));
        out.files.push_back(write_file(spec.out_dir, "node_coverage_by_budget.csv",
                                       coverage.str()));
    }

    {
        const Instance inst = base.with_budget(breakdown_budget);
        const SolveResult& res = chosen(breakdown_budget);
        const CoverageReport rep = evaluate_plan(inst, res.plan);
        out.files.push_back(
            write_file(spec.out_dir, "table3.csv", report_to_csv(inst, rep)));

        std::ostringstream sched;
        sched << "origin,destination,path_index,node,arrival_fuel,refueled,"
                 "departure_fuel\n";
        for (const PairCoverage& pair : rep.pairs) {
            if (!pair.covered) continue;
            const RoundTripPath& path =
                inst.catalog->paths(pair.origin, pair.destination)
                    .at(static_cast<std::size_t>(pair.path_index));
            const SimulationOutcome sim =
                simulate_path(path, res.plan, inst.vehicle);
            if (!sim.feasible || !sim.schedule) {
                throw Error("internal: covered pair fails simulation");
            }
            for (const RefuelStop& stop : sim.schedule->stops) {
                sched << pair.origin << ',' << pair.destination << ','
                      << pair.path_index << ',' << stop.node << ','
                      << fmt_double(stop.arrival_fuel) << ','
                      << fmt_double(stop.refueled) << ','
                      << fmt_double(stop.departure_fuel()) << '\n';
            }
        }
        out.files.push_back(
            write_file(spec.out_dir, "schedules.csv", sched.str()));
    }

    if (uses_ga(spec)) {
        std::vector<GenerationStats> log;
        run_heuristic(spec, base.with_budget(breakdown_budget), spec.seed, &log);
        out.files.push_back(
            write_file(spec.out_dir, "ga_log.csv", ga_log_to_csv(log)));
    }

    if (uses_exact(spec)) {
        std::ostringstream cmp;
        cmp << "item,ours,published,delta\n";
        for (int b : budgets) {
            if (b < 1 || b > 12) continue;
            const double ours = results.at(b).exact->objective;
            const double published = kPublishedBudgetObjectives[b - 1];
            cmp << "budget_" << b << ',' << fmt_double(ours) << ','
                << fmt_double(published) << ',' << fmt_double(ours - published) << '\n';
        }
        const SolveResult& res = chosen(breakdown_budget);
        if (breakdown_budget == 3 && results.at(3).exact) {
            cmp << "breakdown_objective," << fmt_double(res.objective) << ','
                << fmt_double(kPublishedBreakdownObjective) << ','
                << fmt_double(res.objective - kPublishedBreakdownObjective) << '\n';
            std::ostringstream ours_plan, published_plan;
            for (std::size_t i = 0; i < res.plan.nodes.size(); ++i) {
                ours_plan << (i ? " " : "") << res.plan.nodes[i];
            }
            for (std::size_t i = 0; i < kPublishedBreakdownPlan.size(); ++i) {
                published_plan << (i ? " " : "") << kPublishedBreakdownPlan[i];
            }
            cmp << "breakdown_plan," << ours_plan.str() << ',' << published_plan.str()
                << ",\n";
        }
        out.files.push_back(
            write_file(spec.out_dir, "published_comparison.csv", cmp.str()));
    }

    return out;
}

CommandResult cmd_sweep_range(const ExperimentSpec& spec) {
    Instance base = make_spec_instance(spec);
    const std::vector<int> budgets = resolve_budgets(spec);
    if (spec.ranges.empty()) throw ValidationError("range list is empty");
    if (uses_exact(spec)) guard_exact(spec, base);

    std::ostringstream csv;
    csv << "budget,vr,objective\n";
    std::ostringstream crit;
    crit << "vr,critical_budget,max_objective\n";
    json plans = json::array();

    unsigned cell = 0;
    for (double vr : spec.ranges) {
        const VehicleSpec vehicle(vr, spec.sof_fraction * vr);
        std::vector<double> curve;
        for (int b : budgets) {
            const Instance inst = base.with_budget(b).with_vehicle(vehicle);
            const SolveResult res = run_cell(spec, inst, spec.seed + cell++);
            curve.push_back(res.objective);
            csv << b << ',' << fmt_double(vr) << ',' << fmt_double(res.objective)
                << '\n';
            json row = plan_json(res.plan, res.objective);
            row["budget"] = b;
            row["vr"] = vr;
            plans.push_back(std::move(row));
        }
        const double peak = *std::max_element(curve.begin(), curve.end());
        int critical = budgets.back();
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i] >= peak - 1e-9) {
                critical = budgets[i];
                break;
            }
        }
        crit << fmt_double(vr) << ',' << critical << ',' << fmt_double(peak)
             << '\n';
    }

    CommandResult out;
    out.files.push_back(write_file(spec.out_dir, "sweep_range.csv", csv.str()));
    out.files.push_back(
        write_file(spec.out_dir, "critical_counts.csv", crit.str()));
    out.files.push_back(write_file(spec.out_dir, "sweep_range_plans.json",
                                   dump_json({{"cells", plans}})));
    return out;
}

CommandResult cmd_sweep_sof(const ExperimentSpec& spec) {
    Instance base = make_spec_instance(spec);
    const std::vector<int> budgets = resolve_budgets(spec);
    if (uses_exact(spec)) guard_exact(spec, base);

    std::ostringstream csv;
    csv << "budget,full_sof,half_sof\n";
    json plans = json::array();
    unsigned cell = 0;
    for (int b : budgets) {
        double objs[2] = {0.0, 0.0};
        const double fracs[2] = {1.0, 0.5};
        for (int i = 0; i < 2; ++i) {
            const VehicleSpec vehicle(spec.range, fracs[i] * spec.range);
            const Instance inst = base.with_budget(b).with_vehicle(vehicle);
            const SolveResult res = run_cell(spec, inst, spec.seed + cell++);
            objs[i] = res.objective;
            json row = plan_json(res.plan, res.objective);
            row["budget"] = b;
            row["sof_fraction"] = fracs[i];
            plans.push_back(std::move(row));
        }
        csv << b << ',' << fmt_double(objs[0]) << ',' << fmt_double(objs[1])
            << '\n';
    }

    CommandResult out;
    out.files.push_back(write_file(spec.out_dir, "sweep_sof.csv", csv.str()));
    out.files.push_back(write_file(spec.out_dir, "sweep_sof_plans.json",
                                   dump_json({{"cells", plans}})));
    return out;
}

CommandResult cmd_monte_carlo_sof(const ExperimentSpec& spec) {
    Instance base = make_spec_instance(spec);
    const std::vector<int> budgets = resolve_budgets(spec);
    const int cdf_budget = resolve_budget(spec, 7);
    if (std::find(budgets.begin(), budgets.end(), cdf_budget) == budgets.end()) {
        throw ValidationError("the CDF budget must be one of the swept budgets");
    }
    if (uses_exact(spec)) guard_exact(spec, base);

    std::mt19937 rng(spec.seed);
    std::uniform_real_distribution<double> draw_sof(0.0, spec.range);

    // Objective of a fixed plan when each origin starts with its own fuel
    // level: z_r is read from a per-origin evaluation.
    const auto per_node_objective = [&](const Instance& inst,
                                        const StationPlan& plan,
                                        const std::map<NodeId, double>& sof) {
        double total = 0.0;
        for (const auto& [node, p] : inst.probabilities) {
            const Instance view =
                inst.with_vehicle(VehicleSpec(spec.range, sof.at(node)));
            total += p * evaluate_plan(view, plan).node_coverage.at(node);
        }
        return total;
    };

    std::ostringstream means;
    means << "budget,plan_full_mean,plan_half_mean\n";
    std::vector<double> cdf_full, cdf_half;
    json plans = json::array();

    unsigned cell = 0;
    for (int b : budgets) {
        const Instance inst_full = base.with_budget(b).with_vehicle(
            VehicleSpec(spec.range, spec.range));
        const Instance inst_half = base.with_budget(b).with_vehicle(
            VehicleSpec(spec.range, spec.range / 2.0));
        const SolveResult full = run_cell(spec, inst_full, spec.seed + cell++);
        const SolveResult half = run_cell(spec, inst_half, spec.seed + cell++);

        double sum_full = 0.0, sum_half = 0.0;
        std::vector<double> objs_full, objs_half;
        for (int s = 0; s < spec.samples; ++s) {
            double obj_full = 0.0, obj_half = 0.0;
            if (spec.per_node_draws) {
                std::map<NodeId, double> sof;
                for (NodeId node : base.network->nodes()) sof[node] = draw_sof(rng);
                obj_full = per_node_objective(inst_full, full.plan, sof);
                obj_half = per_node_objective(inst_half, half.plan, sof);
            } else {
                const double sof = draw_sof(rng);
                const Instance view =
                    base.with_budget(b).with_vehicle(VehicleSpec(spec.range, sof));
                obj_full = evaluate_plan(view, full.plan).objective;
                obj_half = evaluate_plan(view, half.plan).objective;
            }
            sum_full += obj_full;
            sum_half += obj_half;
            objs_full.push_back(obj_full);
            objs_half.push_back(obj_half);
        }
        means << b << ',' << fmt_double(sum_full / spec.samples) << ','
              << fmt_double(sum_half / spec.samples) << '\n';
        if (b == cdf_budget) {
            cdf_full = std::move(objs_full);
            cdf_half = std::move(objs_half);
        }

        json row;
        row["budget"] = b;
        row["full"] = plan_json(full.plan, full.objective);
        row["half"] = plan_json(half.plan, half.objective);
        plans.push_back(std::move(row));
    }

    std::sort(cdf_full.begin(), cdf_full.end());
    std::sort(cdf_half.begin(), cdf_half.end());
    std::ostringstream cdf;
    cdf << "rank,fraction,plan_full,plan_half\n";
    for (std::size_t i = 0; i < cdf_full.size(); ++i) {
        cdf << (i + 1) << ','
            << fmt_double(static_cast<double>(i + 1) / cdf_full.size()) << ','
            << fmt_double(cdf_full[i]) << ',' << fmt_double(cdf_half[i]) << '\n';
    }

    CommandResult out;
    out.files.push_back(
        write_file(spec.out_dir, "mc_sof_means.csv", means.str()));
    out.files.push_back(write_file(spec.out_dir, "mc_sof_cdf.csv", cdf.str()));
    out.files.push_back(write_file(spec.out_dir, "mc_plans.json",
                                   dump_json({{"budgets", plans}})));
    return out;
}

CommandResult cmd_prob_ablation(const ExperimentSpec& spec) {
    Instance base = make_spec_instance(spec);
    const int budget = resolve_budget(spec, 7);
    const Instance inst = base.with_budget(budget);
    if (uses_exact(spec)) guard_exact(spec, base);

    const SolveResult aware = run_cell(spec, inst, spec.seed);
    std::map<NodeId, double> ones;
    for (const auto& [node, p] : inst.probabilities) ones[node] = 1.0;
    const Instance blind_inst = inst.with_probabilities(std::move(ones));
    const SolveResult blind = run_cell(spec, blind_inst, spec.seed + 1);

    // Coverage shares z_r depend only on the plan, so both plans are
    // reported under the true-probability instance.
    const CoverageReport rep_aware = evaluate_plan(inst, aware.plan);
    const CoverageReport rep_blind = evaluate_plan(inst, blind.plan);

    std::vector<std::pair<double, NodeId>> low, high;
    for (const auto& [node, p] : inst.probabilities) {
        if (p <= 0.2) low.push_back({p, node});
        if (p >= 0.8) high.push_back({p, node});
    }
    std::sort(low.begin(), low.end());
    std::sort(high.begin(), high.end());

    std::ostringstream csv;
    csv << "group,node,p_r,z_with_p,z_without_p\n";
    const auto emit = [&](const char* group,
                          const std::vector<std::pair<double, NodeId>>& rows) {
        for (const auto& [p, node] : rows) {
            csv << group << ',' << node << ',' << fmt_double(p) << ','
                << fmt_double(rep_aware.node_coverage.at(node)) << ','
                << fmt_double(rep_blind.node_coverage.at(node)) << '\n';
        }
    };
    emit("low", low);
    emit("high", high);

    json doc;
    doc["budget"] = budget;
    doc["with_p"] = plan_json(aware.plan, rep_aware.objective);
    doc["without_p"] = plan_json(blind.plan, blind.objective);
    doc["without_p"]["objective_under_true_p"] = rep_blind.objective;

    CommandResult out;
    out.files.push_back(
        write_file(spec.out_dir, "prob_ablation.csv", csv.str()));
    out.files.push_back(write_file(spec.out_dir, "prob_ablation_plans.json",
                                   dump_json(doc)));
    return out;
}

CommandResult cmd_paths(const ExperimentSpec& spec) {
    validate_spec(spec);
    const Network net = spec.network_file.empty()
                            ? sioux_falls_network()
                            : load_network_file(spec.network_file);
    const auto start = std::chrono::steady_clock::now();
    const PathCatalog catalog = build_catalog(net, spec.k);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::size_t paths = 0;
    for (const auto& [key, entry] : catalog.entries) paths += entry.size();
    std::cout << "catalog: " << catalog.entries.size() << " pairs, " << paths
              << " round trips, built in " << fmt_double(elapsed) << " s\n";

    CommandResult out;
    out.files.push_back(
        write_file(spec.out_dir, "catalog.json", serialize_catalog(catalog)));
    return out;
}

CommandResult cmd_export_milp(const ExperimentSpec& spec) {
    Instance inst = make_spec_instance(spec).with_budget(resolve_budget(spec, 7));
    const std::string text = write_lp(build_milp(inst));
    if (write_lp(read_lp(text)) != text) {
        throw Error("internal: exported model does not round-trip");
    }
    CommandResult out;
    out.files.push_back(write_file(spec.out_dir, "model.lp", text));
    return out;
}

namespace {

double parse_double_strict(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size() || text.empty()) {
        throw ParseError(ParseError::Kind::BadFormat, "bad number: " + text);
    }
    return v;
}

bool parse_bool_strict(const std::string& text) {
    if (text == "1" || text == "true") return true;
    if (text == "0" || text == "false") return false;
    throw ParseError(ParseError::Kind::BadFormat, "bad boolean: " + text);
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Flat `key=value` config file; keys are the long option names without the
// leading dashes. A key only applies when the matching flag was not given
// on the command line, so flags override the file.
void apply_config_file(const CLI::App* cmd, const std::string& path,
                       ExperimentSpec& spec) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(ParseError::Kind::BadFormat,
                         "config: cannot open " + path);
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError(ParseError::Kind::BadFormat,
                             "config line " + std::to_string(line_no) +
                                 ": expected key=value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (cmd->count("--" + key) > 0) continue;  // flag wins
        if (key == "network") spec.network_file = value;
        else if (key == "probs") spec.probs_file = value;
        else if (key == "budget") spec.budget = parse_int_strict(value);
        else if (key == "budgets") spec.budgets_text = value;
        else if (key == "range") spec.range = parse_double_strict(value);
        else if (key == "sof") spec.sof_fraction = parse_double_strict(value);
        else if (key == "k") spec.k = parse_int_strict(value);
        else if (key == "solver") spec.solver = value;
        else if (key == "seeds") spec.seeds = parse_int_strict(value);
        else if (key == "seed") {
            spec.seed = static_cast<unsigned>(parse_int_strict(value));
        } else if (key == "out") spec.out_dir = value;
        else if (key == "samples") spec.samples = parse_int_strict(value);
        else if (key == "per-node-draws") {
            spec.per_node_draws = parse_bool_strict(value);
        } else if (key == "allow-large-exact") {
            spec.allow_large_exact = parse_bool_strict(value);
        } else if (key == "population") {
            spec.population = parse_int_strict(value);
        } else if (key == "generations") {
            spec.generations = parse_int_strict(value);
        } else if (key == "children") spec.children = parse_int_strict(value);
        else if (key == "pmut") spec.p_mut = parse_double_strict(value);
        else if (key == "ranges") {
            spec.ranges.clear();
            std::stringstream parts(value);
            std::string part;
            while (std::getline(parts, part, ',')) {
                spec.ranges.push_back(parse_double_strict(trim(part)));
            }
        } else {
            throw ParseError(ParseError::Kind::BadFormat,
                             "config: unknown key " + key);
        }
    }
}

void bind_options(CLI::App* cmd, ExperimentSpec& spec) {
    cmd->add_option("--network", spec.network_file,
                    "network file (default: embedded benchmark)");
    cmd->add_option("--probs", spec.probs_file,
                    "probability CSV (default: embedded table)");
    cmd->add_option("--budget", spec.budget,
                    "single budget (breakdown, ablation, CDF, export)");
    cmd->add_option("--budgets", spec.budgets_text,
                    "budget list: a..b or a,b,c (default 1..12)");
    cmd->add_option("--range", spec.range, "vehicle range in miles");
    cmd->add_option("--sof", spec.sof_fraction,
                    "initial fuel as a fraction of the range");
    cmd->add_option("--k", spec.k, "deviation paths per O-D pair");
    cmd->add_option("--solver", spec.solver, "exact | ga | both")
        ->check(CLI::IsMember({"exact", "ga", "both"}));
    cmd->add_option("--seeds", spec.seeds, "heuristic repetitions");
    cmd->add_option("--seed", spec.seed, "base random seed");
    cmd->add_option("--out", spec.out_dir, "output directory");
    cmd->add_option("--samples", spec.samples, "Monte-Carlo draws per budget");
    cmd->add_flag("--per-node-draws", spec.per_node_draws,
                  "draw one start fuel per origin instead of one per scenario");
    cmd->add_flag("--allow-large-exact", spec.allow_large_exact,
                  "lift the 32-candidate exact-solver guard");
    cmd->add_option("--population", spec.population, "heuristic population");
    cmd->add_option("--generations", spec.generations, "heuristic generations");
    cmd->add_option("--children", spec.children,
                    "heuristic children per generation");
    cmd->add_option("--pmut", spec.p_mut, "heuristic mutation rate");
    cmd->add_option("--ranges", spec.ranges,
                    "vehicle ranges for sweep-range (comma separated)")
        ->delimiter(',');
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"expected-coverage refueling-station location toolkit"};
    app.require_subcommand(1);

    ExperimentSpec spec;
    std::string config_path;
    struct Cmd {
        const char* name;
        const char* help;
        CommandResult (*fn)(const ExperimentSpec&);
        CLI::App* sub = nullptr;
    };
    Cmd commands[] = {
        {"paths", "build and serialize the deviation-path catalog", cmd_paths},
        {"solve", "budget sweep with breakdown tables", cmd_solve},
        {"sweep-range", "budget x vehicle-range sweep", cmd_sweep_range},
        {"sweep-sof", "budget sweep at full and half start fuel", cmd_sweep_sof},
        {"monte-carlo-sof", "random start-fuel evaluation of fixed plans",
         cmd_monte_carlo_sof},
        {"prob-ablation", "probability-aware vs probability-blind plans",
         cmd_prob_ablation},
        {"export-milp", "write the mixed-integer model as an LP file",
         cmd_export_milp},
    };
    for (Cmd& c : commands) {
        c.sub = app.add_subcommand(c.name, c.help);
        bind_options(c.sub, spec);
        c.sub->add_option("--config", config_path,
                          "flat key=value config file; flags override it");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const Cmd& c : commands) {
            if (c.sub->parsed()) {
                if (!config_path.empty()) {
                    apply_config_file(c.sub, config_path, spec);
                }
                const CommandResult result = c.fn(spec);
                for (const std::string& file : result.files) {
                    std::cout << "wrote " << file << "\n";
                }
                return 0;
            }
        }
        std::cerr << "no command given\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.push_back("afslab");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : full) argv.push_back(s.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace afslab
