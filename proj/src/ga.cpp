#include "afslab/ga.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "afslab/common.hpp"

namespace afslab {

namespace {

std::size_t worst_index(const std::vector<Individual>& population) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
        if (population[i].fitness < population[worst].fitness) worst = i;
    }
    return worst;
}

StationPlan bits_to_plan(const Instance& inst, const std::vector<char>& bits) {
    std::vector<NodeId> nodes;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) nodes.push_back(inst.candidates[i]);
    }
    return make_plan(inst, std::move(nodes));
}

// Closes the open station with the smallest singleton gain (ties uniform at
// random) until the selection fits the budget.
void repair_bits(std::vector<char>& bits, const Instance& inst,
                 const std::vector<double>& gains, std::mt19937& rng) {
    double cost = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) cost += inst.cost_of(inst.candidates[i]);
    }
    while (cost > inst.budget + kFeasEps) {
        std::vector<std::size_t> tied;
        double lowest = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (!bits[i]) continue;
            if (tied.empty() || gains[i] < lowest) {
                lowest = gains[i];
                tied.assign(1, i);
            } else if (gains[i] == lowest) {
                tied.push_back(i);
            }
        }
        std::size_t close = tied.front();
        if (tied.size() > 1) {
            std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
            close = tied[pick(rng)];
        }
        bits[close] = 0;
        cost -= inst.cost_of(inst.candidates[close]);
    }
}

std::vector<double> singleton_gains(const Instance& inst,
                                    const CoverageEngine& engine) {
    std::vector<char> none(inst.candidates.size(), 0);
    const double base = engine.evaluate_bits(none);
    std::vector<double> gains(inst.candidates.size(), 0.0);
    for (std::size_t i = 0; i < gains.size(); ++i) {
        std::vector<char> solo = none;
        solo[i] = 1;
        gains[i] = engine.evaluate_bits(solo) - base;
    }
    return gains;
}

GenerationStats population_stats(int generation,
                                 const std::vector<Individual>& population) {
    GenerationStats st;
    st.generation = generation;
    st.best = population.front().fitness;
    st.worst = population.front().fitness;
    double sum = 0.0;
    for (const Individual& ind : population) {
        st.best = std::max(st.best, ind.fitness);
        st.worst = std::min(st.worst, ind.fitness);
        sum += ind.fitness;
    }
    st.mean = sum / static_cast<double>(population.size());
    return st;
}

}  // namespace

std::pair<std::size_t, std::size_t> tournament_select(
    const std::vector<Individual>& population, std::mt19937& rng) {
    const std::size_t n = population.size();
    if (n < 4) {
        throw ValidationError("tournament selection needs a population of at least 4");
    }
    std::size_t draw[4];
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int got = 0; got < 4;) {
        const std::size_t d = pick(rng);
        bool seen = false;
        for (int j = 0; j < got; ++j) seen = seen || draw[j] == d;
        if (!seen) draw[got++] = d;
    }
    const auto fitter = [&](std::size_t first, std::size_t second) {
        return population[second].fitness > population[first].fitness ? second
                                                                      : first;
    };
    return {fitter(draw[0], draw[1]), fitter(draw[2], draw[3])};
}

std::vector<char> fusion_crossover(const Individual& p1, const Individual& p2,
                                   std::mt19937& rng,
                                   bool literal_whole_solution) {
    if (p1.bits.size() != p2.bits.size()) {
        throw ValidationError("crossover parents have different lengths");
    }
    if (p1.bits == p2.bits) return p1.bits;
    const double total = p1.fitness + p2.fitness;
    const double take_p1 = total > 0.0 ? p2.fitness / total : 0.5;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (literal_whole_solution) {
        return unit(rng) < take_p1 ? p1.bits : p2.bits;
    }
    std::vector<char> child = p1.bits;
    for (std::size_t i = 0; i < child.size(); ++i) {
        if (p1.bits[i] != p2.bits[i]) {
            child[i] = unit(rng) < take_p1 ? p1.bits[i] : p2.bits[i];
        }
    }
    return child;
}

std::vector<char> mutate_worst(const std::vector<Individual>& population,
                               double p_mut, std::mt19937& rng) {
    if (population.empty()) {
        throw ValidationError("mutation needs a nonempty population");
    }
    std::vector<char> child = population[worst_index(population)].bits;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (char& bit : child) {
        if (unit(rng) < p_mut) bit = bit ? 0 : 1;
    }
    return child;
}

StationPlan repair_budget(const std::vector<char>& bits, const Instance& inst,
                          std::mt19937& rng) {
    if (bits.size() != inst.candidates.size()) {
        throw ValidationError("bitstring length does not match the candidate set");
    }
    CoverageEngine engine(inst);
    std::vector<char> repaired = bits;
    repair_bits(repaired, inst, singleton_gains(inst, engine), rng);
    return bits_to_plan(inst, repaired);
}

void replace(std::vector<Individual>& population,
             std::vector<Individual> children) {
    for (Individual& child : children) {
        bool duplicate = false;
        for (const Individual& member : population) {
            if (member.plan == child.plan) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        population[worst_index(population)] = std::move(child);
    }
}

SolveResult run_ga(const Instance& inst, const GAConfig& cfg,
                   std::vector<GenerationStats>* log) {
    if (cfg.population < 4) {
        throw ValidationError("population must be at least 4");
    }
    if (cfg.generations < 0) throw ValidationError("generations must be >= 0");
    if (cfg.children < 1) throw ValidationError("children per generation must be >= 1");
    const double p_mut = cfg.p_mut.value_or(
        std::min(1.0, 2.0 / static_cast<double>(inst.candidates.size())));
    if (p_mut < 0.0 || p_mut > 1.0) {
        throw ValidationError("mutation rate must lie in [0, 1]");
    }

    const auto start = std::chrono::steady_clock::now();
    CoverageEngine engine(inst);
    const std::vector<double> gains = singleton_gains(inst, engine);
    std::mt19937 rng(cfg.seed);
    std::uint64_t evaluations = 0;

    const auto finish_individual = [&](std::vector<char> bits) {
        repair_bits(bits, inst, gains, rng);
        Individual ind;
        ind.bits = std::move(bits);
        ind.plan = bits_to_plan(inst, ind.bits);
        ind.fitness = engine.evaluate_bits(ind.bits);
        ++evaluations;
        return ind;
    };

    // Initial population: the greedy plan plus random budget-saturated picks.
    std::vector<Individual> population;
    population.reserve(static_cast<std::size_t>(cfg.population));
    {
        const StationPlan greedy = greedy_plan(inst);
        std::vector<char> bits(inst.candidates.size(), 0);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            bits[i] = greedy.contains(inst.candidates[i]) ? 1 : 0;
        }
        population.push_back(finish_individual(std::move(bits)));
    }
    while (population.size() < static_cast<std::size_t>(cfg.population)) {
        std::vector<char> bits(inst.candidates.size(), 0);
        double cost = 0.0;
        for (;;) {
            std::vector<std::size_t> affordable;
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (!bits[i] &&
                    cost + inst.cost_of(inst.candidates[i]) <= inst.budget + kFeasEps) {
                    affordable.push_back(i);
                }
            }
            if (affordable.empty()) break;
            std::uniform_int_distribution<std::size_t> pick(0, affordable.size() - 1);
            const std::size_t open = affordable[pick(rng)];
            bits[open] = 1;
            cost += inst.cost_of(inst.candidates[open]);
        }
        population.push_back(finish_individual(std::move(bits)));
    }
    if (log) log->push_back(population_stats(0, population));

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        std::vector<Individual> children;
        children.reserve(static_cast<std::size_t>(cfg.children));
        for (int j = 0; j < cfg.children; ++j) {
            std::vector<char> bits;
            if (j % 2 == 0) {
                const auto [a, b] = tournament_select(population, rng);
                bits = fusion_crossover(population[a], population[b], rng,
                                        cfg.literal_crossover);
            } else {
                bits = mutate_worst(population, p_mut, rng);
            }
            children.push_back(finish_individual(std::move(bits)));
        }
        replace(population, std::move(children));
        if (log) log->push_back(population_stats(gen, population));
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
        if (population[i].fitness > population[best].fitness) best = i;
    }
    SolveResult result;
    result.plan = population[best].plan;
    result.objective = population[best].fitness;
    result.proven_optimal = false;
    result.nodes_explored = evaluations;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

std::string ga_log_to_csv(const std::vector<GenerationStats>& log) {
    std::ostringstream out;
    out << "generation,best,mean,worst\n";
    for (const GenerationStats& row : log) {
        out << row.generation << ',' << fmt_double(row.best) << ','
            << fmt_double(row.mean) << ',' << fmt_double(row.worst) << '\n';
    }
    return out.str();
}

}  // namespace afslab
