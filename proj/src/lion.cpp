#include "gwlion/lion.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <string>

namespace gwlion {

void LaConfig::validate() const {
    if (n < 2) throw ConfigError("lion: pride size n must be >= 2");
    if (nrm < 1 || nrm >= n) throw ConfigError("lion: need 1 <= nrm < n");
    if (mutation_rate < 0.0 || mutation_rate > 1.0) {
        throw ConfigError("lion: mutation_rate must be in [0, 1]");
    }
    if (epochs < 1) throw ConfigError("lion: epochs must be >= 1");
    if (!(bound_low < bound_high)) throw ConfigError("lion: bound_low must be < bound_high");
    if (threads < 1) throw ConfigError("lion: threads must be >= 1");
}

std::vector<std::size_t> Population::resident_male_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pride.size(); ++i) {
        if (pride[i].role == Role::resident_male) idx.push_back(i);
    }
    return idx;
}

int MatingSelection::selected_count() const {
    return static_cast<int>(std::count(selected.begin(), selected.end(), true));
}

namespace {

std::string genome_excerpt(const Eigen::VectorXd& genome) {
    std::ostringstream out;
    out << "dim=" << genome.size() << " [";
    const Eigen::Index shown = std::min<Eigen::Index>(genome.size(), 6);
    for (Eigen::Index i = 0; i < shown; ++i) {
        if (i) out << ", ";
        out << genome(i);
    }
    if (genome.size() > shown) out << ", ...";
    out << "]";
    return out.str();
}

Eigen::VectorXd random_genome(int dim, const LaConfig& cfg, Rng& rng) {
    Eigen::VectorXd g(dim);
    for (int i = 0; i < dim; ++i) g(i) = rng.uniform(cfg.bound_low, cfg.bound_high);
    return g;
}

void sort_pride_and_assign_roles(Population& pop, int nrm) {
    std::stable_sort(pop.pride.begin(), pop.pride.end(),
                     [](const Lion& a, const Lion& b) { return a.fitness < b.fitness; });
    for (std::size_t i = 0; i < pop.pride.size(); ++i) {
        pop.pride[i].role = i < static_cast<std::size_t>(nrm) ? Role::resident_male : Role::female;
    }
}

void refresh_best_ever(Population& pop) {
    for (const Lion& lion : pop.pride) {
        if (lion.fitness < pop.best_ever.fitness) pop.best_ever = lion;
    }
    for (const Lion& lion : pop.nomads) {
        if (lion.fitness < pop.best_ever.fitness) pop.best_ever = lion;
    }
}

}  // namespace

std::vector<double> evaluate_batch(const std::vector<Eigen::VectorXd>& genomes,
                                   const FitnessFn& fitness, int threads) {
    std::vector<double> values(genomes.size());
    const std::size_t count = genomes.size();
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) values[i] = fitness(genomes[i]);
    } else {
        const std::size_t workers = std::min<std::size_t>(threads, count);
        std::vector<std::future<void>> tasks;
        tasks.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            tasks.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t i = w; i < count; i += workers) values[i] = fitness(genomes[i]);
            }));
        }
        for (auto& t : tasks) t.get();
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(values[i])) {
            throw NumericError("lion: non-finite fitness for genome " +
                               genome_excerpt(genomes[i]));
        }
    }
    return values;
}

Population init_population(const LaConfig& config, int dim, const FitnessFn& fitness, Rng& rng,
                           std::uint64_t& evaluations) {
    if (dim < 1) throw ConfigError("lion: dimension must be >= 1");

    std::vector<Eigen::VectorXd> genomes;
    genomes.reserve(2 * config.n);
    for (int i = 0; i < 2 * config.n; ++i) genomes.push_back(random_genome(dim, config, rng));
    const std::vector<double> values = evaluate_batch(genomes, fitness, config.threads);
    evaluations += genomes.size();

    Population pop;
    pop.pride.reserve(config.n);
    pop.nomads.reserve(2 * config.n);
    for (int i = 0; i < config.n; ++i) {
        pop.pride.push_back({std::move(genomes[i]), values[i], Role::female});
    }
    for (int i = config.n; i < 2 * config.n; ++i) {
        pop.nomads.push_back({std::move(genomes[i]), values[i], Role::nomad});
    }
    sort_pride_and_assign_roles(pop, config.nrm);

    pop.best_ever = pop.pride.front();
    refresh_best_ever(pop);
    pop.epoch = 0;
    return pop;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> mate(const Eigen::VectorXd& female,
                                                 const std::vector<Eigen::VectorXd>& males,
                                                 const MatingSelection& sel) {
    if (males.empty() || sel.selected.size() != males.size()) {
        throw std::invalid_argument("mate: selection mask does not match male count");
    }
    const int chosen = sel.selected_count();
    if (chosen == 0) throw std::invalid_argument("mate: no male selected");

    Eigen::VectorXd male_mean = Eigen::VectorXd::Zero(female.size());
    for (std::size_t i = 0; i < males.size(); ++i) {
        if (!sel.selected[i]) continue;
        if (males[i].size() != female.size()) {
            throw std::invalid_argument("mate: genome length mismatch");
        }
        male_mean += males[i];
    }
    male_mean /= static_cast<double>(chosen);

    const double a = sel.alpha;
    if (a == 0.0) return {male_mean, female};
    if (a == 1.0) return {female, male_mean};
    // offspring2 = (1-a)*female + a*mean, realized as the parental sum minus
    // offspring1 so the pair conserves female + mean bitwise.
    const Eigen::VectorXd first = a * female + (1.0 - a) * male_mean;
    return {first, female + male_mean - first};
}

Eigen::VectorXd mutate(const Eigen::VectorXd& genome, double rate, double bound_low,
                       double bound_high, Rng& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutate: rate must be in [0, 1]");
    Eigen::VectorXd out = genome;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (rng.bernoulli(rate)) out(i) = rng.uniform(bound_low, bound_high);
    }
    return out;
}

DefenseOutcome defense_step(Population& population, std::vector<Lion> cubs,
                            const LaConfig& config, int dim, const FitnessFn& fitness, Rng& rng,
                            std::uint64_t& evaluations) {
    DefenseOutcome outcome;
    const std::size_t n = config.n;

    // Maturing cubs go after the weakest resident male; a strictly fitter
    // cub takes his pride slot and the loser joins the nomads.
    for (Lion& cub : cubs) {
        const auto males = population.resident_male_indices();
        std::size_t worst = males.front();
        for (std::size_t m : males) {
            if (population.pride[m].fitness > population.pride[worst].fitness) worst = m;
        }
        if (cub.fitness < population.pride[worst].fitness) {
            Lion displaced = population.pride[worst];
            displaced.role = Role::nomad;
            cub.role = Role::resident_male;
            population.pride[worst] = std::move(cub);
            population.nomads.push_back(std::move(displaced));
            ++outcome.cub_wins;
        }
    }

    // Every nomad (including males displaced above) challenges one resident
    // male drawn uniformly; strict improvement swaps the two lions.
    const std::size_t challengers = population.nomads.size();
    std::vector<bool> lost(challengers, false);
    const auto males = population.resident_male_indices();
    for (std::size_t j = 0; j < challengers; ++j) {
        const std::size_t target = males[rng.index(males.size())];
        if (population.nomads[j].fitness < population.pride[target].fitness) {
            std::swap(population.nomads[j], population.pride[target]);
            population.pride[target].role = Role::resident_male;
            population.nomads[j].role = Role::nomad;
            ++outcome.nomad_wins;
        } else {
            lost[j] = true;
        }
    }

    // Restore group sizes. Pride surplus (none in the normal flow) is
    // expelled worst-first, the nomad pool is truncated to its n best, and
    // beaten challengers are resampled fresh to keep exploration going.
    while (population.pride.size() > n) {
        auto worst = std::max_element(
            population.pride.begin(), population.pride.end(),
            [](const Lion& a, const Lion& b) { return a.fitness < b.fitness; });
        worst->role = Role::nomad;
        population.nomads.push_back(std::move(*worst));
        population.pride.erase(worst);
        lost.push_back(false);
    }

    std::vector<std::size_t> order(population.nomads.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return population.nomads[a].fitness < population.nomads[b].fitness;
    });
    order.resize(std::min(order.size(), n));

    std::vector<Lion> survivors;
    survivors.reserve(n);
    std::vector<std::size_t> to_refresh;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        survivors.push_back(std::move(population.nomads[order[rank]]));
        if (lost[order[rank]]) to_refresh.push_back(rank);
    }
    while (survivors.size() < n) {
        to_refresh.push_back(survivors.size());
        survivors.push_back({Eigen::VectorXd(), 0.0, Role::nomad});
    }

    if (!to_refresh.empty()) {
        std::vector<Eigen::VectorXd> fresh;
        fresh.reserve(to_refresh.size());
        for (std::size_t i = 0; i < to_refresh.size(); ++i) {
            fresh.push_back(random_genome(dim, config, rng));
        }
        const std::vector<double> values = evaluate_batch(fresh, fitness, config.threads);
        evaluations += fresh.size();
        for (std::size_t i = 0; i < to_refresh.size(); ++i) {
            survivors[to_refresh[i]] = {std::move(fresh[i]), values[i], Role::nomad};
        }
        outcome.refreshed_nomads = static_cast<int>(to_refresh.size());
    }

    population.nomads = std::move(survivors);
    return outcome;
}

void territorial_takeover(Population& population, int nrm) {
    sort_pride_and_assign_roles(population, nrm);
    Lion& weakest = population.pride.back();
    if (population.best_ever.fitness < weakest.fitness) {
        const Role slot_role = weakest.role;
        weakest = population.best_ever;
        weakest.role = slot_role;
    }
    refresh_best_ever(population);
}

OptimizeResult optimize(const FitnessFn& fitness, int dim, const LaConfig& config,
                        const ProgressSink& sink, const PopulationObserver& observer) {
    config.validate();
    if (!fitness) throw ConfigError("lion: missing fitness function");

    Rng rng(config.seed);
    std::uint64_t evaluations = 0;
    Population pop = init_population(config, dim, fitness, rng, evaluations);
    if (observer) observer(pop);

    OptimizeResult result;
    result.trace.reserve(config.epochs);

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        // Mating: every female has one event with the current resident
        // males. All random choices are drawn serially here so that the
        // parallel fitness pass cannot affect the stream.
        const auto male_idx = pop.resident_male_indices();
        std::vector<Eigen::VectorXd> male_genomes;
        male_genomes.reserve(male_idx.size());
        for (std::size_t m : male_idx) male_genomes.push_back(pop.pride[m].genome);

        std::vector<Lion> cubs;
        cubs.reserve(2 * (pop.pride.size() - male_idx.size()));
        for (const Lion& member : pop.pride) {
            if (member.role == Role::resident_male) continue;
            MatingSelection sel;
            sel.selected.resize(male_genomes.size());
            do {
                for (std::size_t m = 0; m < male_genomes.size(); ++m) {
                    sel.selected[m] = rng.bernoulli(0.5);
                }
            } while (sel.selected_count() == 0);
            sel.alpha = rng.uniform();

            auto [first, second] = mate(member.genome, male_genomes, sel);
            cubs.push_back({mutate(first, config.mutation_rate, config.bound_low,
                                   config.bound_high, rng),
                            0.0, Role::cub});
            cubs.push_back({mutate(second, config.mutation_rate, config.bound_low,
                                   config.bound_high, rng),
                            0.0, Role::cub});
        }

        std::vector<Eigen::VectorXd> cub_genomes;
        cub_genomes.reserve(cubs.size());
        for (const Lion& cub : cubs) cub_genomes.push_back(cub.genome);
        const std::vector<double> cub_fitness =
            evaluate_batch(cub_genomes, fitness, config.threads);
        evaluations += cub_genomes.size();
        for (std::size_t i = 0; i < cubs.size(); ++i) cubs[i].fitness = cub_fitness[i];

        defense_step(pop, std::move(cubs), config, dim, fitness, rng, evaluations);
        territorial_takeover(pop, config.nrm);
        pop.epoch = epoch;

        result.trace.push_back(pop.best_ever.fitness);
        if (sink) sink({epoch, pop.best_ever.fitness, evaluations});
        if (observer) observer(pop);
    }

    result.best_genome = pop.best_ever.genome;
    result.best_fitness = pop.best_ever.fitness;
    result.evaluations = evaluations;
    return result;
}

}  // namespace gwlion
