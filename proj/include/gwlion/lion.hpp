#ifndef GWLION_LION_HPP
#define GWLION_LION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

#include "gwlion/common.hpp"

namespace gwlion {

/// Black-box fitness over a flat genome; lower is better. Must be pure:
/// batches of candidates may be evaluated concurrently.
using FitnessFn = std::function<double(const Eigen::VectorXd&)>;

enum class Role { resident_male, female, nomad, cub };

struct Lion {
    Eigen::VectorXd genome;
    double fitness = 0.0;
    Role role = Role::cub;
};

struct LaConfig {
    int n = 10;                  // pride size; total population is 2n
    int nrm = 2;                 // resident males per pride
    double mutation_rate = 0.2;  // per-gene uniform resample probability
    int epochs = 100;
    double bound_low = -1.0;  // initialization and mutation interval
    double bound_high = 1.0;
    std::uint64_t seed = 0;
    int threads = 1;  // fitness evaluation parallelism

    void validate() const;
};

/// Pride of n lions (nrm resident males, the rest females) plus n nomads.
struct Population {
    std::vector<Lion> pride;
    std::vector<Lion> nomads;
    Lion best_ever;
    int epoch = 0;

    std::vector<std::size_t> resident_male_indices() const;
};

/// One mating event: alpha and the per-male selection mask S.
struct MatingSelection {
    double alpha = 0.5;
    std::vector<bool> selected;  // length nrm, at least one set

    int selected_count() const;
};

/// Evaluates genomes[i] for every i, in parallel when threads > 1; results
/// are written by index, so the outcome is independent of the thread count.
/// Throws NumericError (with a genome excerpt) on a non-finite fitness.
std::vector<double> evaluate_batch(const std::vector<Eigen::VectorXd>& genomes,
                                   const FitnessFn& fitness, int threads);

/// Draws 2n uniform genomes (first n pride, last n nomads), evaluates them,
/// sorts the pride and assigns roles, and seeds best_ever.
Population init_population(const LaConfig& config, int dim, const FitnessFn& fitness, Rng& rng,
                           std::uint64_t& evaluations);

/// Linear parent combination: with m = mean of the selected males,
///   offspring1 = alpha * female + (1 - alpha) * m
///   offspring2 = (1 - alpha) * female + alpha * m
std::pair<Eigen::VectorXd, Eigen::VectorXd> mate(const Eigen::VectorXd& female,
                                                 const std::vector<Eigen::VectorXd>& males,
                                                 const MatingSelection& sel);

/// Each gene is independently resampled uniform in [low, high] with the
/// given probability.
Eigen::VectorXd mutate(const Eigen::VectorXd& genome, double rate, double bound_low,
                       double bound_high, Rng& rng);

struct DefenseOutcome {
    int cub_wins = 0;
    int nomad_wins = 0;
    int refreshed_nomads = 0;  // fresh random lions drawn (and evaluated)
};

/// Defense operator. Matured cubs fight the worst resident male (strict
/// improvement replaces him, the loser male turns nomad); every nomad then
/// challenges one uniformly chosen resident male and swaps in if strictly
/// fitter. Nomads that lose their challenge are replaced by fresh random
/// lions, surplus pride members are expelled to the nomad group, and the
/// nomad group is truncated (worst first) or refilled back to n.
DefenseOutcome defense_step(Population& population, std::vector<Lion> cubs,
                            const LaConfig& config, int dim, const FitnessFn& fitness, Rng& rng,
                            std::uint64_t& evaluations);

/// Selection: sorts the pride, promotes the nrm fittest to resident males,
/// re-injects best_ever over the worst pride member (strict improvement
/// only), then refreshes best_ever from the whole population.
void territorial_takeover(Population& population, int nrm);

struct Progress {
    int epoch = 0;
    double best_fitness = 0.0;
    std::uint64_t evaluations = 0;
};

using ProgressSink = std::function<void(const Progress&)>;
/// Test/diagnostic hook; receives the population at each epoch boundary.
using PopulationObserver = std::function<void(const Population&)>;

struct OptimizeResult {
    Eigen::VectorXd best_genome;
    double best_fitness = 0.0;
    std::vector<double> trace;  // per-epoch best fitness, non-increasing
    std::uint64_t evaluations = 0;
};

/// Runs the full loop: init, then per epoch mating (one event per female,
/// males picked independently with probability 1/2 and resampled until the
/// subset is nonempty, alpha uniform in [0,1]) -> mutation -> evaluation ->
/// defense -> territorial takeover, for exactly config.epochs epochs.
OptimizeResult optimize(const FitnessFn& fitness, int dim, const LaConfig& config,
                        const ProgressSink& sink = {}, const PopulationObserver& observer = {});

}  // namespace gwlion

#endif
