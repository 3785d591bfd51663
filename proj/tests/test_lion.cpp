#include <doctest.h>

#include <atomic>
#include <cmath>
#include <map>
#include <vector>

#include "gwlion/lion.hpp"

using namespace gwlion;

namespace {

LaConfig small_config(std::uint64_t seed) {
    LaConfig cfg;
    cfg.n = 5;
    cfg.nrm = 2;
    cfg.epochs = 10;
    cfg.seed = seed;
    return cfg;
}

double sphere(const Eigen::VectorXd& g) { return g.squaredNorm(); }

}  // namespace

TEST_CASE("config validation") {
    LaConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SUBCASE("nrm must leave a female") {
        cfg.n = 2;
        cfg.nrm = 2;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
        cfg.nrm = 1;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("bounds must be ordered") {
        cfg.bound_low = 1.0;
        cfg.bound_high = -1.0;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
    SUBCASE("mutation rate bounded") {
        cfg.mutation_rate = 1.5;
        CHECK_THROWS_AS(cfg.validate(), ConfigError);
    }
}

TEST_CASE("init_population counts, bounds and determinism") {
    const LaConfig cfg = small_config(42);
    std::uint64_t evals = 0;
    std::atomic<int> calls{0};
    const FitnessFn fitness = [&calls](const Eigen::VectorXd& g) {
        ++calls;
        return sphere(g);
    };

    Rng rng(cfg.seed);
    const Population pop = init_population(cfg, 4, fitness, rng, evals);

    CHECK(pop.pride.size() == 5);
    CHECK(pop.nomads.size() == 5);
    CHECK(evals == 10);
    CHECK(calls.load() == 10);
    CHECK(pop.resident_male_indices().size() == 2);

    for (const Lion& lion : pop.pride) {
        for (Eigen::Index i = 0; i < lion.genome.size(); ++i) {
            CHECK(lion.genome(i) >= cfg.bound_low);
            CHECK(lion.genome(i) <= cfg.bound_high);
        }
        CHECK(lion.fitness == sphere(lion.genome));
    }
    for (const Lion& lion : pop.pride) CHECK(pop.best_ever.fitness <= lion.fitness);
    for (const Lion& lion : pop.nomads) CHECK(pop.best_ever.fitness <= lion.fitness);

    SUBCASE("identical seed reproduces the population") {
        Rng rng2(cfg.seed);
        std::uint64_t evals2 = 0;
        const Population again = init_population(cfg, 4, fitness, rng2, evals2);
        for (std::size_t i = 0; i < pop.pride.size(); ++i) {
            CHECK((again.pride[i].genome - pop.pride[i].genome).norm() == 0.0);
        }
    }
    SUBCASE("non-finite fitness is reported") {
        Rng rng3(1);
        std::uint64_t evals3 = 0;
        const FitnessFn bad = [](const Eigen::VectorXd&) {
            return std::numeric_limits<double>::quiet_NaN();
        };
        CHECK_THROWS_AS(init_population(cfg, 4, bad, rng3, evals3), NumericError);
    }
}

TEST_CASE("mate implements the linear parent combination") {
    SUBCASE("single selected male, alpha 0.25") {
        const Eigen::Vector2d female(1.0, 1.0);
        const std::vector<Eigen::VectorXd> males{Eigen::Vector2d(3.0, 5.0)};
        const MatingSelection sel{0.25, {true}};
        const auto [o1, o2] = mate(female, males, sel);
        CHECK(o1(0) == doctest::Approx(2.5));
        CHECK(o1(1) == doctest::Approx(4.0));
        CHECK(o2(0) == doctest::Approx(1.5));
        CHECK(o2(1) == doctest::Approx(2.0));
    }
    SUBCASE("alpha 0 swaps the roles exactly") {
        const Eigen::Vector2d female(0.2, -0.4);
        const std::vector<Eigen::VectorXd> males{Eigen::Vector2d(1.0, 2.0),
                                                 Eigen::Vector2d(3.0, 4.0)};
        const MatingSelection sel{0.0, {true, true}};
        const auto [o1, o2] = mate(female, males, sel);
        CHECK(o1(0) == doctest::Approx(2.0));  // mean of selected males
        CHECK(o1(1) == doctest::Approx(3.0));
        CHECK(o2(0) == female(0));
        CHECK(o2(1) == female(1));
    }
    SUBCASE("offspring conservation is bitwise on exactly-representable draws") {
        // Genes on a dyadic grid, dyadic alpha and power-of-two selection
        // counts keep every operation exact, so the algebraic identity can
        // be checked with == instead of a tolerance.
        Rng rng(8);
        const auto dyadic = [&rng](double lo, double hi) {
            return std::floor(rng.uniform(lo, hi) * 65536.0) / 65536.0;
        };
        for (int trial = 0; trial < 50; ++trial) {
            const int dim = 1 + static_cast<int>(rng.index(6));
            const int nrm = 1 + static_cast<int>(rng.index(4));
            Eigen::VectorXd female(dim);
            for (int i = 0; i < dim; ++i) female(i) = dyadic(-1, 1);
            std::vector<Eigen::VectorXd> males;
            for (int m = 0; m < nrm; ++m) {
                Eigen::VectorXd g(dim);
                for (int i = 0; i < dim; ++i) g(i) = dyadic(-1, 1);
                males.push_back(g);
            }
            MatingSelection sel;
            sel.alpha = static_cast<double>(rng.index(1025)) / 1024.0;
            do {
                sel.selected.assign(nrm, false);
                for (int m = 0; m < nrm; ++m) sel.selected[m] = rng.bernoulli(0.5);
            } while (sel.selected_count() != 1 && sel.selected_count() != 2 &&
                     sel.selected_count() != 4);

            Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
            for (std::size_t m = 0; m < males.size(); ++m) {
                if (sel.selected[m]) mean += males[m];
            }
            mean /= sel.selected_count();

            const auto [o1, o2] = mate(female, males, sel);
            const Eigen::VectorXd sum = o1 + o2;
            const Eigen::VectorXd expected = female + mean;
            for (int i = 0; i < dim; ++i) CHECK(sum(i) == expected(i));  // bitwise
        }
    }
    SUBCASE("empty selection is rejected") {
        CHECK_THROWS_AS(mate(Eigen::Vector2d(0, 0), {Eigen::Vector2d(1, 1)},
                             MatingSelection{0.5, {false}}),
                        std::invalid_argument);
    }
}

TEST_CASE("mutate") {
    Rng rng(77);
    Eigen::VectorXd genome(64);
    for (Eigen::Index i = 0; i < genome.size(); ++i) genome(i) = rng.uniform(-1, 1);

    SUBCASE("rate 0 is the identity") {
        const Eigen::VectorXd out = mutate(genome, 0.0, -1, 1, rng);
        CHECK((out - genome).norm() == 0.0);
    }
    SUBCASE("rate 1 resamples every gene inside the bounds") {
        const Eigen::VectorXd out = mutate(genome, 1.0, 5.0, 6.0, rng);
        for (Eigen::Index i = 0; i < out.size(); ++i) {
            CHECK(out(i) >= 5.0);
            CHECK(out(i) <= 6.0);
        }
    }
    SUBCASE("rate 0.2 mutates a binomially-plausible gene count") {
        Eigen::VectorXd big = Eigen::VectorXd::Constant(10000, 99.0);
        const Eigen::VectorXd out = mutate(big, 0.2, -1, 1, rng);
        int changed = 0;
        for (Eigen::Index i = 0; i < out.size(); ++i) changed += out(i) != 99.0;
        CHECK(changed >= 1880);  // +-3 sigma of Binomial(10000, 0.2)
        CHECK(changed <= 2120);
    }
}

TEST_CASE("defense_step fights and restoration") {
    const LaConfig cfg = small_config(5);
    std::uint64_t evals = 0;
    const FitnessFn fitness = sphere;
    Rng rng(cfg.seed);
    Population pop = init_population(cfg, 3, fitness, rng, evals);

    SUBCASE("a strictly fitter nomad swaps with the challenged male") {
        // Make nomad 0 unbeatable and every male bad, then run the step
        // with no cubs: the nomad must end up in the pride.
        for (Lion& lion : pop.pride) lion.fitness = 0.5;
        for (Lion& lion : pop.nomads) lion.fitness = 0.9;
        pop.nomads[0].fitness = 0.1;
        pop.nomads[0].genome.setConstant(7.0);
        defense_step(pop, {}, cfg, 3, [](const Eigen::VectorXd&) { return 0.9; }, rng, evals);
        bool found = false;
        for (const Lion& lion : pop.pride) {
            if (lion.fitness == 0.1) found = true;
        }
        CHECK(found);
    }
    SUBCASE("an equal-fitness nomad does not swap (incumbent wins ties)") {
        for (Lion& lion : pop.pride) lion.fitness = 0.5;
        for (Lion& lion : pop.nomads) lion.fitness = 0.5;
        defense_step(pop, {}, cfg, 3, [](const Eigen::VectorXd&) { return 0.5; }, rng, evals);
        for (const Lion& lion : pop.pride) CHECK(lion.fitness == 0.5);
    }
    SUBCASE("a winning cub displaces the worst male, who turns nomad") {
        const auto males = pop.resident_male_indices();
        double worst = 0.0;
        for (std::size_t m : males) worst = std::max(worst, pop.pride[m].fitness);

        Lion cub;
        cub.genome = Eigen::VectorXd::Zero(3);
        cub.fitness = 0.0;  // beats everyone
        cub.role = Role::cub;
        const DefenseOutcome outcome =
            defense_step(pop, {cub}, cfg, 3, fitness, rng, evals);
        CHECK(outcome.cub_wins == 1);
        bool cub_in_pride = false;
        for (const Lion& lion : pop.pride) {
            if (lion.fitness == 0.0) cub_in_pride = true;
        }
        CHECK(cub_in_pride);
    }
    SUBCASE("group sizes are restored to n/n") {
        std::vector<Lion> cubs;
        for (int i = 0; i < 6; ++i) {
            Lion cub;
            cub.genome = Eigen::VectorXd::Constant(3, 0.01 * (i + 1));
            cub.fitness = sphere(cub.genome);
            cub.role = Role::cub;
            cubs.push_back(cub);
        }
        defense_step(pop, cubs, cfg, 3, fitness, rng, evals);
        CHECK(pop.pride.size() == 5);
        CHECK(pop.nomads.size() == 5);
        CHECK(pop.resident_male_indices().size() == 2);
    }
}

TEST_CASE("territorial takeover sorts, promotes and preserves the best") {
    Population pop;
    const auto lion_with = [](double fitness) {
        Lion lion;
        lion.genome = Eigen::VectorXd::Constant(2, fitness);
        lion.fitness = fitness;
        lion.role = Role::female;
        return lion;
    };
    pop.pride = {lion_with(0.9), lion_with(0.2), lion_with(0.5)};
    pop.nomads = {lion_with(0.7)};
    pop.best_ever = lion_with(0.1);

    territorial_takeover(pop, 2);

    CHECK(pop.pride[0].fitness == 0.2);
    CHECK(pop.pride[0].role == Role::resident_male);
    CHECK(pop.pride[1].fitness == 0.5);
    CHECK(pop.pride[1].role == Role::resident_male);
    // elitism: the worst slot now carries the best-ever clone
    CHECK(pop.pride[2].fitness == 0.1);
    CHECK(pop.best_ever.fitness == 0.1);

    SUBCASE("best_ever never worsens") {
        territorial_takeover(pop, 2);
        CHECK(pop.best_ever.fitness == 0.1);
    }
}

TEST_CASE("optimize on a 1-d quadratic") {
    const FitnessFn f = [](const Eigen::VectorXd& g) {
        return (g(0) - 0.5) * (g(0) - 0.5);
    };
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        LaConfig cfg;
        cfg.n = 10;
        cfg.seed = seed;
        const OptimizeResult r = optimize(f, 1, cfg);
        if (r.best_fitness < 1e-4) ++successes;
        CHECK(r.trace.size() == 100);
    }
    CHECK(successes >= 4);
}

TEST_CASE("single-epoch run contracts") {
    LaConfig cfg = small_config(3);
    cfg.epochs = 1;
    double init_best = 0.0;
    const OptimizeResult r = optimize(sphere, 4, cfg, {}, [&](const Population& pop) {
        if (pop.epoch == 0) init_best = pop.best_ever.fitness;
    });
    CHECK(r.trace.size() == 1);
    CHECK(r.best_fitness <= init_best);
}

TEST_CASE("trace is non-increasing for randomized fitness landscapes") {
    Rng maker(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int dim = 1 + static_cast<int>(maker.index(6));
        Eigen::VectorXd shift(dim);
        for (int i = 0; i < dim; ++i) shift(i) = maker.uniform(-0.5, 0.5);
        const double wobble = maker.uniform(0.0, 3.0);
        const FitnessFn f = [shift, wobble](const Eigen::VectorXd& g) {
            const Eigen::VectorXd d = g - shift;
            return d.squaredNorm() + wobble * std::abs(std::sin(10.0 * d.sum()));
        };
        LaConfig cfg = small_config(maker.next_u64());
        cfg.epochs = 15;
        const OptimizeResult r = optimize(f, dim, cfg);
        for (std::size_t e = 1; e < r.trace.size(); ++e) CHECK(r.trace[e] <= r.trace[e - 1]);
    }
}

TEST_CASE("population invariants hold at every epoch boundary") {
    LaConfig cfg = small_config(21);
    cfg.epochs = 12;
    const FitnessFn f = sphere;
    optimize(f, 6, cfg, {}, [&](const Population& pop) {
        CHECK(pop.pride.size() == 5);
        CHECK(pop.nomads.size() == 5);
        CHECK(pop.resident_male_indices().size() == 2);
        for (const Lion& lion : pop.pride) {
            CHECK(pop.best_ever.fitness <= lion.fitness);
            CHECK(lion.fitness == f(lion.genome));  // stored fitness is exact
        }
        for (const Lion& lion : pop.nomads) {
            CHECK(pop.best_ever.fitness <= lion.fitness);
            CHECK(lion.fitness == f(lion.genome));
        }
    });
}

TEST_CASE("evaluation budget is reported exactly") {
    std::atomic<std::uint64_t> calls{0};
    const FitnessFn counted = [&calls](const Eigen::VectorXd& g) {
        ++calls;
        return sphere(g);
    };
    LaConfig cfg = small_config(9);
    cfg.epochs = 20;

    std::uint64_t last_reported = 0;
    std::uint64_t previous = 2 * static_cast<std::uint64_t>(cfg.n);
    const int offspring_per_epoch = 2 * (cfg.n - cfg.nrm);
    const OptimizeResult r = optimize(counted, 5, cfg, [&](const Progress& p) {
        const std::uint64_t delta = p.evaluations - previous;
        CHECK(delta >= static_cast<std::uint64_t>(offspring_per_epoch));  // offspring + refreshed
        previous = p.evaluations;
        last_reported = p.evaluations;
    });
    CHECK(r.evaluations == calls.load());
    CHECK(r.evaluations == last_reported);
}

TEST_CASE("identical seeds give identical runs; thread count changes nothing") {
    LaConfig cfg = small_config(123);
    cfg.epochs = 8;
    const OptimizeResult a = optimize(sphere, 7, cfg);
    const OptimizeResult b = optimize(sphere, 7, cfg);
    CHECK(a.trace == b.trace);
    CHECK((a.best_genome - b.best_genome).norm() == 0.0);

    cfg.threads = 4;
    const OptimizeResult c = optimize(sphere, 7, cfg);
    CHECK(a.trace == c.trace);
    CHECK((a.best_genome - c.best_genome).norm() == 0.0);
    CHECK(a.evaluations == c.evaluations);
}

TEST_CASE("non-finite fitness propagates out of optimize") {
    const FitnessFn bad = [](const Eigen::VectorXd& g) {
        return g(0) > 0.8 ? std::numeric_limits<double>::infinity() : g.squaredNorm();
    };
    LaConfig cfg = small_config(31);
    cfg.epochs = 50;
    CHECK_THROWS_AS(optimize(bad, 2, cfg), NumericError);
}
