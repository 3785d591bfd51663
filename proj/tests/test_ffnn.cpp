#include <doctest.h>

#include <cmath>
#include <vector>

#include "gwlion/ffnn.hpp"

using namespace gwlion;

namespace {

Eigen::VectorXd fd_gradient(const Eigen::VectorXd& flat, const std::vector<Eigen::Vector2d>& xs,
                            const std::vector<double>& ys, double eps) {
    Eigen::VectorXd grad(flat.size());
    Eigen::VectorXd probe = flat;
    for (Eigen::Index k = 0; k < flat.size(); ++k) {
        probe(k) = flat(k) + eps;
        const double up = ffnn_mse(ffnn_flat_to_params(probe), xs, ys);
        probe(k) = flat(k) - eps;
        const double down = ffnn_mse(ffnn_flat_to_params(probe), xs, ys);
        probe(k) = flat(k);
        grad(k) = (up - down) / (2.0 * eps);
    }
    return grad;
}

}  // namespace

TEST_CASE("ffnn forward closed cases") {
    FfnnParams p;
    SUBCASE("all zeros -> 0") { CHECK(ffnn_forward(p, Eigen::Vector2d(0.3, -1.0)) == 0.0); }
    SUBCASE("zero w2 makes the output the bias") {
        p.b2 = 0.3;
        CHECK(ffnn_forward(p, Eigen::Vector2d(5.0, 5.0)) == doctest::Approx(0.3));
    }
    SUBCASE("three sigmoids at 0.5 sum to 1.5") {
        p.w2 = Eigen::Vector3d::Ones();
        CHECK(ffnn_forward(p, Eigen::Vector2d(0.0, 0.0)) == doctest::Approx(1.5));
    }
}

TEST_CASE("output is affine in the readout parameters") {
    Rng rng(2);
    FfnnParams p;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 2; ++c) p.w1(r, c) = rng.uniform(-1, 1);
        p.b1(r) = rng.uniform(-1, 1);
        p.w2(r) = rng.uniform(-1, 1);
    }
    p.b2 = rng.uniform(-1, 1);

    FfnnParams doubled = p;
    doubled.w2 *= 2.0;
    doubled.b2 *= 2.0;

    const Eigen::Vector2d x(0.4, -0.2);  // same w1/b1, so hidden activations match
    CHECK(ffnn_forward(doubled, x) == doctest::Approx(2.0 * ffnn_forward(p, x)).epsilon(1e-12));
}

TEST_CASE("ffnn gradient matches central finite differences") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd flat(13);
        for (Eigen::Index i = 0; i < 13; ++i) flat(i) = rng.uniform(-1.0, 1.0);
        std::vector<Eigen::Vector2d> xs;
        std::vector<double> ys;
        for (int s = 0; s < 8; ++s) {
            xs.emplace_back(rng.uniform(), rng.uniform());
            ys.push_back(rng.uniform());
        }
        const Eigen::VectorXd analytic = ffnn_gradient(ffnn_flat_to_params(flat), xs, ys);
        const Eigen::VectorXd numeric = fd_gradient(flat, xs, ys, 1e-5);
        for (Eigen::Index k = 0; k < 13; ++k) {
            const double denom = std::max({std::abs(analytic(k)), std::abs(numeric(k)), 1e-8});
            CHECK(std::abs(analytic(k) - numeric(k)) / denom < 1e-6);
        }
    }
}

TEST_CASE("training learns a linear target on a grid") {
    // y = 0.4 x1 + 0.2 x2 over a 50-point grid; representable by the net.
    std::vector<Eigen::Vector2d> xs;
    std::vector<double> ys;
    for (int a = 0; a < 10; ++a) {
        for (int b = 0; b < 5; ++b) {
            const Eigen::Vector2d x(a / 9.0, b / 4.0);
            xs.push_back(x);
            ys.push_back(0.4 * x(0) + 0.2 * x(1));
        }
    }
    int successes = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const FfnnTrainResult r = train_ffnn_gd(xs, ys, 0.5, 5000, seed);
        if (r.trace.back() < 1e-3) ++successes;
    }
    CHECK(successes >= 4);
}

TEST_CASE("train_ffnn_gd contracts") {
    std::vector<Eigen::Vector2d> xs{{0.1, 0.9}, {0.5, 0.2}, {0.8, 0.7}};
    std::vector<double> ys{0.3, 0.6, 0.2};

    SUBCASE("zero epochs returns the init, deterministically") {
        const auto a = train_ffnn_gd(xs, ys, 0.1, 0, 3);
        const auto b = train_ffnn_gd(xs, ys, 0.1, 0, 3);
        CHECK(a.trace.size() == 1);
        CHECK((ffnn_params_to_flat(a.params) - ffnn_params_to_flat(b.params)).norm() == 0.0);
    }
    SUBCASE("identical seeds give identical trajectories") {
        const auto a = train_ffnn_gd(xs, ys, 0.3, 50, 9);
        const auto b = train_ffnn_gd(xs, ys, 0.3, 50, 9);
        CHECK(a.trace == b.trace);
        CHECK((ffnn_params_to_flat(a.params) - ffnn_params_to_flat(b.params)).norm() == 0.0);
    }
    SUBCASE("learning rate must be positive") {
        CHECK_THROWS_AS(train_ffnn_gd(xs, ys, -0.1, 10, 1), std::invalid_argument);
    }
}

TEST_CASE("ffnn_input_of takes the last window step") {
    WindowedSamples ws;
    ws.lag = 3;
    Eigen::MatrixXd w(3, 2);
    w << 1, 2, 3, 4, 5, 6;
    ws.inputs.push_back(w);
    ws.targets.push_back(0.0);
    ws.origin_index.push_back(3);
    const Eigen::Vector2d x = ffnn_input_of(ws, 0);
    CHECK(x(0) == 5.0);
    CHECK(x(1) == 6.0);
}
