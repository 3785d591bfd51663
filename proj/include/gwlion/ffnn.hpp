#ifndef GWLION_FFNN_HPP
#define GWLION_FFNN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "gwlion/common.hpp"
#include "gwlion/dataio.hpp"

namespace gwlion {

/// Fixed 2-input, 3-hidden, 1-output feedforward net: sigmoid hidden layer,
/// linear output unit.
struct FfnnParams {
    Eigen::Matrix<double, 3, 2> w1 = Eigen::Matrix<double, 3, 2>::Zero();
    Eigen::Vector3d b1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d w2 = Eigen::Vector3d::Zero();
    double b2 = 0.0;
};

double ffnn_forward(const FfnnParams& params, const Eigen::Vector2d& x);

/// Gradient of the mean squared error over (x, y) pairs, flattened in the
/// order w1 (row-major), b1, w2, b2.
Eigen::VectorXd ffnn_gradient(const FfnnParams& params, const std::vector<Eigen::Vector2d>& xs,
                              const std::vector<double>& ys);

Eigen::VectorXd ffnn_params_to_flat(const FfnnParams& params);
FfnnParams ffnn_flat_to_params(const Eigen::VectorXd& flat);

double ffnn_mse(const FfnnParams& params, const std::vector<Eigen::Vector2d>& xs,
                const std::vector<double>& ys);

/// The FFNN sees only the last window step of each sample (its two inputs
/// are one month's gwl and rainfall).
Eigen::Vector2d ffnn_input_of(const WindowedSamples& samples, std::size_t index);

struct FfnnTrainResult {
    FfnnParams params;
    /// trace[0] is the MSE of the initialization (length epochs + 1).
    std::vector<double> trace;
};

/// Full-batch gradient descent from a seeded uniform(-0.5, 0.5) init.
FfnnTrainResult train_ffnn_gd(const WindowedSamples& samples, double learning_rate, int epochs,
                              std::uint64_t seed);
FfnnTrainResult train_ffnn_gd(const std::vector<Eigen::Vector2d>& xs, const std::vector<double>& ys,
                              double learning_rate, int epochs, std::uint64_t seed);

}  // namespace gwlion

#endif
