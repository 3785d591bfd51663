#include "gwlion/ffnn.hpp"

#include <cmath>
#include <string>

namespace gwlion {

namespace {

inline Eigen::Vector3d sigmoid3(const Eigen::Vector3d& v) {
    return v.unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); });
}

}  // namespace

double ffnn_forward(const FfnnParams& params, const Eigen::Vector2d& x) {
    const Eigen::Vector3d hidden = sigmoid3(params.w1 * x + params.b1);
    return params.w2.dot(hidden) + params.b2;
}

Eigen::VectorXd ffnn_params_to_flat(const FfnnParams& params) {
    Eigen::VectorXd flat(13);
    int pos = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 2; ++c) flat(pos++) = params.w1(r, c);
    for (int i = 0; i < 3; ++i) flat(pos++) = params.b1(i);
    for (int i = 0; i < 3; ++i) flat(pos++) = params.w2(i);
    flat(pos) = params.b2;
    return flat;
}

FfnnParams ffnn_flat_to_params(const Eigen::VectorXd& flat) {
    if (flat.size() != 13) throw std::invalid_argument("ffnn_flat_to_params: expected 13 values");
    FfnnParams p;
    int pos = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 2; ++c) p.w1(r, c) = flat(pos++);
    for (int i = 0; i < 3; ++i) p.b1(i) = flat(pos++);
    for (int i = 0; i < 3; ++i) p.w2(i) = flat(pos++);
    p.b2 = flat(pos);
    return p;
}

double ffnn_mse(const FfnnParams& params, const std::vector<Eigen::Vector2d>& xs,
                const std::vector<double>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("ffnn_mse: empty or mismatched inputs");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ffnn_forward(params, xs[i]) - ys[i];
        acc += e * e;
    }
    return acc / static_cast<double>(xs.size());
}

Eigen::VectorXd ffnn_gradient(const FfnnParams& params, const std::vector<Eigen::Vector2d>& xs,
                              const std::vector<double>& ys) {
    if (xs.empty() || xs.size() != ys.size()) {
        throw std::invalid_argument("ffnn_gradient: empty or mismatched inputs");
    }
    FfnnParams grad;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Eigen::Vector3d hidden = sigmoid3(params.w1 * xs[i] + params.b1);
        const double pred = params.w2.dot(hidden) + params.b2;
        const double g = 2.0 * (pred - ys[i]) / n;

        grad.w2 += g * hidden;
        grad.b2 += g;
        const Eigen::Vector3d da =
            (g * params.w2).cwiseProduct(hidden).cwiseProduct((1.0 - hidden.array()).matrix());
        grad.b1 += da;
        grad.w1 += da * xs[i].transpose();
    }
    return ffnn_params_to_flat(grad);
}

Eigen::Vector2d ffnn_input_of(const WindowedSamples& samples, std::size_t index) {
    const Eigen::MatrixXd& window = samples.inputs[index];
    return window.row(window.rows() - 1).transpose();
}

FfnnTrainResult train_ffnn_gd(const std::vector<Eigen::Vector2d>& xs,
                              const std::vector<double>& ys, double learning_rate, int epochs,
                              std::uint64_t seed) {
    if (learning_rate <= 0.0) throw std::invalid_argument("train_ffnn_gd: learning rate <= 0");
    if (epochs < 0) throw std::invalid_argument("train_ffnn_gd: negative epoch count");

    Rng rng(seed);
    Eigen::VectorXd flat(13);
    for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = rng.uniform(-0.5, 0.5);

    FfnnTrainResult result;
    result.params = ffnn_flat_to_params(flat);
    result.trace.reserve(epochs + 1);
    result.trace.push_back(ffnn_mse(result.params, xs, ys));

    for (int e = 0; e < epochs; ++e) {
        flat -= learning_rate * ffnn_gradient(result.params, xs, ys);
        result.params = ffnn_flat_to_params(flat);
        const double mse = ffnn_mse(result.params, xs, ys);
        if (!std::isfinite(mse)) {
            throw NumericError("train_ffnn_gd: diverged at epoch " + std::to_string(e + 1));
        }
        result.trace.push_back(mse);
    }
    return result;
}

FfnnTrainResult train_ffnn_gd(const WindowedSamples& samples, double learning_rate, int epochs,
                              std::uint64_t seed) {
    std::vector<Eigen::Vector2d> xs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) xs[i] = ffnn_input_of(samples, i);
    return train_ffnn_gd(xs, samples.targets, learning_rate, epochs, seed);
}

}  // namespace gwlion
