#ifndef GWLION_LSTM_HPP
#define GWLION_LSTM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "gwlion/common.hpp"
#include "gwlion/dataio.hpp"

namespace gwlion {

/// Single-layer LSTM with a scalar linear readout.
///
/// Gate weights act on the concatenation [h_prev, x] (hidden part first),
/// so each gate matrix is hidden x (hidden + input_dim). The readout maps
/// the final hidden state to one normalized target value.
struct LstmParams {
    Eigen::MatrixXd w_forget;
    Eigen::MatrixXd w_input;
    Eigen::MatrixXd w_candidate;
    Eigen::MatrixXd w_output;
    Eigen::VectorXd b_forget;
    Eigen::VectorXd b_input;
    Eigen::VectorXd b_candidate;
    Eigen::VectorXd b_output;
    Eigen::VectorXd w_readout;
    double b_readout = 0.0;

    int hidden() const { return static_cast<int>(b_forget.size()); }
    int input_dim() const { return static_cast<int>(w_forget.cols() - w_forget.rows()); }

    /// All-zero parameters of the given shape.
    static LstmParams zeros(int hidden, int input_dim);
};

struct LstmState {
    Eigen::VectorXd cell;
    Eigen::VectorXd hidden;

    static LstmState zeros(int hidden_size) {
        return {Eigen::VectorXd::Zero(hidden_size), Eigen::VectorXd::Zero(hidden_size)};
    }
};

/// Post-activation gate values of one step; sigmoids in (0,1), tanh in (-1,1).
struct GateActivations {
    Eigen::VectorXd forget;
    Eigen::VectorXd input;
    Eigen::VectorXd candidate;
    Eigen::VectorXd output;
};

/// One cell update:
///   f = sigmoid(Wf [h,x] + bf)      i = sigmoid(Wi [h,x] + bi)
///   c~ = tanh(Wc [h,x] + bc)        C = f . C_prev + i . c~
///   o = sigmoid(Wo [h,x] + bo)      h = o . tanh(C)
std::pair<LstmState, GateActivations> lstm_cell_step(const LstmParams& params,
                                                     const Eigen::VectorXd& x,
                                                     const LstmState& state);

/// Runs the cell over the window rows from a zero state and applies the
/// readout: prediction = w_readout . h_last + b_readout.
double lstm_forward(const LstmParams& params, const Eigen::MatrixXd& sequence);

/// Flat parameter count: 4*H*(H+D) + 4*H + H + 1.
int genome_dim(int hidden, int input_dim);

/// Codec layout, in order: Wf rows, Wi rows, Wc rows, Wo rows (each matrix
/// row-major, hidden part of the concatenation first within a row), then
/// bf, bi, bc, bo, w_readout, b_readout. Bijective with genome_dim entries.
Eigen::VectorXd params_to_genome(const LstmParams& params);
LstmParams genome_to_params(const Eigen::VectorXd& genome, int hidden, int input_dim);

/// Mean squared error of lstm_forward over the samples.
double lstm_mse(const LstmParams& params, const WindowedSamples& samples);

/// Root-mean-square error of lstm_forward over the samples (the hybrid
/// training fitness).
double lstm_rmse(const LstmParams& params, const WindowedSamples& samples);

/// Gradient of the mean squared error with respect to every parameter,
/// via backpropagation through time over each full window. Returned in
/// codec (genome) order. Throws NumericError on non-finite intermediates.
Eigen::VectorXd bptt_gradient(const LstmParams& params, const WindowedSamples& samples);

struct GdTrainResult {
    LstmParams params;
    /// trace[0] is the MSE of the initialization; trace[e] the MSE after
    /// the e-th update (length epochs + 1).
    std::vector<double> trace;
};

/// Full-batch gradient descent from a seeded uniform(-0.1, 0.1) genome.
/// Throws NumericError naming the epoch if the objective turns non-finite.
GdTrainResult train_lstm_gd(const WindowedSamples& samples, int hidden, double learning_rate,
                            int epochs, std::uint64_t seed);

}  // namespace gwlion

#endif
