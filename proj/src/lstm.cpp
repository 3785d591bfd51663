#include "gwlion/lstm.hpp"

#include <cmath>
#include <string>

namespace gwlion {

namespace {

inline Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) {
    return v.unaryExpr([](double a) { return 1.0 / (1.0 + std::exp(-a)); });
}

void check_shapes(const LstmParams& p) {
    const int h = p.hidden();
    const Eigen::Index cols = p.w_forget.cols();
    const bool ok = p.w_forget.rows() == h && p.w_input.rows() == h && p.w_candidate.rows() == h &&
                    p.w_output.rows() == h && p.w_input.cols() == cols &&
                    p.w_candidate.cols() == cols && p.w_output.cols() == cols &&
                    p.b_input.size() == h && p.b_candidate.size() == h && p.b_output.size() == h &&
                    p.w_readout.size() == h && cols > h;
    if (!ok) throw std::invalid_argument("LstmParams: inconsistent shapes");
}

}  // namespace

LstmParams LstmParams::zeros(int hidden, int input_dim) {
    LstmParams p;
    const int cols = hidden + input_dim;
    p.w_forget = Eigen::MatrixXd::Zero(hidden, cols);
    p.w_input = Eigen::MatrixXd::Zero(hidden, cols);
    p.w_candidate = Eigen::MatrixXd::Zero(hidden, cols);
    p.w_output = Eigen::MatrixXd::Zero(hidden, cols);
    p.b_forget = Eigen::VectorXd::Zero(hidden);
    p.b_input = Eigen::VectorXd::Zero(hidden);
    p.b_candidate = Eigen::VectorXd::Zero(hidden);
    p.b_output = Eigen::VectorXd::Zero(hidden);
    p.w_readout = Eigen::VectorXd::Zero(hidden);
    p.b_readout = 0.0;
    return p;
}

std::pair<LstmState, GateActivations> lstm_cell_step(const LstmParams& params,
                                                     const Eigen::VectorXd& x,
                                                     const LstmState& state) {
    check_shapes(params);
    const int h = params.hidden();
    const int d = params.input_dim();
    if (x.size() != d || state.hidden.size() != h || state.cell.size() != h) {
        throw std::invalid_argument("lstm_cell_step: input/state shape mismatch");
    }

    Eigen::VectorXd z(h + d);  // [h_prev, x]
    z.head(h) = state.hidden;
    z.tail(d) = x;

    GateActivations g;
    g.forget = sigmoid(params.w_forget * z + params.b_forget);
    g.input = sigmoid(params.w_input * z + params.b_input);
    g.candidate = (params.w_candidate * z + params.b_candidate).array().tanh();
    g.output = sigmoid(params.w_output * z + params.b_output);

    LstmState next;
    next.cell = g.forget.cwiseProduct(state.cell) + g.input.cwiseProduct(g.candidate);
    next.hidden = g.output.cwiseProduct(next.cell.array().tanh().matrix());
    return {std::move(next), std::move(g)};
}

double lstm_forward(const LstmParams& params, const Eigen::MatrixXd& sequence) {
    if (sequence.rows() < 1 || sequence.cols() != params.input_dim()) {
        throw std::invalid_argument("lstm_forward: sequence shape mismatch");
    }
    LstmState state = LstmState::zeros(params.hidden());
    for (Eigen::Index t = 0; t < sequence.rows(); ++t) {
        state = lstm_cell_step(params, sequence.row(t).transpose(), state).first;
    }
    return params.w_readout.dot(state.hidden) + params.b_readout;
}

int genome_dim(int hidden, int input_dim) {
    return 4 * hidden * (hidden + input_dim) + 4 * hidden + hidden + 1;
}

Eigen::VectorXd params_to_genome(const LstmParams& params) {
    const int h = params.hidden();
    const int d = params.input_dim();
    Eigen::VectorXd g(genome_dim(h, d));
    int pos = 0;
    const int wsz = h * (h + d);
    for (const Eigen::MatrixXd* w :
         {&params.w_forget, &params.w_input, &params.w_candidate, &params.w_output}) {
        // row-major: Eigen stores column-major, so emit explicitly by row
        for (int r = 0; r < h; ++r) {
            g.segment(pos + r * (h + d), h + d) = w->row(r);
        }
        pos += wsz;
    }
    for (const Eigen::VectorXd* b :
         {&params.b_forget, &params.b_input, &params.b_candidate, &params.b_output}) {
        g.segment(pos, h) = *b;
        pos += h;
    }
    g.segment(pos, h) = params.w_readout;
    pos += h;
    g(pos) = params.b_readout;
    return g;
}

LstmParams genome_to_params(const Eigen::VectorXd& genome, int hidden, int input_dim) {
    if (genome.size() != genome_dim(hidden, input_dim)) {
        throw std::invalid_argument("genome_to_params: expected length " +
                                    std::to_string(genome_dim(hidden, input_dim)) + ", got " +
                                    std::to_string(genome.size()));
    }
    LstmParams p = LstmParams::zeros(hidden, input_dim);
    const int cols = hidden + input_dim;
    int pos = 0;
    for (Eigen::MatrixXd* w : {&p.w_forget, &p.w_input, &p.w_candidate, &p.w_output}) {
        for (int r = 0; r < hidden; ++r) {
            w->row(r) = genome.segment(pos + r * cols, cols);
        }
        pos += hidden * cols;
    }
    for (Eigen::VectorXd* b : {&p.b_forget, &p.b_input, &p.b_candidate, &p.b_output}) {
        *b = genome.segment(pos, hidden);
        pos += hidden;
    }
    p.w_readout = genome.segment(pos, hidden);
    pos += hidden;
    p.b_readout = genome(pos);
    return p;
}

double lstm_mse(const LstmParams& params, const WindowedSamples& samples) {
    if (samples.size() == 0) throw std::invalid_argument("lstm_mse: no samples");
    double acc = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const double e = lstm_forward(params, samples.inputs[s]) - samples.targets[s];
        acc += e * e;
    }
    return acc / static_cast<double>(samples.size());
}

double lstm_rmse(const LstmParams& params, const WindowedSamples& samples) {
    return std::sqrt(lstm_mse(params, samples));
}

Eigen::VectorXd bptt_gradient(const LstmParams& params, const WindowedSamples& samples) {
    if (samples.size() == 0) throw std::invalid_argument("bptt_gradient: no samples");
    const int h = params.hidden();
    const int d = params.input_dim();
    const int n = static_cast<int>(samples.size());

    LstmParams grad = LstmParams::zeros(h, d);

    std::vector<Eigen::VectorXd> zs, cells, tanh_cells;
    std::vector<GateActivations> gates;

    for (int s = 0; s < n; ++s) {
        const Eigen::MatrixXd& window = samples.inputs[s];
        const int steps = static_cast<int>(window.rows());
        zs.assign(steps, {});
        cells.assign(steps, {});
        tanh_cells.assign(steps, {});
        gates.assign(steps, {});

        LstmState state = LstmState::zeros(h);
        for (int t = 0; t < steps; ++t) {
            Eigen::VectorXd z(h + d);
            z.head(h) = state.hidden;
            z.tail(d) = window.row(t).transpose();
            auto [next, g] = lstm_cell_step(params, window.row(t).transpose(), state);
            zs[t] = std::move(z);
            cells[t] = next.cell;
            tanh_cells[t] = next.cell.array().tanh();
            gates[t] = std::move(g);
            state = std::move(next);
        }

        const double pred = params.w_readout.dot(state.hidden) + params.b_readout;
        if (!std::isfinite(pred)) {
            throw NumericError("bptt_gradient: non-finite prediction at sample " +
                               std::to_string(s));
        }
        const double residual_scale = 2.0 * (pred - samples.targets[s]) / n;

        grad.w_readout += residual_scale * state.hidden;
        grad.b_readout += residual_scale;

        Eigen::VectorXd dh = residual_scale * params.w_readout;
        Eigen::VectorXd dc = Eigen::VectorXd::Zero(h);
        for (int t = steps - 1; t >= 0; --t) {
            const GateActivations& g = gates[t];
            const Eigen::VectorXd dout = dh.cwiseProduct(tanh_cells[t]);
            dc += dh.cwiseProduct(g.output)
                      .cwiseProduct((1.0 - tanh_cells[t].array().square()).matrix());

            const Eigen::VectorXd c_prev = t > 0 ? cells[t - 1] : Eigen::VectorXd::Zero(h);
            const Eigen::VectorXd da_f = dc.cwiseProduct(c_prev)
                                             .cwiseProduct(g.forget)
                                             .cwiseProduct((1.0 - g.forget.array()).matrix());
            const Eigen::VectorXd da_i = dc.cwiseProduct(g.candidate)
                                             .cwiseProduct(g.input)
                                             .cwiseProduct((1.0 - g.input.array()).matrix());
            const Eigen::VectorXd da_c =
                dc.cwiseProduct(g.input)
                    .cwiseProduct((1.0 - g.candidate.array().square()).matrix());
            const Eigen::VectorXd da_o = dout.cwiseProduct(g.output)
                                             .cwiseProduct((1.0 - g.output.array()).matrix());

            grad.w_forget.noalias() += da_f * zs[t].transpose();
            grad.w_input.noalias() += da_i * zs[t].transpose();
            grad.w_candidate.noalias() += da_c * zs[t].transpose();
            grad.w_output.noalias() += da_o * zs[t].transpose();
            grad.b_forget += da_f;
            grad.b_input += da_i;
            grad.b_candidate += da_c;
            grad.b_output += da_o;

            const Eigen::VectorXd dz =
                params.w_forget.transpose() * da_f + params.w_input.transpose() * da_i +
                params.w_candidate.transpose() * da_c + params.w_output.transpose() * da_o;
            dh = dz.head(h);
            dc = dc.cwiseProduct(g.forget);
        }
    }

    Eigen::VectorXd flat = params_to_genome(grad);
    if (!flat.allFinite()) throw NumericError("bptt_gradient: non-finite gradient");
    return flat;
}

GdTrainResult train_lstm_gd(const WindowedSamples& samples, int hidden, double learning_rate,
                            int epochs, std::uint64_t seed) {
    if (learning_rate <= 0.0) throw std::invalid_argument("train_lstm_gd: learning rate <= 0");
    if (epochs < 0) throw std::invalid_argument("train_lstm_gd: negative epoch count");
    if (samples.size() == 0) throw std::invalid_argument("train_lstm_gd: no samples");

    const int d = static_cast<int>(samples.inputs.front().cols());
    Rng rng(seed);
    Eigen::VectorXd genome(genome_dim(hidden, d));
    for (Eigen::Index i = 0; i < genome.size(); ++i) genome(i) = rng.uniform(-0.1, 0.1);

    GdTrainResult result;
    result.params = genome_to_params(genome, hidden, d);
    result.trace.reserve(epochs + 1);
    result.trace.push_back(lstm_mse(result.params, samples));

    for (int e = 0; e < epochs; ++e) {
        const Eigen::VectorXd grad = bptt_gradient(result.params, samples);
        genome -= learning_rate * grad;
        result.params = genome_to_params(genome, hidden, d);
        const double mse = lstm_mse(result.params, samples);
        if (!std::isfinite(mse)) {
            throw NumericError("train_lstm_gd: diverged at epoch " + std::to_string(e + 1));
        }
        result.trace.push_back(mse);
    }
    return result;
}

}  // namespace gwlion
