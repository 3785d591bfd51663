#include "gwlion/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwlion {

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ffnn: return "ffnn";
        case ModelKind::lstm: return "lstm";
        case ModelKind::lstm_la: return "lstm_la";
    }
    throw std::logic_error("unknown model kind");
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "ffnn") return ModelKind::ffnn;
    if (name == "lstm") return ModelKind::lstm;
    if (name == "lstm-la" || name == "lstm_la") return ModelKind::lstm_la;
    throw ConfigError("unknown model '" + name + "' (expected ffnn, lstm or lstm-la)");
}

void PipelineConfig::validate() const {
    if (lag < 1) throw ConfigError("config: lag must be >= 1");
    if (hidden < 1) throw ConfigError("config: hidden must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("config: train_fraction must be in (0, 1)");
    }
    if (folds < 2) throw ConfigError("config: folds must be >= 2");
    if (ffnn.learning_rate <= 0.0 || lstm.learning_rate <= 0.0) {
        throw ConfigError("config: learning rates must be > 0");
    }
    if (ffnn.epochs < 0 || lstm.epochs < 0) throw ConfigError("config: negative epoch count");
    la.validate();
}

PreparedData prepare_supervised(const TimeSeriesDataset& dataset, int lag,
                                double train_fraction) {
    const int n_samples = static_cast<int>(dataset.size()) - lag;
    if (n_samples < 2) throw DataError("dataset too short for lag " + std::to_string(lag));
    const int n_train = static_cast<int>(std::floor(train_fraction * n_samples));
    if (n_train < 1 || n_train >= n_samples) {
        throw DataError("train fraction leaves an empty split");
    }
    // Training inputs and targets end at record lag + n_train - 1.
    const std::size_t fit_end = static_cast<std::size_t>(lag + n_train);

    PreparedData prepared;
    prepared.scaling = fit_minmax(dataset, fit_end);
    auto [train, test] = split_with_scaling(dataset, prepared.scaling, lag, train_fraction);
    prepared.train = std::move(train);
    prepared.test = std::move(test);
    return prepared;
}

std::pair<WindowedSamples, WindowedSamples> split_with_scaling(const TimeSeriesDataset& dataset,
                                                               const ScalingParams& scaling,
                                                               int lag, double train_fraction) {
    const TimeSeriesDataset normalized = normalize(dataset, scaling);
    const WindowedSamples samples = make_windows(normalized, lag);
    return chrono_split(samples, train_fraction);
}

HybridTrainResult train_hybrid(const WindowedSamples& samples, const LaConfig& config, int hidden,
                               const ProgressSink& sink) {
    if (samples.size() == 0) throw DataError("train_hybrid: no training samples");
    const int input_dim = static_cast<int>(samples.inputs.front().cols());
    const int dim = genome_dim(hidden, input_dim);

    const FitnessFn fitness = [&samples, hidden, input_dim](const Eigen::VectorXd& genome) {
        return lstm_rmse(genome_to_params(genome, hidden, input_dim), samples);
    };

    const OptimizeResult best = optimize(fitness, dim, config, sink);
    for (std::size_t e = 1; e < best.trace.size(); ++e) {
        if (best.trace[e] > best.trace[e - 1]) {
            throw std::logic_error("train_hybrid: best-fitness trace increased at epoch " +
                                   std::to_string(e + 1));
        }
    }

    HybridTrainResult result;
    result.params = genome_to_params(best.best_genome, hidden, input_dim);
    result.trace = best.trace;
    result.evaluations = best.evaluations;
    return result;
}

ModelFamily make_ffnn_family(const GdSettings& settings) {
    return {"ffnn", [settings](const WindowedSamples& samples, std::uint64_t seed) -> Predictor {
                const FfnnParams params =
                    train_ffnn_gd(samples, settings.learning_rate, settings.epochs, seed).params;
                return [params](const Eigen::MatrixXd& window) {
                    return ffnn_forward(params, window.row(window.rows() - 1).transpose());
                };
            }};
}

ModelFamily make_lstm_family(int hidden, const GdSettings& settings) {
    return {"lstm",
            [hidden, settings](const WindowedSamples& samples, std::uint64_t seed) -> Predictor {
                const LstmParams params =
                    train_lstm_gd(samples, hidden, settings.learning_rate, settings.epochs, seed)
                        .params;
                return [params](const Eigen::MatrixXd& window) {
                    return lstm_forward(params, window);
                };
            }};
}

ModelFamily make_hybrid_family(int hidden, const LaConfig& config) {
    return {"lstm_la",
            [hidden, config](const WindowedSamples& samples, std::uint64_t seed) -> Predictor {
                LaConfig seeded = config;
                seeded.seed = seed;
                const LstmParams params = train_hybrid(samples, seeded, hidden).params;
                return [params](const Eigen::MatrixXd& window) {
                    return lstm_forward(params, window);
                };
            }};
}

double model_forward_normalized(const TrainedModel& model, const Eigen::MatrixXd& window) {
    if (window.rows() != model.lag || window.cols() != 2) {
        throw std::invalid_argument("model forward: expected a " + std::to_string(model.lag) +
                                    "x2 window");
    }
    if (model.kind == ModelKind::ffnn) {
        return ffnn_forward(std::get<FfnnParams>(model.params),
                            window.row(window.rows() - 1).transpose());
    }
    return lstm_forward(std::get<LstmParams>(model.params), window);
}

double predict_one(const TrainedModel& model, const Eigen::MatrixXd& window) {
    if (window.rows() != model.lag || window.cols() != 2) {
        throw std::invalid_argument("predict_one: window length must equal the model lag");
    }
    Eigen::MatrixXd normalized(window.rows(), 2);
    for (Eigen::Index t = 0; t < window.rows(); ++t) {
        normalized(t, 0) = normalize_value(window(t, 0), model.scaling.gwl);
        normalized(t, 1) = normalize_value(window(t, 1), model.scaling.rainfall);
    }
    return denormalize_value(model_forward_normalized(model, normalized), model.scaling.gwl);
}

ForecastResult forecast_recursive(const TrainedModel& model, Eigen::MatrixXd window,
                                  YearMonth start, int horizon, const RainfallRule& rule) {
    if (horizon < 0) throw std::invalid_argument("forecast_recursive: negative horizon");
    if (window.rows() != model.lag || window.cols() != 2) {
        throw std::invalid_argument("forecast_recursive: window length must equal the model lag");
    }
    const auto climatology = model.forecast.climatology;
    const RainfallRule rainfall =
        rule ? rule : [climatology](const YearMonth& ym) { return climatology[ym.month - 1]; };

    ForecastResult result;
    result.start = start;
    result.horizon = horizon;
    result.beyond_lead_time = horizon > kLeadTimeLimitMonths;
    result.rainfall_assumption =
        rule ? "caller-supplied rainfall rule" : "monthly climatology of the training period";
    result.predictions.reserve(horizon);

    YearMonth current = start;
    for (int k = 0; k < horizon; ++k) {
        const double predicted = predict_one(model, window);
        if (!std::isfinite(predicted)) {
            throw NumericError("forecast_recursive: non-finite prediction at step " +
                               std::to_string(k + 1));
        }
        result.predictions.push_back(predicted);

        // Slide the window: drop the oldest month, append the predicted one.
        const Eigen::Index rows = window.rows();
        window.topRows(rows - 1) = window.bottomRows(rows - 1).eval();
        window(rows - 1, 0) = predicted;
        window(rows - 1, 1) = rainfall(current);
        current = current.next();
    }
    return result;
}

namespace {

ForecastContext build_forecast_context(const TimeSeriesDataset& dataset, int lag,
                                       std::size_t training_records) {
    ForecastContext ctx;
    const std::size_t n = dataset.size();
    ctx.start = dataset.timestamps.back().next();
    ctx.window.resize(lag, 2);
    for (int t = 0; t < lag; ++t) {
        const std::size_t i = n - lag + t;
        ctx.window(t, 0) = dataset.gwl[i];
        ctx.window(t, 1) = dataset.rainfall[i];
    }
    std::array<double, 12> sums{};
    std::array<int, 12> counts{};
    for (std::size_t i = 0; i < training_records; ++i) {
        const int m = dataset.timestamps[i].month - 1;
        sums[m] += dataset.rainfall[i];
        ++counts[m];
    }
    for (int m = 0; m < 12; ++m) {
        ctx.climatology[m] = counts[m] > 0 ? sums[m] / counts[m] : 0.0;
    }
    return ctx;
}

std::vector<double> collect_predictions(const TrainedModel& model, const WindowedSamples& test) {
    std::vector<double> out(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        out[i] = denormalize_value(model_forward_normalized(model, test.inputs[i]),
                                   model.scaling.gwl);
    }
    return out;
}

}  // namespace

TrainedModel train_model(ModelKind kind, const TimeSeriesDataset& dataset,
                         const PipelineConfig& config, const ProgressSink& sink,
                         std::uint64_t* hybrid_evaluations) {
    config.validate();
    const PreparedData prepared = prepare_supervised(dataset, config.lag, config.train_fraction);

    TrainedModel model;
    model.kind = kind;
    model.scaling = prepared.scaling;
    model.lag = config.lag;
    model.train_fraction = config.train_fraction;
    model.forecast = build_forecast_context(
        dataset, config.lag, static_cast<std::size_t>(config.lag) + prepared.train.size());

    switch (kind) {
        case ModelKind::ffnn: {
            auto trained = train_ffnn_gd(prepared.train, config.ffnn.learning_rate,
                                         config.ffnn.epochs, config.seed);
            model.params = trained.params;
            model.training_trace = std::move(trained.trace);
            break;
        }
        case ModelKind::lstm: {
            auto trained = train_lstm_gd(prepared.train, config.hidden,
                                         config.lstm.learning_rate, config.lstm.epochs,
                                         config.seed);
            model.params = trained.params;
            model.training_trace = std::move(trained.trace);
            break;
        }
        case ModelKind::lstm_la: {
            LaConfig la = config.la;
            la.seed = config.seed;
            auto trained = train_hybrid(prepared.train, la, config.hidden, sink);
            model.params = trained.params;
            model.training_trace = std::move(trained.trace);
            if (hybrid_evaluations) *hybrid_evaluations = trained.evaluations;
            break;
        }
    }
    return model;
}

MetricSet evaluate_model(const TrainedModel& model, const TimeSeriesDataset& dataset) {
    const auto [train, test] =
        split_with_scaling(dataset, model.scaling, model.lag, model.train_fraction);
    const std::vector<double> pred = collect_predictions(model, test);
    const std::vector<double> obs = denormalize(test.targets, model.scaling, Feature::gwl);
    return compute_metrics(pred, obs);
}

ComparisonReport compare_models(const TimeSeriesDataset& dataset, const PipelineConfig& config) {
    config.validate();
    const PreparedData prepared = prepare_supervised(dataset, config.lag, config.train_fraction);

    ComparisonReport report;
    report.observed = denormalize(prepared.test.targets, prepared.scaling, Feature::gwl);
    report.test_dates.reserve(prepared.test.size());
    for (int origin : prepared.test.origin_index) {
        report.test_dates.push_back(dataset.timestamps[origin]);
    }

    const auto evaluate = [&](const std::vector<double>& predictions) {
        ModelEvaluation ev;
        ev.test_predictions = predictions;
        ev.metrics = compute_metrics(predictions, report.observed);
        return ev;
    };
    const auto denorm_all = [&](std::vector<double> values) {
        return denormalize(values, prepared.scaling, Feature::gwl);
    };

    {
        const FfnnParams params = train_ffnn_gd(prepared.train, config.ffnn.learning_rate,
                                                config.ffnn.epochs, config.seed)
                                      .params;
        std::vector<double> pred(prepared.test.size());
        for (std::size_t i = 0; i < prepared.test.size(); ++i) {
            pred[i] = ffnn_forward(params, ffnn_input_of(prepared.test, i));
        }
        report.ffnn = evaluate(denorm_all(std::move(pred)));
    }
    {
        const LstmParams params = train_lstm_gd(prepared.train, config.hidden,
                                                config.lstm.learning_rate, config.lstm.epochs,
                                                config.seed)
                                      .params;
        std::vector<double> pred(prepared.test.size());
        for (std::size_t i = 0; i < prepared.test.size(); ++i) {
            pred[i] = lstm_forward(params, prepared.test.inputs[i]);
        }
        report.lstm = evaluate(denorm_all(std::move(pred)));
    }
    {
        LaConfig la = config.la;
        la.seed = config.seed;
        const HybridTrainResult trained = train_hybrid(prepared.train, la, config.hidden);
        report.hybrid_evaluations = trained.evaluations;
        std::vector<double> pred(prepared.test.size());
        for (std::size_t i = 0; i < prepared.test.size(); ++i) {
            pred[i] = lstm_forward(trained.params, prepared.test.inputs[i]);
        }
        report.lstm_la = evaluate(denorm_all(std::move(pred)));
    }
    return report;
}

CrossValReport crossval_models(const TimeSeriesDataset& dataset, const PipelineConfig& config) {
    config.validate();
    const PreparedData prepared = prepare_supervised(dataset, config.lag, config.train_fraction);
    const FoldPlan plan = kfold_plan(static_cast<int>(prepared.train.size()), config.folds);

    const FeatureScale gwl_scale = prepared.scaling.gwl;
    const std::function<double(double)> to_original = [gwl_scale](double v) {
        return denormalize_value(v, gwl_scale);
    };

    CrossValReport report;
    report.ffnn = cross_validate(make_ffnn_family(config.ffnn), prepared.train, plan, config.seed,
                                 to_original);
    report.lstm = cross_validate(make_lstm_family(config.hidden, config.lstm), prepared.train,
                                 plan, config.seed, to_original);
    report.lstm_la = cross_validate(make_hybrid_family(config.hidden, config.la), prepared.train,
                                    plan, config.seed, to_original);
    return report;
}

}  // namespace gwlion
