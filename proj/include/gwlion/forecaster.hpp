#ifndef GWLION_FORECASTER_HPP
#define GWLION_FORECASTER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gwlion/dataio.hpp"
#include "gwlion/evalkit.hpp"
#include "gwlion/ffnn.hpp"
#include "gwlion/lion.hpp"
#include "gwlion/lstm.hpp"

namespace gwlion {

enum class ModelKind { ffnn, lstm, lstm_la };

std::string to_string(ModelKind kind);
/// Accepts "ffnn", "lstm", "lstm-la" (CLI spelling) and "lstm_la".
ModelKind parse_model_kind(const std::string& name);

struct GdSettings {
    double learning_rate = 0.1;
    int epochs = 200;
};

/// Everything the pipelines need besides file paths.
struct PipelineConfig {
    int lag = 12;
    int hidden = 6;
    double train_fraction = 0.8;
    int folds = 5;
    std::uint64_t seed = 1;
    LaConfig la;
    GdSettings ffnn{0.5, 2000};
    GdSettings lstm{0.2, 300};

    void validate() const;
};

/// Forecasts are considered reliable up to one year ahead; larger
/// horizons run, but carry a warning.
inline constexpr int kLeadTimeLimitMonths = 12;

/// State captured at train time so a saved model can forecast on its own:
/// the last observed lag window, the month after it, and the mean training
/// rainfall per calendar month (used for future rainfall inputs).
struct ForecastContext {
    YearMonth start;
    Eigen::MatrixXd window;  // lag rows x 2, original units
    std::array<double, 12> climatology{};
};

struct TrainedModel {
    ModelKind kind = ModelKind::ffnn;
    std::variant<FfnnParams, LstmParams> params;
    ScalingParams scaling;
    int lag = 0;
    double train_fraction = 0.8;
    std::vector<double> training_trace;
    ForecastContext forecast;
};

struct ForecastResult {
    YearMonth start;
    int horizon = 0;
    std::vector<double> predictions;  // original gwl units, one per month
    std::string rainfall_assumption;
    bool beyond_lead_time = false;
};

/// Returns future rainfall for a given month.
using RainfallRule = std::function<double(const YearMonth&)>;

/// Normalized supervised data with the scaling fit on the training prefix
/// of the record range only (no test leakage).
struct PreparedData {
    ScalingParams scaling;
    WindowedSamples train;
    WindowedSamples test;
};

PreparedData prepare_supervised(const TimeSeriesDataset& dataset, int lag, double train_fraction);

/// Same windowing/split with an already-fit scaling (model evaluation path).
std::pair<WindowedSamples, WindowedSamples> split_with_scaling(const TimeSeriesDataset& dataset,
                                                               const ScalingParams& scaling,
                                                               int lag, double train_fraction);

struct HybridTrainResult {
    LstmParams params;
    std::vector<double> trace;  // per-epoch best training RMSE
    std::uint64_t evaluations = 0;
};

/// Lion Algorithm search over the flat LSTM genome; the fitness of a
/// genome is its training RMSE (normalized units). The returned trace is
/// checked to be non-increasing on every run.
HybridTrainResult train_hybrid(const WindowedSamples& samples, const LaConfig& config, int hidden,
                               const ProgressSink& sink = {});

/// Model families as the CV harness consumes them.
ModelFamily make_ffnn_family(const GdSettings& settings);
ModelFamily make_lstm_family(int hidden, const GdSettings& settings);
ModelFamily make_hybrid_family(int hidden, const LaConfig& config);

/// Forward pass of a trained model on a normalized window.
double model_forward_normalized(const TrainedModel& model, const Eigen::MatrixXd& window);

/// Normalizes a raw lag window with the model's stored scaling, runs the
/// model, and maps the output back to meters.
double predict_one(const TrainedModel& model, const Eigen::MatrixXd& window);

/// Recursive multi-step forecast: each prediction is appended to the
/// window (oldest step dropped); future rainfall comes from `rule`, by
/// default the stored monthly climatology.
ForecastResult forecast_recursive(const TrainedModel& model, Eigen::MatrixXd window,
                                  YearMonth start, int horizon, const RainfallRule& rule = {});

/// Trains one family on the chronological training split of the dataset
/// and packages it with everything needed to evaluate and forecast later.
TrainedModel train_model(ModelKind kind, const TimeSeriesDataset& dataset,
                         const PipelineConfig& config, const ProgressSink& sink = {},
                         std::uint64_t* hybrid_evaluations = nullptr);

/// Test-split metrics of a saved model, using its embedded scaling, lag
/// and split fraction.
MetricSet evaluate_model(const TrainedModel& model, const TimeSeriesDataset& dataset);

struct ModelEvaluation {
    MetricSet metrics;
    std::vector<double> test_predictions;  // original units
};

struct ComparisonReport {
    ModelEvaluation ffnn;
    ModelEvaluation lstm;
    ModelEvaluation lstm_la;
    std::vector<YearMonth> test_dates;
    std::vector<double> observed;  // original units
    std::uint64_t hybrid_evaluations = 0;
};

/// Trains all three models on the identical training split (same seed for
/// each) and evaluates them on the identical test split.
ComparisonReport compare_models(const TimeSeriesDataset& dataset, const PipelineConfig& config);

struct CrossValReport {
    CvSummary ffnn;
    CvSummary lstm;
    CvSummary lstm_la;
};

/// k-fold cross-validation of each family over the training samples.
CrossValReport crossval_models(const TimeSeriesDataset& dataset, const PipelineConfig& config);

}  // namespace gwlion

#endif
