#ifndef GWLION_EVALKIT_HPP
#define GWLION_EVALKIT_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwlion/common.hpp"
#include "gwlion/dataio.hpp"

namespace gwlion {

struct MetricSet {
    double rmse = 0.0;
    double mse = 0.0;
    double mae = 0.0;
    double accuracy_pct = 0.0;
};

double mse(const std::vector<double>& pred, const std::vector<double>& obs);
double rmse(const std::vector<double>& pred, const std::vector<double>& obs);
double mae(const std::vector<double>& pred, const std::vector<double>& obs);

/// 100 * clamp(1 - rmse / (max(obs) - min(obs)), 0, 1). Throws on a
/// constant observation series (the range is undefined).
double accuracy_pct(const std::vector<double>& pred, const std::vector<double>& obs);

MetricSet compute_metrics(const std::vector<double>& pred, const std::vector<double>& obs);

/// Five-number summary over the per-fold accuracies.
struct CvSummary {
    std::vector<double> fold_accuracies;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

/// min/q1/median/q3/max with quartiles by the median-of-halves rule: the
/// sorted values are split around the overall median (which is excluded
/// from both halves when the count is odd) and each half contributes its
/// median. Requires at least 2 values.
CvSummary boxplot_stats(const std::vector<double>& values);

/// A trained predictor: normalized lag window in, normalized prediction out.
using Predictor = std::function<double(const Eigen::MatrixXd&)>;

/// One model family as the CV harness sees it: a name and a seeded
/// training routine.
struct ModelFamily {
    std::string name;
    std::function<Predictor(const WindowedSamples&, std::uint64_t seed)> train;
};

/// k-fold cross-validation: fold f is held out, the family is trained on
/// the remaining folds with seed = base_seed + f, and accuracy_pct is
/// computed on fold f after mapping predictions and targets through
/// `to_original` (identity by default; pass the denormalizer for metrics
/// in meters).
CvSummary cross_validate(const ModelFamily& family, const WindowedSamples& samples,
                         const FoldPlan& plan, std::uint64_t base_seed,
                         const std::function<double(double)>& to_original = {});

}  // namespace gwlion

#endif
