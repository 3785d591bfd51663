#include "gwlion/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gwlion {

namespace {

void check_pairs(const std::vector<double>& pred, const std::vector<double>& obs) {
    if (pred.empty() || pred.size() != obs.size()) {
        throw std::invalid_argument("metrics: empty or mismatched prediction/observation pair");
    }
}

/// Median of values[begin, end) assuming sorted input.
double median_of(const std::vector<double>& sorted, std::size_t begin, std::size_t end) {
    const std::size_t len = end - begin;
    const std::size_t mid = begin + len / 2;
    return len % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace

double mse(const std::vector<double>& pred, const std::vector<double>& obs) {
    check_pairs(pred, obs);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - obs[i];
        acc += e * e;
    }
    return acc / static_cast<double>(pred.size());
}

double rmse(const std::vector<double>& pred, const std::vector<double>& obs) {
    return std::sqrt(mse(pred, obs));
}

double mae(const std::vector<double>& pred, const std::vector<double>& obs) {
    check_pairs(pred, obs);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) acc += std::abs(pred[i] - obs[i]);
    return acc / static_cast<double>(pred.size());
}

double accuracy_pct(const std::vector<double>& pred, const std::vector<double>& obs) {
    check_pairs(pred, obs);
    const auto [lo, hi] = std::minmax_element(obs.begin(), obs.end());
    const double range = *hi - *lo;
    if (range <= 0.0) {
        throw std::invalid_argument("accuracy_pct: constant observations, range undefined");
    }
    const double nrmse = rmse(pred, obs) / range;
    return 100.0 * std::clamp(1.0 - nrmse, 0.0, 1.0);
}

MetricSet compute_metrics(const std::vector<double>& pred, const std::vector<double>& obs) {
    MetricSet m;
    m.mse = mse(pred, obs);
    m.rmse = std::sqrt(m.mse);
    m.mae = mae(pred, obs);
    m.accuracy_pct = accuracy_pct(pred, obs);
    return m;
}

CvSummary boxplot_stats(const std::vector<double>& values) {
    if (values.size() < 2) throw std::invalid_argument("boxplot_stats: need at least 2 values");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    CvSummary s;
    s.fold_accuracies = values;
    s.min = sorted.front();
    s.max = sorted.back();
    s.median = median_of(sorted, 0, sorted.size());

    const std::size_t half = sorted.size() / 2;
    s.q1 = median_of(sorted, 0, half);
    // odd count: the overall median is excluded from both halves
    s.q3 = median_of(sorted, sorted.size() - half, sorted.size());
    return s;
}

CvSummary cross_validate(const ModelFamily& family, const WindowedSamples& samples,
                         const FoldPlan& plan, std::uint64_t base_seed,
                         const std::function<double(double)>& to_original) {
    if (plan.folds() < 2) throw std::invalid_argument("cross_validate: need at least 2 folds");
    const auto convert = to_original ? to_original : [](double v) { return v; };

    std::vector<double> accuracies;
    accuracies.reserve(plan.folds());
    for (int f = 0; f < plan.folds(); ++f) {
        const WindowedSamples held_out = slice_fold(samples, plan, f);
        if (held_out.size() < 2) {
            throw std::invalid_argument("cross_validate: fold " + std::to_string(f) +
                                        " has fewer than 2 samples");
        }
        const WindowedSamples train_set = concat_excluding_fold(samples, plan, f);
        const Predictor predict = family.train(train_set, base_seed + static_cast<std::uint64_t>(f));

        std::vector<double> pred(held_out.size());
        std::vector<double> obs(held_out.size());
        for (std::size_t i = 0; i < held_out.size(); ++i) {
            pred[i] = convert(predict(held_out.inputs[i]));
            obs[i] = convert(held_out.targets[i]);
        }
        accuracies.push_back(accuracy_pct(pred, obs));
    }
    return boxplot_stats(accuracies);
}

}  // namespace gwlion
