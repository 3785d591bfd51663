#ifndef GWLION_DATAIO_HPP
#define GWLION_DATAIO_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "gwlion/common.hpp"

namespace gwlion {

/// Calendar month, the time axis of every series in the toolkit.
struct YearMonth {
    int year = 0;
    int month = 0;  // 1..12

    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }
    /// Months elapsed since year 0; total order and gap arithmetic.
    int ordinal() const { return year * 12 + (month - 1); }
    std::string str() const;  // "YYYY-MM"

    friend bool operator==(const YearMonth&, const YearMonth&) = default;
    friend auto operator<=>(const YearMonth& a, const YearMonth& b) {
        return a.ordinal() <=> b.ordinal();
    }
};

/// Parses "YYYY-MM"; throws DataError on anything else.
YearMonth parse_year_month(const std::string& text);

enum class Feature { gwl, rainfall };

/// Monthly groundwater-level (meters, depth to water) and rainfall (mm)
/// records on a gap-free, strictly increasing month axis.
struct TimeSeriesDataset {
    std::vector<YearMonth> timestamps;
    std::vector<double> gwl;
    std::vector<double> rainfall;

    std::size_t size() const { return timestamps.size(); }
    const std::vector<double>& feature(Feature f) const {
        return f == Feature::gwl ? gwl : rainfall;
    }
};

/// Min-max bounds per feature, fit on a training prefix only.
struct FeatureScale {
    double min = 0.0;
    double max = 0.0;
    bool constant = false;  // max == min in the fitted range
};

struct ScalingParams {
    FeatureScale gwl;
    FeatureScale rainfall;

    const FeatureScale& of(Feature f) const {
        return f == Feature::gwl ? gwl : rainfall;
    }
};

/// Supervised samples: lag windows of (gwl, rainfall) paired with the
/// next month's gwl, everything in normalized units.
struct WindowedSamples {
    /// One matrix per sample, lag rows x 2 columns (gwl, rainfall).
    std::vector<Eigen::MatrixXd> inputs;
    std::vector<double> targets;
    /// Dataset index of each sample's target month.
    std::vector<int> origin_index;
    int lag = 0;

    std::size_t size() const { return inputs.size(); }
};

/// Contiguous [begin, end) index blocks over the training samples.
struct FoldPlan {
    std::vector<std::pair<int, int>> ranges;

    int folds() const { return static_cast<int>(ranges.size()); }
};

/// Reads a `date,gwl_m,rainfall_mm` CSV. Rows are sorted by date if needed;
/// month gaps, duplicate months, malformed rows and non-finite values are
/// reported as DataError with the offending line or month.
TimeSeriesDataset load_csv(const std::string& path);

/// Writes a dataset back out in the same CSV schema (4 decimal places).
void save_csv(const TimeSeriesDataset& dataset, const std::string& path);

/// Per-feature min/max over records [0, range_end). range_end must be in
/// [1, dataset.size()]; fitting on the training prefix only avoids leakage.
ScalingParams fit_minmax(const TimeSeriesDataset& dataset, std::size_t range_end);

/// x -> (x - min) / (max - min); constant features map to 0.
double normalize_value(double x, const FeatureScale& scale);
/// Exact inverse of normalize_value for non-constant features.
double denormalize_value(double x, const FeatureScale& scale);

TimeSeriesDataset normalize(const TimeSeriesDataset& dataset, const ScalingParams& scaling);
std::vector<double> denormalize(const std::vector<double>& values, const ScalingParams& scaling,
                                Feature feature);

/// Sample i takes steps i..i+L-1 as input and the gwl at i+L as target;
/// yields dataset.size() - lag samples.
WindowedSamples make_windows(const TimeSeriesDataset& normalized, int lag);

/// First floor(train_fraction * N) samples train, the rest test. Order is
/// preserved; throws if either side would be empty.
std::pair<WindowedSamples, WindowedSamples> chrono_split(const WindowedSamples& samples,
                                                         double train_fraction);

/// k contiguous blocks; the first (N mod k) folds get the extra sample.
FoldPlan kfold_plan(int sample_count, int k);

/// Subset of samples by index ranges (used to assemble CV training sets).
WindowedSamples concat_excluding_fold(const WindowedSamples& samples, const FoldPlan& plan,
                                      int fold);
WindowedSamples slice_fold(const WindowedSamples& samples, const FoldPlan& plan, int fold);

}  // namespace gwlion

#endif
