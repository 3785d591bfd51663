#include "gwlion/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace gwlion {

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

YearMonth parse_year_month(const std::string& text) {
    if (text.size() != 7 || text[4] != '-') {
        throw DataError("bad date '" + text + "' (expected YYYY-MM)");
    }
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw DataError("bad date '" + text + "' (expected YYYY-MM)");
        }
    }
    YearMonth ym{std::stoi(text.substr(0, 4)), std::stoi(text.substr(5, 2))};
    if (ym.month < 1 || ym.month > 12) {
        throw DataError("bad date '" + text + "' (month out of range)");
    }
    return ym;
}

namespace {

double parse_number(const std::string& field, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &pos);
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    if (pos != field.size()) {
        throw DataError("line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    if (!std::isfinite(v)) {
        throw DataError("line " + std::to_string(line_no) + ": non-finite value '" + field + "'");
    }
    return v;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

TimeSeriesDataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError("'" + path + "': empty file");
    if (strip_cr(line) != "date,gwl_m,rainfall_mm") {
        throw DataError("'" + path + "': expected header 'date,gwl_m,rainfall_mm'");
    }

    struct Row {
        YearMonth ym;
        double gwl;
        double rain;
    };
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 3) {
            throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        Row r;
        try {
            r.ym = parse_year_month(fields[0]);
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(line_no) + ": " + e.what());
        }
        r.gwl = parse_number(fields[1], line_no);
        r.rain = parse_number(fields[2], line_no);
        rows.push_back(r);
    }
    if (rows.empty()) throw DataError("'" + path + "': empty dataset");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.ym < b.ym; });

    for (std::size_t i = 1; i < rows.size(); ++i) {
        const int step = rows[i].ym.ordinal() - rows[i - 1].ym.ordinal();
        if (step == 0) {
            throw DataError("duplicate month " + rows[i].ym.str());
        }
        if (step > 1) {
            throw DataError("month gap: missing " + rows[i - 1].ym.next().str() + " (between " +
                            rows[i - 1].ym.str() + " and " + rows[i].ym.str() + ")");
        }
    }

    TimeSeriesDataset ds;
    ds.timestamps.reserve(rows.size());
    ds.gwl.reserve(rows.size());
    ds.rainfall.reserve(rows.size());
    for (const Row& r : rows) {
        ds.timestamps.push_back(r.ym);
        ds.gwl.push_back(r.gwl);
        ds.rainfall.push_back(r.rain);
    }
    return ds;
}

void save_csv(const TimeSeriesDataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,gwl_m,rainfall_mm\n";
    char buf[64];
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f\n", dataset.timestamps[i].str().c_str(),
                      dataset.gwl[i], dataset.rainfall[i]);
        out << buf;
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

namespace {

FeatureScale fit_feature(const std::vector<double>& values, std::size_t range_end) {
    FeatureScale s;
    s.min = *std::min_element(values.begin(), values.begin() + range_end);
    s.max = *std::max_element(values.begin(), values.begin() + range_end);
    s.constant = (s.max == s.min);
    return s;
}

}  // namespace

ScalingParams fit_minmax(const TimeSeriesDataset& dataset, std::size_t range_end) {
    if (range_end == 0) throw DataError("fit_minmax: range_end must be >= 1");
    if (range_end > dataset.size()) {
        throw DataError("fit_minmax: range_end " + std::to_string(range_end) +
                        " exceeds dataset length " + std::to_string(dataset.size()));
    }
    return {fit_feature(dataset.gwl, range_end), fit_feature(dataset.rainfall, range_end)};
}

double normalize_value(double x, const FeatureScale& scale) {
    if (scale.constant) return 0.0;
    return (x - scale.min) / (scale.max - scale.min);
}

double denormalize_value(double x, const FeatureScale& scale) {
    return scale.min + x * (scale.max - scale.min);
}

TimeSeriesDataset normalize(const TimeSeriesDataset& dataset, const ScalingParams& scaling) {
    TimeSeriesDataset out = dataset;
    for (double& v : out.gwl) v = normalize_value(v, scaling.gwl);
    for (double& v : out.rainfall) v = normalize_value(v, scaling.rainfall);
    return out;
}

std::vector<double> denormalize(const std::vector<double>& values, const ScalingParams& scaling,
                                Feature feature) {
    std::vector<double> out(values.size());
    const FeatureScale& s = scaling.of(feature);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = denormalize_value(values[i], s);
    return out;
}

WindowedSamples make_windows(const TimeSeriesDataset& normalized, int lag) {
    if (lag < 1) throw DataError("make_windows: lag must be >= 1");
    const int n = static_cast<int>(normalized.size());
    if (n <= lag) {
        throw DataError("make_windows: dataset length " + std::to_string(n) +
                        " too short for lag " + std::to_string(lag));
    }
    WindowedSamples ws;
    ws.lag = lag;
    const int count = n - lag;
    ws.inputs.reserve(count);
    ws.targets.reserve(count);
    ws.origin_index.reserve(count);
    for (int i = 0; i < count; ++i) {
        Eigen::MatrixXd w(lag, 2);
        for (int t = 0; t < lag; ++t) {
            w(t, 0) = normalized.gwl[i + t];
            w(t, 1) = normalized.rainfall[i + t];
        }
        ws.inputs.push_back(std::move(w));
        ws.targets.push_back(normalized.gwl[i + lag]);
        ws.origin_index.push_back(i + lag);
    }
    return ws;
}

namespace {

WindowedSamples take_range(const WindowedSamples& samples, int begin, int end) {
    WindowedSamples out;
    out.lag = samples.lag;
    out.inputs.assign(samples.inputs.begin() + begin, samples.inputs.begin() + end);
    out.targets.assign(samples.targets.begin() + begin, samples.targets.begin() + end);
    out.origin_index.assign(samples.origin_index.begin() + begin,
                            samples.origin_index.begin() + end);
    return out;
}

void append_range(WindowedSamples& dst, const WindowedSamples& src, int begin, int end) {
    dst.inputs.insert(dst.inputs.end(), src.inputs.begin() + begin, src.inputs.begin() + end);
    dst.targets.insert(dst.targets.end(), src.targets.begin() + begin, src.targets.begin() + end);
    dst.origin_index.insert(dst.origin_index.end(), src.origin_index.begin() + begin,
                            src.origin_index.begin() + end);
}

}  // namespace

std::pair<WindowedSamples, WindowedSamples> chrono_split(const WindowedSamples& samples,
                                                         double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw DataError("chrono_split: train_fraction must be in (0, 1)");
    }
    const int n = static_cast<int>(samples.size());
    const int n_train = static_cast<int>(std::floor(train_fraction * n));
    if (n_train < 1 || n_train >= n) {
        throw DataError("chrono_split: split of " + std::to_string(n) +
                        " samples leaves an empty side");
    }
    return {take_range(samples, 0, n_train), take_range(samples, n_train, n)};
}

FoldPlan kfold_plan(int sample_count, int k) {
    if (k < 2) throw DataError("kfold_plan: k must be >= 2");
    if (sample_count < k) {
        throw DataError("kfold_plan: " + std::to_string(sample_count) +
                        " samples cannot fill " + std::to_string(k) + " folds");
    }
    FoldPlan plan;
    const int base = sample_count / k;
    const int extra = sample_count % k;  // first `extra` folds get one more
    int begin = 0;
    for (int f = 0; f < k; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        plan.ranges.emplace_back(begin, begin + size);
        begin += size;
    }
    return plan;
}

WindowedSamples concat_excluding_fold(const WindowedSamples& samples, const FoldPlan& plan,
                                      int fold) {
    WindowedSamples out;
    out.lag = samples.lag;
    for (int f = 0; f < plan.folds(); ++f) {
        if (f == fold) continue;
        append_range(out, samples, plan.ranges[f].first, plan.ranges[f].second);
    }
    return out;
}

WindowedSamples slice_fold(const WindowedSamples& samples, const FoldPlan& plan, int fold) {
    return take_range(samples, plan.ranges[fold].first, plan.ranges[fold].second);
}

}  // namespace gwlion
