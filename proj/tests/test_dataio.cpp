#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "gwlion/dataio.hpp"

using namespace gwlion;

namespace {

struct TempCsv {
    std::filesystem::path path;

    explicit TempCsv(const std::string& content) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("gwlion_dataio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                ".csv");
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::filesystem::remove(path); }
};

TimeSeriesDataset tiny_dataset(std::vector<double> gwl, std::vector<double> rain) {
    TimeSeriesDataset ds;
    YearMonth ym{2000, 1};
    for (std::size_t i = 0; i < gwl.size(); ++i) {
        ds.timestamps.push_back(ym);
        ym = ym.next();
    }
    ds.gwl = std::move(gwl);
    ds.rainfall = std::move(rain);
    return ds;
}

}  // namespace

TEST_CASE("load_csv parses rows in order") {
    TempCsv file("date,gwl_m,rainfall_mm\n2000-01,6.2,120.5\n2000-02,6.4,80.0\n2000-03,6.1,95.2\n");
    const TimeSeriesDataset ds = load_csv(file.path.string());
    CHECK(ds.size() == 3);
    CHECK(ds.gwl[1] == doctest::Approx(6.4));
    CHECK(ds.rainfall[2] == doctest::Approx(95.2));
    CHECK(ds.timestamps[0] == YearMonth{2000, 1});
}

TEST_CASE("load_csv sorts unsorted rows by date") {
    TempCsv file("date,gwl_m,rainfall_mm\n2000-02,6.4,80.0\n2000-01,6.2,120.5\n");
    const TimeSeriesDataset ds = load_csv(file.path.string());
    CHECK(ds.gwl[0] == doctest::Approx(6.2));
    CHECK(ds.gwl[1] == doctest::Approx(6.4));
}

TEST_CASE("load_csv reports the missing month of a gap") {
    TempCsv file("date,gwl_m,rainfall_mm\n2000-01,6.2,120.5\n2000-03,6.1,95.2\n");
    CHECK_THROWS_WITH_AS(load_csv(file.path.string()),
                         doctest::Contains("2000-02"), DataError);
}

TEST_CASE("load_csv rejects a header-only file as empty") {
    TempCsv file("date,gwl_m,rainfall_mm\n");
    CHECK_THROWS_WITH_AS(load_csv(file.path.string()), doctest::Contains("empty dataset"),
                         DataError);
}

TEST_CASE("load_csv error paths") {
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_csv("/nonexistent/gwlion.csv"), DataError);
    }
    SUBCASE("malformed row names the line") {
        TempCsv file("date,gwl_m,rainfall_mm\n2000-01,6.2,120.5\n2000-02,oops,80.0\n");
        CHECK_THROWS_WITH_AS(load_csv(file.path.string()), doctest::Contains("line 3"), DataError);
    }
    SUBCASE("wrong field count names the line") {
        TempCsv file("date,gwl_m,rainfall_mm\n2000-01,6.2\n");
        CHECK_THROWS_WITH_AS(load_csv(file.path.string()), doctest::Contains("line 2"), DataError);
    }
    SUBCASE("non-finite value rejected") {
        TempCsv file("date,gwl_m,rainfall_mm\n2000-01,nan,80.0\n");
        CHECK_THROWS_WITH_AS(load_csv(file.path.string()), doctest::Contains("non-finite"),
                             DataError);
    }
    SUBCASE("duplicate month rejected") {
        TempCsv file("date,gwl_m,rainfall_mm\n2000-01,6.2,1.0\n2000-01,6.3,2.0\n");
        CHECK_THROWS_WITH_AS(load_csv(file.path.string()), doctest::Contains("duplicate"),
                             DataError);
    }
    SUBCASE("bad header") {
        TempCsv file("date,level,rain\n2000-01,6.2,1.0\n");
        CHECK_THROWS_AS(load_csv(file.path.string()), DataError);
    }
}

TEST_CASE("save_csv round-trips through load_csv") {
    const TimeSeriesDataset ds = tiny_dataset({6.2, 6.4, 6.1}, {120.5, 80.0, 95.2});
    TempCsv file("");
    save_csv(ds, file.path.string());
    const TimeSeriesDataset back = load_csv(file.path.string());
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.gwl[i] == doctest::Approx(ds.gwl[i]));
        CHECK(back.timestamps[i] == ds.timestamps[i]);
    }
}

TEST_CASE("fit_minmax over a prefix") {
    const TimeSeriesDataset ds = tiny_dataset({2.0, 4.0, 6.0}, {5.0, 5.0, 5.0});
    SUBCASE("full range") {
        const ScalingParams s = fit_minmax(ds, 3);
        CHECK(s.gwl.min == 2.0);
        CHECK(s.gwl.max == 6.0);
        CHECK_FALSE(s.gwl.constant);
        CHECK(s.rainfall.constant);
    }
    SUBCASE("prefix excludes later values") {
        const ScalingParams s = fit_minmax(ds, 2);
        CHECK(s.gwl.min == 2.0);
        CHECK(s.gwl.max == 4.0);
    }
    SUBCASE("range_end zero is an error") { CHECK_THROWS_AS(fit_minmax(ds, 0), DataError); }
    SUBCASE("range_end beyond the data is an error") {
        CHECK_THROWS_AS(fit_minmax(ds, 4), DataError);
    }
}

TEST_CASE("normalize maps endpoints to 0 and 1") {
    const TimeSeriesDataset ds = tiny_dataset({2.0, 4.0, 6.0}, {1.0, 2.0, 3.0});
    const ScalingParams s = fit_minmax(ds, 3);
    const TimeSeriesDataset norm = normalize(ds, s);
    CHECK(norm.gwl[0] == doctest::Approx(0.0));
    CHECK(norm.gwl[1] == doctest::Approx(0.5));
    CHECK(norm.gwl[2] == doctest::Approx(1.0));

    SUBCASE("out-of-range values pass through unclamped") {
        CHECK(normalize_value(8.0, s.gwl) == doctest::Approx(1.5));
    }
    SUBCASE("constant feature maps to 0") {
        const ScalingParams c = fit_minmax(tiny_dataset({1, 1}, {7, 7}), 2);
        CHECK(normalize_value(7.0, c.rainfall) == 0.0);
        CHECK(normalize_value(9.0, c.rainfall) == 0.0);
    }
}

TEST_CASE("denormalize inverts normalize to 1e-12 relative error") {
    Rng rng(7);
    FeatureScale scale{-3.2, 11.7, false};
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const double back = denormalize_value(normalize_value(x, scale), scale);
        CHECK(std::abs(back - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("make_windows shapes and contents") {
    SUBCASE("count formula over many lags") {
        const int n = 40;
        TimeSeriesDataset ds;
        {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i) v[i] = i * 0.01;
            ds = tiny_dataset(v, std::vector<double>(n, 1.0));
        }
        for (int lag = 1; lag < n; ++lag) {
            const WindowedSamples ws = make_windows(ds, lag);
            CHECK(static_cast<int>(ws.size()) == n - lag);
        }
    }
    SUBCASE("length 13, lag 12 gives one sample targeting record 12") {
        std::vector<double> v(13);
        for (int i = 0; i < 13; ++i) v[i] = i;
        const TimeSeriesDataset ds = tiny_dataset(v, std::vector<double>(13, 0.5));
        const WindowedSamples ws = make_windows(ds, 12);
        REQUIRE(ws.size() == 1);
        CHECK(ws.targets[0] == doctest::Approx(12.0));
        CHECK(ws.origin_index[0] == 12);
        CHECK(ws.inputs[0](0, 0) == doctest::Approx(0.0));
        CHECK(ws.inputs[0](11, 0) == doctest::Approx(11.0));
        CHECK(ws.inputs[0](3, 1) == doctest::Approx(0.5));
    }
    SUBCASE("lag 0 is an error") {
        const TimeSeriesDataset ds = tiny_dataset({1, 2, 3}, {1, 2, 3});
        CHECK_THROWS_AS(make_windows(ds, 0), DataError);
    }
    SUBCASE("too-short dataset is an error") {
        const TimeSeriesDataset ds = tiny_dataset({1, 2, 3}, {1, 2, 3});
        CHECK_THROWS_AS(make_windows(ds, 3), DataError);
    }
}

TEST_CASE("chrono_split uses the floor rule and keeps order") {
    const auto samples_of = [](int n) {
        std::vector<double> v(n + 3);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
        return make_windows(tiny_dataset(v, std::vector<double>(v.size(), 1.0)), 3);
    };
    SUBCASE("228 samples at 0.8 -> 182/46") {
        const auto [train, test] = chrono_split(samples_of(228), 0.8);
        CHECK(train.size() == 182);
        CHECK(test.size() == 46);
    }
    SUBCASE("10 samples at 0.8 -> 8/2") {
        const auto [train, test] = chrono_split(samples_of(10), 0.8);
        CHECK(train.size() == 8);
        CHECK(test.size() == 2);
    }
    SUBCASE("single sample cannot split") {
        CHECK_THROWS_AS(chrono_split(samples_of(1), 0.8), DataError);
    }
    SUBCASE("strict chronology") {
        const auto [train, test] = chrono_split(samples_of(50), 0.73);
        CHECK(train.origin_index.back() < test.origin_index.front());
    }
}

TEST_CASE("kfold_plan builds contiguous near-equal blocks") {
    SUBCASE("even division") {
        const FoldPlan plan = kfold_plan(100, 5);
        REQUIRE(plan.folds() == 5);
        for (const auto& [b, e] : plan.ranges) CHECK(e - b == 20);
    }
    SUBCASE("remainder goes to the first folds") {
        const FoldPlan plan = kfold_plan(103, 5);
        std::vector<int> sizes;
        for (const auto& [b, e] : plan.ranges) sizes.push_back(e - b);
        CHECK(sizes == std::vector<int>{21, 21, 21, 20, 20});
    }
    SUBCASE("too few samples") { CHECK_THROWS_AS(kfold_plan(4, 5), DataError); }
    SUBCASE("disjoint, exhaustive, balanced for many (N, k)") {
        for (int n : {10, 17, 23, 57, 100}) {
            for (int k : {2, 3, 5, 7}) {
                if (n < k) continue;
                const FoldPlan plan = kfold_plan(n, k);
                int covered = 0;
                int min_size = n, max_size = 0;
                int expect_begin = 0;
                for (const auto& [b, e] : plan.ranges) {
                    CHECK(b == expect_begin);  // contiguous and disjoint
                    expect_begin = e;
                    covered += e - b;
                    min_size = std::min(min_size, e - b);
                    max_size = std::max(max_size, e - b);
                }
                CHECK(covered == n);
                CHECK(max_size - min_size <= 1);
            }
        }
    }
}
