#include "gwlion/synth.hpp"

#include <cmath>

#include "gwlion/common.hpp"

namespace gwlion {

namespace {

// Monsoon-shaped monthly rainfall means (mm), Jan..Dec.
constexpr double kRainProfile[12] = {12.0,  8.0,   15.0,  45.0,  110.0, 340.0,
                                     460.0, 390.0, 240.0, 160.0, 55.0,  18.0};

constexpr double kGwlBase = 5.0;          // meters, depth to water
constexpr double kSeasonalAmp = 2.0;      // meters
constexpr double kTrendPerMonth = 0.004;  // slow decline (depth grows)
constexpr double kRainCoupling = -0.003;  // wet months raise the table
constexpr double kGwlNoiseStd = 0.05;     // meters
constexpr double kRainNoiseStd = 0.25;    // lognormal sigma

constexpr double kTwoPi = 6.283185307179586476925287;

}  // namespace

TimeSeriesDataset generate_synthetic(int months, std::uint64_t seed) {
    if (months < 24) throw ConfigError("synth: months must be >= 24");

    Rng rng(seed);
    const double phase = rng.uniform(0.0, kTwoPi);

    TimeSeriesDataset ds;
    ds.timestamps.reserve(months);
    ds.gwl.reserve(months);
    ds.rainfall.reserve(months);

    YearMonth ym{2000, 1};
    for (int t = 0; t < months; ++t) {
        const double rain = kRainProfile[ym.month - 1] * std::exp(kRainNoiseStd * rng.normal());
        const double gwl = kGwlBase + kSeasonalAmp * std::sin(kTwoPi * t / 12.0 + phase) +
                           kTrendPerMonth * t + kRainCoupling * rain +
                           kGwlNoiseStd * rng.normal();
        ds.timestamps.push_back(ym);
        ds.gwl.push_back(gwl);
        ds.rainfall.push_back(rain);
        ym = ym.next();
    }
    return ds;
}

}  // namespace gwlion
