#ifndef GWLION_SYNTH_HPP
#define GWLION_SYNTH_HPP

#include <cstdint>

#include "gwlion/dataio.hpp"

namespace gwlion {

/// Synthetic monthly series standing in for an observation well: a seasonal
/// gwl cycle with a slow decline, a rainfall coupling, and light noise over
/// a monsoon-shaped rainfall profile. Fully determined by the seed; starts
/// at 2000-01. Requires months >= 24 (two full seasonal cycles).
TimeSeriesDataset generate_synthetic(int months, std::uint64_t seed);

}  // namespace gwlion

#endif
