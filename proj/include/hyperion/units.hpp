#pragma once

#include <cmath>
#include <cstdint>

namespace hyperion {

// Costs are held as scaled integers internally so that prefix sums and
// feasibility comparisons are exact: FLOPs in milli-GFLOP, memory in MB,
// latency targets in microseconds. Doubles appear only at the API boundary.

constexpr int64_t kMilliPerUnit = 1000;
constexpr int64_t kMicrosPerSecond = 1'000'000;

inline int64_t to_milli(double units) { return std::llround(units * 1e3); }
inline double from_milli(int64_t milli) { return static_cast<double>(milli) / 1e3; }

inline int64_t to_micros(double seconds) { return std::llround(seconds * 1e6); }
inline double from_micros(int64_t micros) { return static_cast<double>(micros) / 1e6; }

}  // namespace hyperion
