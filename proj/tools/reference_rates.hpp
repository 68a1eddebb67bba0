#pragma once

#include <array>

namespace indel::cli {

// Published rate bounds for the deletion channel with delta = 0.2 and
// epsilon = 0.2. Rows are n; the last three columns use N = 23 n.
struct ReferenceRateRow {
  int n;
  double locvb_m5;
  double locvb_m22;
  double locvb_m23;
  double bec;
};

inline constexpr double kReferenceDelta = 0.2;
inline constexpr double kReferenceEpsilon = 0.2;
inline constexpr int kReferenceBecBlock = 23;
inline constexpr std::array<int, 3> kReferenceLengths = {5, 22, 23};

inline constexpr std::array<ReferenceRateRow, 11> kReferenceRates = {{
    {1, 0.71688, 0.55239, 0.54775, 0.780436},
    {2, 0.69929, 0.58012, 0.57346, 0.775619},
    {4, 0.81882, 0.61719, 0.59406, 0.77818},
    {8, 0.81077, 0.62095, 0.62193, 0.782655},
    {16, 0.80675, 0.65946, 0.66192, 0.786081},
    {32, 0.80473, 0.66391, 0.66262, 0.789518},
    {64, 0.80373, 0.70137, 0.70186, 0.792199},
    {128, 0.80323, 0.70135, 0.70179, 0.794273},
    {256, 0.80297, 0.73575, 0.70211, 0.795865},
    {512, 0.80285, 0.73572, 0.73417, 0.79702},
    {1024, 0.80279, 0.73571, 0.73416, 0.797867},
}};

// n -> infinity: log2(tau)/m for m = 5, 22, 23, and the erasure limit 1 - delta.
inline constexpr std::array<double, 3> kReferenceAsymptotic = {0.80272, 0.73569, 0.73414};
inline constexpr double kReferenceBecAsymptotic = 0.8;

}  // namespace indel::cli
