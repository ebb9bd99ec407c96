#pragma once

#include <cstdint>
#include <string>

namespace patentmap {

/// Exact decimal rendering of numerator/denominator with `digits` decimals,
/// rounding half-up. Used for Jaccard values so "0.210" never depends on
/// binary floating point.
std::string format_ratio_half_up(std::uint64_t numerator, std::uint64_t denominator, int digits);

/// printf-style "%.<digits>f"; negative zero prints as zero.
std::string format_fixed(double value, int digits);

}  // namespace patentmap
