#pragma once

#include <cstdint>

namespace rtmot {

// All scheduling arithmetic runs on integer microseconds. Confidence scores
// are floating point; the two never mix units.
using Duration = std::int64_t;
using Instant = std::int64_t;

constexpr Duration kMicrosPerMilli = 1000;

// Exact ceiling division for non-negative a and positive b.
constexpr Duration ceil_div(Duration a, Duration b) {
    return (a + b - 1) / b;
}

}  // namespace rtmot
