#pragma once

#include <algorithm>
#include <numbers>

namespace jtac {

// A rate per channel use. Stored in nats; bits derived exactly as nats/ln 2.
// Bounds can evaluate negative (they are still reported raw); clamped() is
// the trivially-achievable version.
struct rate {
    double nats = 0.0;

    double bits() const { return nats / std::numbers::ln2; }
    double clamped_nats() const { return std::max(nats, 0.0); }
    double clamped_bits() const { return clamped_nats() / std::numbers::ln2; }
};

} // namespace jtac
