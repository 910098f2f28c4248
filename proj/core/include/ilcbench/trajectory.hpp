#pragma once

#include "ilcbench/signal.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace ilcbench {

struct MotionBounds {
    double velocity;      // m/s
    double acceleration;  // m/s^2
    double jerk;          // m/s^3
    double snap = std::numeric_limits<double>::infinity();  // m/s^4
};

/// Sampled point-to-point move. Snap (or jerk for a third-order profile) is
/// held constant over each sample interval and the lower derivatives are the
/// exact polynomial integrals, so sample k is the continuous profile at k Ts.
///
/// Phase durations are rounded up to whole samples and the bang amplitude is
/// then scaled down so the move lands exactly on `displacement`; `amplitude`
/// is that scaled snap (jerk) level and never exceeds the bound.
struct MotionProfile {
    int order;  ///< 3 or 4
    MotionBounds bounds;
    double displacement;
    double amplitude;
    Signal position;
    Signal velocity;
    Signal acceleration;
    Signal jerk;
    std::optional<Signal> snap;
    /// Sample indices where the piecewise-constant top derivative switches.
    std::vector<std::size_t> switches;

    double ts() const noexcept { return position.ts(); }
    std::size_t size() const noexcept { return position.size(); }
};

/// Symmetric 15-phase snap-limited move, sampled from t = 0 to the end of the
/// move inclusive. Throws ErrorCode::InvalidParameter on zero displacement,
/// non-positive bounds or Ts.
MotionProfile fourth_order_profile(double displacement, const MotionBounds& bounds, double ts);

/// Symmetric 7-phase jerk-limited move; `bounds.snap` is ignored.
MotionProfile third_order_profile(double displacement, const MotionBounds& bounds, double ts);

/// Places the move after `lead_in` samples of rest and holds the end point up
/// to `length` samples in total.
MotionProfile embed(const MotionProfile& profile, std::size_t lead_in, std::size_t length);

/// Largest |second forward difference of position / Ts^2 - expected| over the
/// samples whose difference stencil does not straddle a switch. The expected
/// value is a[k+1] + Ts^2 snap/12, the exact central-difference identity for
/// a quartic; for a third-order profile it is a[k+1].
double derivative_consistency_error(const MotionProfile& profile);

} // namespace ilcbench
