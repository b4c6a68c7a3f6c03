#pragma once

#include <cstddef>

#include "esn/model.hpp"
#include "esn/timeseries.hpp"

namespace esn {

/// Time window [start, start+length) over aligned inputs and states.
/// start must lie at or after the trajectory's washout offset.
struct MmdsWindow {
    std::size_t start = 0;
    std::size_t length = 0;
};

/// Mean multidimensional scaling distance between input-space and
/// reservoir-space geometry over one window:
///
///   MMDS = (1/length) * sum_{i<j} (L(i,j) - D(i,j))^2 / D(i,j)
///
/// with L the Euclidean distance between inputs a(i), a(j) and D the
/// distance between states s(i), s(j). Pairs are unordered (each counted
/// once); the divisor is the window length, not the pair count. Zero
/// means the projection is a pairwise isometry on the window. Throws
/// DegeneratePairError naming the first colliding index pair when some
/// D(i,j) is zero.
double mmds(const TimeSeries& inputs, const StateTrajectory& states, const MmdsWindow& window);

}  // namespace esn
