#pragma once

#include <vector>

#include "modflow/rng.hpp"
#include "modflow/time_grid.hpp"

namespace modflow {

// Standard Brownian bridge sampled on a node set, endpoints pinned at 0.
struct BridgePath {
    std::vector<double> values;  // one per node
    double sigma = 1.0;          // noise scale attached by the caller
};

// Sequential conditional sampling on an arbitrary strictly increasing node
// vector with nodes.front() == 0 and nodes.back() == 1:
//   b_{t+d} | b_t ~ N( b_t (1-t-d)/(1-t), d (1-t-d)/(1-t) ).
BridgePath sample_bridge(const std::vector<double>& nodes, RngStream& rng);

inline BridgePath sample_bridge(const TimeGrid& grid, RngStream& rng) {
    return sample_bridge(grid.nodes(), rng);
}

}  // namespace modflow
