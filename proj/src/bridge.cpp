#include "modflow/bridge.hpp"

#include <cmath>
#include <stdexcept>

namespace modflow {

BridgePath sample_bridge(const std::vector<double>& nodes, RngStream& rng) {
    if (nodes.size() < 2 || nodes.front() != 0.0 || nodes.back() != 1.0)
        throw std::invalid_argument("sample_bridge: nodes must run from 0 to 1");
    BridgePath path;
    path.values.assign(nodes.size(), 0.0);
    double b = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double t = nodes[k];
        const double d = nodes[k + 1] - t;
        if (!(d > 0.0)) throw std::invalid_argument("sample_bridge: nodes must increase");
        const double shrink = (1.0 - t - d) / (1.0 - t);
        if (k + 2 == nodes.size()) {
            b = 0.0;  // pinned terminal node
        } else {
            b = b * shrink + std::sqrt(d * shrink) * rng.normal();
        }
        path.values[k + 1] = b;
    }
    return path;
}

}  // namespace modflow
