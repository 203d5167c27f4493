#pragma once

#include <stdexcept>
#include <vector>

namespace modflow {

// Uniform grid on [0,1]. Interior nodes k/N are capped at 1-delta so that
// conditional-law evaluations never hit the terminal singularity; the final
// node is exactly 1 and is treated as the revelation time.
class TimeGrid {
public:
    TimeGrid(int n_steps, double delta = 1e-8) : n_steps_(n_steps), delta_(delta) {
        if (n_steps < 1) throw std::invalid_argument("TimeGrid: n_steps must be >= 1");
        if (!(delta > 0.0 && delta <= 1e-3))
            throw std::invalid_argument("TimeGrid: delta must lie in (0, 1e-3]");
        nodes_.reserve(static_cast<std::size_t>(n_steps) + 1);
        const double cap = 1.0 - delta;
        for (int k = 0; k < n_steps; ++k) {
            double t = static_cast<double>(k) / n_steps;
            nodes_.push_back(t < cap ? t : cap);
        }
        nodes_.push_back(1.0);
        for (std::size_t k = 1; k < nodes_.size(); ++k)
            if (!(nodes_[k] > nodes_[k - 1]))
                throw std::invalid_argument("TimeGrid: nodes not strictly increasing");
    }

    int n_steps() const { return n_steps_; }
    double delta() const { return delta_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double dt() const { return 1.0 / n_steps_; }

private:
    int n_steps_;
    double delta_;
    std::vector<double> nodes_;
};

}  // namespace modflow
