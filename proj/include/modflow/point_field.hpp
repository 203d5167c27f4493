#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modflow/rng.hpp"

namespace modflow {

enum class FieldMode { IndependentOnOff, Monotone, Schedule };

struct ScheduleEvent {
    double time;
    int source;  // 0-based
    bool on;
};

// Activation/deactivation mechanism of the information sources. Masks are
// bit vectors with bit i = source i active.
struct PointFieldSpec {
    int n_sources = 1;
    FieldMode mode = FieldMode::Monotone;
    std::vector<double> lambda_on;   // per source
    std::vector<double> lambda_off;  // per source; empty or zero for monotone
    std::vector<ScheduleEvent> schedule;
    std::uint32_t initial_mask = 0;

    void validate() const;
    bool source_initially_active(int i) const { return (initial_mask >> i) & 1u; }
};

// One state change; simultaneous per-source switches collapse into one event.
struct SwitchEvent {
    double time;
    std::uint32_t pre_mask;
    std::uint32_t post_mask;
    bool activates() const { return (post_mask & ~pre_mask) != 0; }
};

// Cadlag piecewise-constant activity path on [0,1].
struct SwitchPath {
    std::uint32_t initial_mask = 0;
    std::vector<SwitchEvent> events;  // strictly increasing times in (0,1)

    std::uint32_t mask_at(double t) const;      // right-continuous value
    std::uint32_t mask_before(double t) const;  // left limit
};

SwitchPath sample_switch_path(const PointFieldSpec& spec, RngStream& rng);

// Exact occupancy distribution of the activity vector at time t
// (product of per-source two-state chains). Returns (mask, probability)
// pairs for every mask with positive probability.
std::vector<std::pair<std::uint32_t, double>> state_probabilities(const PointFieldSpec& spec,
                                                                  double t);

// Marginal probability that source i is active at time t.
double source_active_probability(const PointFieldSpec& spec, int i, double t);

}  // namespace modflow
