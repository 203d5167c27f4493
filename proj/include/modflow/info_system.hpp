#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modflow/bridge.hpp"
#include "modflow/point_field.hpp"
#include "modflow/signal_law.hpp"
#include "modflow/time_grid.hpp"

namespace modflow {

struct SourceSpec {
    std::vector<double> sigmas;
    void validate() const;
    int n() const { return static_cast<int>(sigmas.size()); }
};

// Precision-weighted aggregate of the active sources at one time.
struct EffectiveState {
    double t = 0.0;
    std::uint32_t active_mask = 0;
    double xi_hat = 0.0;
    double sigma_hat = 0.0;
    bool empty() const { return active_mask == 0; }
};

struct CompRecord {
    int source;
    double y;      // frozen observation value xi^(i) at tau
    double tau;    // last-active time, 0 if never active
    double sigma;
};

// Frozen likelihood factor contributed by the currently inactive sources.
struct ComplementarySummary {
    std::vector<CompRecord> records;
    double log_eval(double x) const;
    double eval(double x) const;
};

double effective_sigma(std::uint32_t mask, const std::vector<double>& sigmas);

// Full per-path observation state on an augmented node set: the base grid
// plus every switch-event time inserted as an exact node, so frozen values
// and last-active times are exact rather than interpolated.
struct InfoSystemPath {
    std::vector<double> times;
    std::vector<int> base_index;  // index into the base grid, -1 for inserted nodes
    double x_true = 0.0;
    SwitchPath sw;
    std::vector<double> sigmas;
    std::vector<std::uint32_t> mask;              // cadlag mask per node
    std::vector<std::vector<double>> xi;          // [source][node] raw values
    std::vector<std::vector<double>> tau;         // [source][node] last-active times
    std::vector<std::vector<double>> modulated;   // [source][node] J * xi
    std::vector<std::size_t> event_nodes;         // node indices carrying a switch event
    std::vector<std::size_t> event_index;         // matching index into sw.events

    int n_sources() const { return static_cast<int>(sigmas.size()); }
    std::size_t n_nodes() const { return times.size(); }
    std::size_t node_index(double t) const;  // exact lookup, throws if absent
};

// Assembles raw/modulated/last-active paths from a drawn signal, one bridge
// per source and a switch realization. `times` must contain every event time.
InfoSystemPath build_info_path(double law_draw, const std::vector<BridgePath>& bridges,
                               const SwitchPath& sw, std::vector<double> times,
                               std::vector<int> base_index, std::vector<double> sigmas);

// base grid + event times, with bookkeeping of which nodes are base nodes
std::pair<std::vector<double>, std::vector<int>> augment_nodes(const TimeGrid& grid,
                                                               const SwitchPath& sw);

struct SystemSpec {
    SignalLaw prior;
    SourceSpec sources;
    PointFieldSpec field;
    TimeGrid grid;
    void validate() const;
};

InfoSystemPath simulate_path(const SystemSpec& spec, std::uint64_t seed,
                             std::uint64_t path_index);

// Two observers of the same raw signals under different switch mechanisms.
std::pair<InfoSystemPath, InfoSystemPath> simulate_two_agent_paths(
    const SignalLaw& prior, const SourceSpec& sources, const PointFieldSpec& field1,
    const PointFieldSpec& field2, const TimeGrid& grid, std::uint64_t seed,
    std::uint64_t path_index);

EffectiveState effective_state(const InfoSystemPath& path, std::size_t node);
ComplementarySummary complementary_summary(const InfoSystemPath& path, std::size_t node);

// pre-event counterparts at an event node (left limits)
EffectiveState effective_state_pre(const InfoSystemPath& path, std::size_t node);
ComplementarySummary complementary_summary_pre(const InfoSystemPath& path, std::size_t node);

struct MixedProjection {
    std::vector<double> values;  // per coordinate psi
    std::vector<double> alphas;  // per coordinate bridge coefficient
};

// Projection-modulated observation: coordinate i carries
// psi_i = p_hat_i * sum_j P_ij xi_j with p_hat_i = 1 / sum_j P_ij, and
// bridge coefficient alpha_i = p_hat_i * sqrt(sum_j P_ij^2 sigma_j^2).
MixedProjection mix_projection(const std::vector<double>& xi,
                               const std::vector<std::vector<double>>& projection,
                               const SourceSpec& sources);

}  // namespace modflow
