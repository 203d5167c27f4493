#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "modflow/info_system.hpp"
#include "modflow/point_field.hpp"
#include "modflow/signal_law.hpp"
#include "modflow/time_grid.hpp"

namespace modflow {

struct PricingBlock {
    double strike = 0.0;
    double exercise_t = 0.5;
    double rate = 0.0;
    std::size_t mc_paths = 100000;
};

struct AsymmetryBlock {
    PointFieldSpec agent1;
    PointFieldSpec agent2;
};

// Parsed experiment definition: line-oriented `key = value` with dotted
// section prefixes. Unknown keys are rejected.
struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::size_t n_paths = 1;
    unsigned threads = 0;  // 0 = machine parallelism
    TimeGrid grid{100};
    SignalLaw prior = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    SourceSpec sources;
    PointFieldSpec field;
    std::optional<PricingBlock> pricing;
    std::optional<AsymmetryBlock> asymmetry;
    std::size_t verify_cases = 1000;
    std::uint64_t config_hash = 0;  // over the canonicalized key/value text

    SystemSpec system() const { return SystemSpec{prior, sources, field, grid}; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace modflow
