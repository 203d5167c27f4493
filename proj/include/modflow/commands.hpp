#pragma once

#include <iosfwd>

#include "modflow/config.hpp"

namespace modflow {

// CSV per (path, base grid node); rows assembled in path order regardless of
// the thread count. The config hash is embedded as a '#' comment line.
void cmd_simulate(const ExperimentConfig& cfg, std::ostream& out);

// CSV: per-state decomposition rows, the probability-weighted total, and a
// Monte Carlo cross-check row. Requires the pricing block.
void cmd_price(const ExperimentConfig& cfg, std::ostream& out);

// CSV of the divergence path between the two configured observers.
void cmd_asymmetry(const ExperimentConfig& cfg, std::ostream& out);

// text report of the oracle suites; returns 0 on success, 1 on any failure
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace modflow
