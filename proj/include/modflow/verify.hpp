#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "modflow/config.hpp"

namespace modflow {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured statistics for the report line
};

// Randomized-configuration oracles for the filter.
CheckResult check_reduction_identity(std::size_t cases, std::uint64_t seed);
CheckResult check_bayes_oracle(std::size_t cases, std::uint64_t seed);

// Monte Carlo suites over simulated paths of a system.
CheckResult check_martingale(const SystemSpec& spec, std::size_t n_paths,
                             std::uint64_t seed, unsigned threads);
CheckResult check_variance_supermartingale(const SystemSpec& spec, std::size_t n_paths,
                                           std::uint64_t seed, unsigned threads);
CheckResult check_bridge_covariance(std::size_t n_paths, std::uint64_t seed,
                                    unsigned threads);
CheckResult check_jump_size_law(std::size_t n_paths, std::uint64_t seed, unsigned threads);
CheckResult check_euler_convergence(std::size_t n_paths, std::uint64_t seed,
                                    unsigned threads);
CheckResult check_fk_residual();
CheckResult check_price_agreement(std::size_t n_specs, std::size_t mc_paths,
                                  std::uint64_t seed, unsigned threads);
CheckResult check_price_closed_forms();
CheckResult check_asymmetry(std::size_t n_paths, std::uint64_t seed);
CheckResult check_determinism(const ExperimentConfig& cfg);

// Runs the report suites (reduction, Bayes, martingale, supermartingale,
// bridge covariance, FK residual, price agreement) at the scales taken from
// the config. Prints one line per suite; returns false on any failure.
bool run_verify_suite(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace modflow
