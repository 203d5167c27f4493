#pragma once

#include <cstdint>
#include <vector>

#include "modflow/filter.hpp"
#include "modflow/info_system.hpp"

namespace modflow {

struct KlResult {
    double a_half = 0.0;  // E_p[log(p/q)]
    double b_half = 0.0;  // E_q[log(q/p)]
    double symmetric() const { return 0.5 * (a_half + b_half); }
};

// Symmetric Kullback-Leibler divergence between two posteriors on shared atoms.
KlResult kl_symmetric(const PosteriorMeasure& p, const PosteriorMeasure& q);

struct AsymmetryPoint {
    double t;
    double kl_sym;
    double a_half;
    double b_half;
    std::uint32_t agent1_mask;
    std::uint32_t agent2_mask;
    bool event;  // either agent switches state at this node
};

// Divergence path between two observers of the same raw signals.
std::vector<AsymmetryPoint> asymmetry_path(const SignalLaw& prior,
                                           const InfoSystemPath& agent1,
                                           const InfoSystemPath& agent2);

}  // namespace modflow
