#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "modflow/info_system.hpp"
#include "modflow/signal_law.hpp"

namespace modflow {

// log of the conditioning kernel exp{(x*y - t*x^2/2) / (sigma^2 (1-t))}
double log_kernel(double x, double y, double t, double sigma);
double kernel_h(double x, double y, double t, double sigma);

// Posterior of X: prior atoms with reweighted masses.
class PosteriorMeasure {
public:
    PosteriorMeasure(std::shared_ptr<const std::vector<double>> atoms,
                     std::vector<double> weights);

    const std::vector<double>& atoms() const { return *atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    std::shared_ptr<const std::vector<double>> shared_atoms() const { return atoms_; }
    std::size_t size() const { return atoms_->size(); }

    double moment(int k) const;
    double mean() const { return moment(1); }
    double variance() const;

    // builds from log-weights with max-subtraction; throws on total underflow
    static PosteriorMeasure from_log_weights(
        std::shared_ptr<const std::vector<double>> atoms, std::vector<double> log_weights);

private:
    std::shared_ptr<const std::vector<double>> atoms_;
    std::vector<double> weights_;
};

// nu_t from the reduced pair (effective state, complementary summary)
PosteriorMeasure posterior(const SignalLaw& prior, const EffectiveState& eff,
                           const ComplementarySummary& comp);

// nu_t from the full per-source product; reduction oracle for posterior()
PosteriorMeasure posterior_full(const SignalLaw& prior, const InfoSystemPath& path,
                                std::size_t node);

double conditional_moment(const PosteriorMeasure& post, int k);

// Activation context at an event time t: the freshly activated sources with
// their pre-event frozen observations, plus the left-limit reduced state.
struct JumpContext {
    std::vector<int> activated;          // source indices turning on at t
    EffectiveState pre_eff;              // state at t-
    ComplementarySummary pre_comp;       // summary at t-
    std::vector<double> activated_y;     // xi^(i)(tau_{t-}) per activated source
    std::vector<double> activated_tau;   // tau_{t-} per activated source
    std::vector<double> activated_sigma; // sigma per activated source
};

JumpContext make_jump_context(const InfoSystemPath& path, std::size_t event_node);

struct JumpSizeLaw {
    std::vector<double> z_grid;
    std::vector<double> g_values;   // post-jump conditional mean per z node
    std::vector<double> u_per_atom; // conditional mean of Z given X = atom
    double v = 0.0;                 // conditional variance of Z (common across atoms)
    bool degenerate = false;        // activation with zero accumulated gap
    double g(double z) const;       // linear interpolation on the grid
};

JumpSizeLaw jump_size_law(const SignalLaw& prior, const JumpContext& ctx, double t,
                          int n_grid = 1025);

struct MultiFactorSpec {
    std::vector<SignalLaw> factor_laws;
    std::function<double(const std::vector<double>&)> payoff;
    std::size_t product_cap = 10'000'000;
};

struct MultiFactorPosterior {
    std::vector<PosteriorMeasure> factors;
    double joint_expectation = 0.0;
};

MultiFactorPosterior multi_factor_posterior(
    const MultiFactorSpec& spec,
    const std::vector<std::pair<EffectiveState, ComplementarySummary>>& observations);

}  // namespace modflow
