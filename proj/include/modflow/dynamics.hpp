#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "modflow/filter.hpp"
#include "modflow/info_system.hpp"

namespace modflow {

// Counting bookkeeping of the switch path: C counts every state change,
// N only the changes that activate at least one source.
struct EventLedger {
    std::vector<double> event_times;
    std::vector<bool> delta;          // activation flag per event
    std::vector<int> c_count;         // per node, running count of state changes
    std::vector<int> n_count;         // per node, running count of activations
};

// Conditional-law path with its martingale decomposition. W accumulates the
// sigma-standardized diffusion increments only; its increments vanish while
// all sources are dark, and jumps enter through the event bookkeeping.
struct DynamicsPath {
    std::vector<double> times;        // augmented node set of the input path
    std::vector<double> x_mean;       // E[X | F_t], cadlag
    std::vector<double> x_var;        // Gamma_t, cadlag
    std::vector<double> xi_hat;
    std::vector<double> sigma_hat;
    std::vector<double> m;            // segment martingale with activation jumps
    std::vector<double> w;            // cumulative standardized diffusion increments

    struct Event {
        std::size_t node;
        bool activation;
        double pre_xi_hat, post_xi_hat;
        double pre_x, post_x;
    };
    std::vector<Event> events;
};

struct DynamicsResult {
    DynamicsPath path;
    EventLedger ledger;
};

DynamicsResult build_dynamics(const SignalLaw& prior, const InfoSystemPath& path);

struct EulerReconstruction {
    std::vector<double> times;
    std::vector<double> x_reconstructed;
    double max_gap = 0.0;  // against the filter path on [0, 1 - 10*dt]
};

// Integrates dX = Gamma/(sigma_hat (1-t)) dW between events, copying the
// exact filter jumps at activations; the same W increments drive both paths.
EulerReconstruction euler_reconstruct(const SignalLaw& prior, const InfoSystemPath& path,
                                      int base_steps);

struct FkGrid {
    std::vector<double> xi_nodes;
    std::vector<double> t_nodes;  // within [0.05, 0.9]
};

// Finite-difference residual of dv/dt + mu dv/dxi + sigma^2/2 d2v/dxi2 - psi v
// for the single always-active-source value function, evaluated with the
// exact filter on the grid. Returns the max interior residual.
double feynman_kac_residual(const SignalLaw& prior,
                            const std::function<double(double)>& psi,
                            const std::vector<double>& phi_on_atoms, double sigma,
                            const FkGrid& grid);

}  // namespace modflow
