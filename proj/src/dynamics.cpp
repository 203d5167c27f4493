#include "modflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modflow {

DynamicsResult build_dynamics(const SignalLaw& prior, const InfoSystemPath& path) {
    const std::size_t nn = path.n_nodes();
    DynamicsResult res;
    DynamicsPath& dp = res.path;
    dp.times = path.times;
    dp.x_mean.assign(nn, 0.0);
    dp.x_var.assign(nn, 0.0);
    dp.xi_hat.assign(nn, 0.0);
    dp.sigma_hat.assign(nn, 0.0);
    dp.m.assign(nn, 0.0);
    dp.w.assign(nn, 0.0);

    for (std::size_t k = 0; k < nn; ++k) {
        const EffectiveState eff = effective_state(path, k);
        dp.xi_hat[k] = eff.xi_hat;
        dp.sigma_hat[k] = eff.sigma_hat;
        if (path.times[k] < 1.0) {
            const PosteriorMeasure post =
                posterior(prior, eff, complementary_summary(path, k));
            dp.x_mean[k] = post.mean();
            dp.x_var[k] = post.variance();
        } else {
            dp.x_mean[k] = path.x_true;  // signal revealed at the terminal time
            dp.x_var[k] = 0.0;
        }
    }

    // event bookkeeping with left limits
    for (std::size_t e = 0; e < path.event_nodes.size(); ++e) {
        const std::size_t node = path.event_nodes[e];
        const auto& ev = path.sw.events[path.event_index[e]];
        DynamicsPath::Event rec;
        rec.node = node;
        rec.activation = ev.activates();
        const EffectiveState pre = effective_state_pre(path, node);
        rec.pre_xi_hat = pre.xi_hat;
        rec.post_xi_hat = dp.xi_hat[node];
        const PosteriorMeasure pre_post =
            posterior(prior, pre, complementary_summary_pre(path, node));
        rec.pre_x = pre_post.mean();
        rec.post_x = dp.x_mean[node];
        dp.events.push_back(rec);
    }

    // segment accumulation of M and W
    std::size_t e = 0;
    for (std::size_t k = 0; k + 1 < nn; ++k) {
        const double t = path.times[k];
        const double t_next = path.times[k + 1];
        while (e < dp.events.size() && dp.events[e].node <= k) ++e;
        const bool next_is_event = e < dp.events.size() && dp.events[e].node == k + 1;
        if (t_next >= 1.0) {
            dp.m[k + 1] = dp.m[k];
            dp.w[k + 1] = dp.w[k];
            continue;
        }
        const double xi_next_pre = next_is_event ? dp.events[e].pre_xi_hat : dp.xi_hat[k + 1];
        double dm = 0.0, dw = 0.0;
        if (dp.sigma_hat[k] > 0.0) {
            dm = (xi_next_pre - dp.xi_hat[k]) -
                 (dp.x_mean[k] - dp.xi_hat[k]) / (1.0 - t) * (t_next - t);
            dw = dm / dp.sigma_hat[k];
        }
        double jump = 0.0;
        if (next_is_event && dp.events[e].activation)
            jump = dp.events[e].post_xi_hat - dp.events[e].pre_xi_hat;
        dp.m[k + 1] = dp.m[k] + dm + jump;
        dp.w[k + 1] = dp.w[k] + dw;
    }

    // ledger
    EventLedger& led = res.ledger;
    for (const auto& ev : path.sw.events) {
        led.event_times.push_back(ev.time);
        led.delta.push_back(ev.activates());
    }
    led.c_count.assign(nn, 0);
    led.n_count.assign(nn, 0);
    int c = 0, n = 0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < nn; ++k) {
        while (j < led.event_times.size() && led.event_times[j] <= path.times[k]) {
            ++c;
            if (led.delta[j]) ++n;
            ++j;
        }
        led.c_count[k] = c;
        led.n_count[k] = n;
    }
    return res;
}

EulerReconstruction euler_reconstruct(const SignalLaw& prior, const InfoSystemPath& path,
                                      int base_steps) {
    const DynamicsResult dyn = build_dynamics(prior, path);
    const DynamicsPath& dp = dyn.path;
    const std::size_t nn = dp.times.size();

    EulerReconstruction rec;
    rec.times = dp.times;
    rec.x_reconstructed.assign(nn, 0.0);
    rec.x_reconstructed[0] = dp.x_mean[0];

    std::size_t e = 0;
    for (std::size_t k = 0; k + 1 < nn; ++k) {
        while (e < dp.events.size() && dp.events[e].node <= k) ++e;
        const bool next_is_event = e < dp.events.size() && dp.events[e].node == k + 1;
        double x = rec.x_reconstructed[k];
        if (dp.times[k + 1] < 1.0 && dp.sigma_hat[k] > 0.0) {
            const double dw = dp.w[k + 1] - dp.w[k];
            x += dp.x_var[k] / (dp.sigma_hat[k] * (1.0 - dp.times[k])) * dw;
        }
        if (next_is_event && dp.events[e].activation)
            x += dp.events[e].post_x - dp.events[e].pre_x;  // jumps copied exactly
        rec.x_reconstructed[k + 1] = x;
    }

    const double horizon = 1.0 - 10.0 / base_steps;
    double gap = 0.0;
    for (std::size_t k = 0; k < nn && dp.times[k] <= horizon; ++k)
        gap = std::max(gap, std::abs(rec.x_reconstructed[k] - dp.x_mean[k]));
    rec.max_gap = gap;
    return rec;
}

namespace {

double discount_integral(const std::function<double(double)>& psi, double t) {
    // composite Simpson on [t, 1]
    const int n = 512;
    const double h = (1.0 - t) / n;
    double s = psi(t) + psi(1.0);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * psi(t + i * h);
    return s * h / 3.0;
}

}  // namespace

double feynman_kac_residual(const SignalLaw& prior,
                            const std::function<double(double)>& psi,
                            const std::vector<double>& phi_on_atoms, double sigma,
                            const FkGrid& grid) {
    if (phi_on_atoms.size() != prior.size())
        throw std::invalid_argument("feynman_kac_residual: phi size mismatch");
    const auto& xs = prior.atoms();
    const std::size_t nx = grid.xi_nodes.size();
    const std::size_t nt = grid.t_nodes.size();
    if (nx < 3 || nt < 3)
        throw std::invalid_argument("feynman_kac_residual: grid too small");
    for (double t : grid.t_nodes)
        if (!(t >= 0.05 && t <= 0.9))
            throw std::invalid_argument("feynman_kac_residual: t nodes must lie in [0.05,0.9]");

    std::vector<std::vector<double>> v(nx, std::vector<double>(nt));
    std::vector<std::vector<double>> mu(nx, std::vector<double>(nt));
    for (std::size_t k = 0; k < nt; ++k) {
        const double t = grid.t_nodes[k];
        const double disc = std::exp(-discount_integral(psi, t));
        for (std::size_t i = 0; i < nx; ++i) {
            const double xi = grid.xi_nodes[i];
            std::vector<double> lw(xs.size());
            for (std::size_t j = 0; j < xs.size(); ++j)
                lw[j] = std::log(prior.weights()[j]) + log_kernel(xs[j], xi, t, sigma);
            const double lmax = *std::max_element(lw.begin(), lw.end());
            double z = 0.0, zphi = 0.0, zx = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double w = std::exp(lw[j] - lmax);
                z += w;
                zphi += w * phi_on_atoms[j];
                zx += w * xs[j];
            }
            v[i][k] = disc * zphi / z;
            mu[i][k] = (zx / z - xi) / (1.0 - t);
        }
    }

    const double dxi = grid.xi_nodes[1] - grid.xi_nodes[0];
    const double dt = grid.t_nodes[1] - grid.t_nodes[0];
    double max_res = 0.0;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        for (std::size_t k = 1; k + 1 < nt; ++k) {
            const double vt = (v[i][k + 1] - v[i][k - 1]) / (2.0 * dt);
            const double vx = (v[i + 1][k] - v[i - 1][k]) / (2.0 * dxi);
            const double vxx = (v[i + 1][k] - 2.0 * v[i][k] + v[i - 1][k]) / (dxi * dxi);
            const double res = vt + mu[i][k] * vx + 0.5 * sigma * sigma * vxx -
                               psi(grid.t_nodes[k]) * v[i][k];
            max_res = std::max(max_res, std::abs(res));
        }
    }
    return max_res;
}

}  // namespace modflow
