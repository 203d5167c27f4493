#include "modflow/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace modflow {

double log_kernel(double x, double y, double t, double sigma) {
    if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("log_kernel: t must lie in [0,1)");
    if (!(sigma > 0.0)) throw std::domain_error("log_kernel: sigma must be positive");
    return (x * y - t * x * x / 2.0) / (sigma * sigma * (1.0 - t));
}

double kernel_h(double x, double y, double t, double sigma) {
    return std::exp(log_kernel(x, y, t, sigma));
}

PosteriorMeasure::PosteriorMeasure(std::shared_ptr<const std::vector<double>> atoms,
                                   std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_->size() != weights_.size())
        throw std::invalid_argument("PosteriorMeasure: size mismatch");
}

PosteriorMeasure PosteriorMeasure::from_log_weights(
    std::shared_ptr<const std::vector<double>> atoms, std::vector<double> log_weights) {
    const double lmax = *std::max_element(log_weights.begin(), log_weights.end());
    if (!std::isfinite(lmax))
        throw std::runtime_error("PosteriorMeasure: non-finite log-weights, max = " +
                                 std::to_string(lmax));
    double total = 0.0;
    for (double& lw : log_weights) {
        lw = std::exp(lw - lmax);
        total += lw;
    }
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::runtime_error(
            "PosteriorMeasure: weight normalization degenerated, max log-weight = " +
            std::to_string(lmax));
    for (double& w : log_weights) w /= total;
    return PosteriorMeasure(std::move(atoms), std::move(log_weights));
}

double PosteriorMeasure::moment(int k) const {
    if (k < 1) throw std::invalid_argument("PosteriorMeasure::moment: k must be >= 1");
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j) s += weights_[j] * std::pow((*atoms_)[j], k);
    return s;
}

double PosteriorMeasure::variance() const {
    const double m = moment(1);
    return moment(2) - m * m;
}

double conditional_moment(const PosteriorMeasure& post, int k) { return post.moment(k); }

PosteriorMeasure posterior(const SignalLaw& prior, const EffectiveState& eff,
                           const ComplementarySummary& comp) {
    if (!(eff.t < 1.0)) throw std::domain_error("posterior: t must be < 1");
    const auto& xs = prior.atoms();
    std::vector<double> lw(prior.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double l = std::log(prior.weights()[j]) + comp.log_eval(xs[j]);
        if (!eff.empty()) l += log_kernel(xs[j], eff.xi_hat, eff.t, eff.sigma_hat);
        lw[j] = l;
    }
    return PosteriorMeasure::from_log_weights(prior.shared_atoms(), std::move(lw));
}

PosteriorMeasure posterior_full(const SignalLaw& prior, const InfoSystemPath& path,
                                std::size_t node) {
    if (!(path.times[node] < 1.0)) throw std::domain_error("posterior_full: t must be < 1");
    const auto& xs = prior.atoms();
    std::vector<double> lw(prior.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double l = std::log(prior.weights()[j]);
        for (int i = 0; i < path.n_sources(); ++i) {
            const double tau = path.tau[i][node];
            const double y = tau > 0.0 ? path.xi[i][path.node_index(tau)] : 0.0;
            l += log_kernel(xs[j], y, tau, path.sigmas[i]);
        }
        lw[j] = l;
    }
    return PosteriorMeasure::from_log_weights(prior.shared_atoms(), std::move(lw));
}

JumpContext make_jump_context(const InfoSystemPath& path, std::size_t event_node) {
    const auto it =
        std::find(path.event_nodes.begin(), path.event_nodes.end(), event_node);
    if (it == path.event_nodes.end())
        throw std::invalid_argument("make_jump_context: node carries no event");
    const auto& ev = path.sw.events[path.event_index[it - path.event_nodes.begin()]];
    const std::uint32_t turned_on = ev.post_mask & ~ev.pre_mask;
    if (turned_on == 0)
        throw std::invalid_argument("make_jump_context: event activates no source");

    JumpContext ctx;
    ctx.pre_eff = effective_state_pre(path, event_node);
    ctx.pre_comp = complementary_summary_pre(path, event_node);
    for (int i = 0; i < path.n_sources(); ++i) {
        if (!((turned_on >> i) & 1u)) continue;
        ctx.activated.push_back(i);
        // the pre-event summary holds the frozen pair of every inactive source
        double y = 0.0, tau = 0.0;
        for (const auto& r : ctx.pre_comp.records)
            if (r.source == i) {
                y = r.y;
                tau = r.tau;
            }
        ctx.activated_y.push_back(y);
        ctx.activated_tau.push_back(tau);
        ctx.activated_sigma.push_back(path.sigmas[i]);
    }
    return ctx;
}

double JumpSizeLaw::g(double z) const {
    if (z <= z_grid.front()) return g_values.front();
    if (z >= z_grid.back()) return g_values.back();
    const auto it = std::upper_bound(z_grid.begin(), z_grid.end(), z);
    const std::size_t hi = static_cast<std::size_t>(it - z_grid.begin());
    const double w = (z - z_grid[hi - 1]) / (z_grid[hi] - z_grid[hi - 1]);
    return g_values[hi - 1] * (1.0 - w) + g_values[hi] * w;
}

JumpSizeLaw jump_size_law(const SignalLaw& prior, const JumpContext& ctx, double t,
                          int n_grid) {
    if (ctx.activated.empty())
        throw std::invalid_argument("jump_size_law: no activated source");
    if (!(t < 1.0)) throw std::domain_error("jump_size_law: t must be < 1");

    JumpSizeLaw law;
    const auto& xs = prior.atoms();
    law.u_per_atom.resize(xs.size());
    double v = 0.0;
    for (std::size_t a = 0; a < ctx.activated.size(); ++a) {
        const double s2 = ctx.activated_sigma[a] * ctx.activated_sigma[a];
        v += (t - ctx.activated_tau[a]) / (s2 * (1.0 - t));
    }
    law.v = v;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double u = 0.0;
        for (std::size_t a = 0; a < ctx.activated.size(); ++a) {
            const double s2 = ctx.activated_sigma[a] * ctx.activated_sigma[a];
            u += (ctx.activated_y[a] + (t - ctx.activated_tau[a]) * xs[j]) /
                 (s2 * (1.0 - t));
        }
        law.u_per_atom[j] = u;
    }
    if (!(v > 0.0)) {
        law.degenerate = true;  // Z is deterministic given X
        return law;
    }

    // pre-jump posterior drives the mixture of Z, used for the z-grid range
    PosteriorMeasure pre = posterior(prior, ctx.pre_eff, ctx.pre_comp);
    double mean_z = 0.0, second = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        mean_z += pre.weights()[j] * law.u_per_atom[j];
        second += pre.weights()[j] * (law.u_per_atom[j] * law.u_per_atom[j] + v);
    }
    const double sd_z = std::sqrt(std::max(second - mean_z * mean_z, v));
    law.z_grid.resize(n_grid);
    law.g_values.resize(n_grid);
    const double lo = mean_z - 8.0 * sd_z, hi = mean_z + 8.0 * sd_z;
    for (int m = 0; m < n_grid; ++m)
        law.z_grid[m] = lo + (hi - lo) * m / (n_grid - 1);

    // posterior given Z = z: exp(xz) times frozen factors of the non-activated
    // sources times the Gaussian-completion factor of the activated ones
    std::vector<double> base_lw(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        double l = std::log(prior.weights()[j]);
        if (!ctx.pre_eff.empty())
            l += (-t * xs[j] * xs[j] / 2.0) /
                     (ctx.pre_eff.sigma_hat * ctx.pre_eff.sigma_hat * (1.0 - t)) +
                 xs[j] * ctx.pre_eff.xi_hat /
                     (ctx.pre_eff.sigma_hat * ctx.pre_eff.sigma_hat * (1.0 - t));
        for (const auto& r : ctx.pre_comp.records) {
            const bool activated_now =
                std::find(ctx.activated.begin(), ctx.activated.end(), r.source) !=
                ctx.activated.end();
            if (activated_now) {
                const double s2 = r.sigma * r.sigma;
                l += -t * xs[j] * xs[j] / (2.0 * s2 * (1.0 - t));
            } else {
                l += (xs[j] * r.y - r.tau * xs[j] * xs[j] / 2.0) /
                     (r.sigma * r.sigma * (1.0 - r.tau));
            }
        }
        base_lw[j] = l;
    }
    for (int m = 0; m < n_grid; ++m) {
        std::vector<double> lw(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j)
            lw[j] = base_lw[j] + xs[j] * law.z_grid[m];
        PosteriorMeasure post =
            PosteriorMeasure::from_log_weights(prior.shared_atoms(), std::move(lw));
        law.g_values[m] = post.mean();
    }
    return law;
}

MultiFactorPosterior multi_factor_posterior(
    const MultiFactorSpec& spec,
    const std::vector<std::pair<EffectiveState, ComplementarySummary>>& observations) {
    if (spec.factor_laws.empty())
        throw std::invalid_argument("multi_factor_posterior: no factors");
    if (observations.size() != spec.factor_laws.size())
        throw std::invalid_argument("multi_factor_posterior: observation count mismatch");

    MultiFactorPosterior out;
    std::size_t cells = 1;
    for (std::size_t a = 0; a < spec.factor_laws.size(); ++a) {
        out.factors.push_back(
            posterior(spec.factor_laws[a], observations[a].first, observations[a].second));
        cells *= spec.factor_laws[a].size();
        if (cells > spec.product_cap)
            throw std::length_error("multi_factor_posterior: product grid of " +
                                    std::to_string(cells) + " cells exceeds cap of " +
                                    std::to_string(spec.product_cap));
    }

    // tensor-product expectation of the payoff
    const std::size_t m = out.factors.size();
    std::vector<std::size_t> idx(m, 0);
    std::vector<double> point(m);
    double total = 0.0;
    while (true) {
        double w = 1.0;
        for (std::size_t a = 0; a < m; ++a) {
            point[a] = out.factors[a].atoms()[idx[a]];
            w *= out.factors[a].weights()[idx[a]];
        }
        total += w * spec.payoff(point);
        std::size_t a = 0;
        while (a < m && ++idx[a] == out.factors[a].size()) {
            idx[a] = 0;
            ++a;
        }
        if (a == m) break;
    }
    out.joint_expectation = total;
    return out;
}

}  // namespace modflow
