#include "modflow/info_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace modflow {

void SourceSpec::validate() const {
    if (sigmas.empty()) throw std::invalid_argument("SourceSpec: no sources");
    for (double s : sigmas)
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("SourceSpec: sigmas must be positive and finite");
}

void SystemSpec::validate() const {
    sources.validate();
    field.validate();
    if (field.n_sources != sources.n())
        throw std::invalid_argument("SystemSpec: field/source count mismatch");
}

double ComplementarySummary::log_eval(double x) const {
    double s = 0.0;
    for (const auto& r : records)
        s += (x * r.y - r.tau * x * x / 2.0) / (r.sigma * r.sigma * (1.0 - r.tau));
    return s;
}

double ComplementarySummary::eval(double x) const { return std::exp(log_eval(x)); }

double effective_sigma(std::uint32_t mask, const std::vector<double>& sigmas) {
    if (mask == 0) return 0.0;
    double prec = 0.0;
    for (std::size_t i = 0; i < sigmas.size(); ++i)
        if ((mask >> i) & 1u) prec += 1.0 / (sigmas[i] * sigmas[i]);
    return 1.0 / std::sqrt(prec);
}

std::size_t InfoSystemPath::node_index(double t) const {
    const auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.end() || *it != t)
        throw std::invalid_argument("InfoSystemPath: time is not a node");
    return static_cast<std::size_t>(it - times.begin());
}

std::pair<std::vector<double>, std::vector<int>> augment_nodes(const TimeGrid& grid,
                                                               const SwitchPath& sw) {
    std::vector<double> times;
    std::vector<int> base_index;
    const auto& base = grid.nodes();
    times.reserve(base.size() + sw.events.size());
    base_index.reserve(times.capacity());
    std::size_t e = 0;
    for (std::size_t k = 0; k < base.size(); ++k) {
        while (e < sw.events.size() && sw.events[e].time < base[k]) {
            times.push_back(sw.events[e].time);
            base_index.push_back(-1);
            ++e;
        }
        if (e < sw.events.size() && sw.events[e].time == base[k]) ++e;  // coincides
        times.push_back(base[k]);
        base_index.push_back(static_cast<int>(k));
    }
    return {std::move(times), std::move(base_index)};
}

InfoSystemPath build_info_path(double law_draw, const std::vector<BridgePath>& bridges,
                               const SwitchPath& sw, std::vector<double> times,
                               std::vector<int> base_index, std::vector<double> sigmas) {
    const int n = static_cast<int>(sigmas.size());
    if (static_cast<int>(bridges.size()) != n)
        throw std::invalid_argument("build_info_path: one bridge per source required");
    for (const auto& b : bridges)
        if (b.values.size() != times.size())
            throw std::invalid_argument("build_info_path: bridge/grid length mismatch");
    if (times.size() != base_index.size())
        throw std::invalid_argument("build_info_path: times/base_index length mismatch");

    InfoSystemPath path;
    path.times = std::move(times);
    path.base_index = std::move(base_index);
    path.x_true = law_draw;
    path.sw = sw;
    path.sigmas = std::move(sigmas);
    const std::size_t nn = path.times.size();
    path.mask.assign(nn, 0);
    path.xi.assign(n, std::vector<double>(nn, 0.0));
    path.tau.assign(n, std::vector<double>(nn, 0.0));
    path.modulated.assign(n, std::vector<double>(nn, 0.0));

    std::vector<double> last_off(n, 0.0);  // 0 while a source has never been active
    std::uint32_t mask = sw.initial_mask;
    std::size_t e = 0;
    for (std::size_t k = 0; k < nn; ++k) {
        const double t = path.times[k];
        while (e < sw.events.size() && sw.events[e].time <= t) {
            const auto& ev = sw.events[e];
            if (ev.time != t)
                throw std::invalid_argument("build_info_path: event time missing from grid");
            const std::uint32_t turned_off = ev.pre_mask & ~ev.post_mask;
            for (int i = 0; i < n; ++i)
                if ((turned_off >> i) & 1u) last_off[i] = ev.time;
            mask = ev.post_mask;
            path.event_nodes.push_back(k);
            path.event_index.push_back(e);
            ++e;
        }
        path.mask[k] = mask;
        for (int i = 0; i < n; ++i) {
            const double raw = t * law_draw + path.sigmas[i] * bridges[i].values[k];
            path.xi[i][k] = raw;
            const bool active = (mask >> i) & 1u;
            path.tau[i][k] = active ? t : last_off[i];
            path.modulated[i][k] = active ? raw : 0.0;
        }
    }
    return path;
}

InfoSystemPath simulate_path(const SystemSpec& spec, std::uint64_t seed,
                             std::uint64_t path_index) {
    spec.validate();
    RngStream signal_rng(seed, path_index, StreamRole::Signal);
    const double x = spec.prior.sample(signal_rng);
    RngStream switch_rng(seed, path_index, StreamRole::Switch);
    SwitchPath sw = sample_switch_path(spec.field, switch_rng);
    auto [times, base_index] = augment_nodes(spec.grid, sw);
    std::vector<BridgePath> bridges(spec.sources.n());
    for (int i = 0; i < spec.sources.n(); ++i) {
        RngStream brng(seed, path_index, StreamRole::Bridge, static_cast<std::uint64_t>(i));
        bridges[i] = sample_bridge(times, brng);
        bridges[i].sigma = spec.sources.sigmas[i];
    }
    return build_info_path(x, bridges, sw, std::move(times), std::move(base_index),
                           spec.sources.sigmas);
}

std::pair<InfoSystemPath, InfoSystemPath> simulate_two_agent_paths(
    const SignalLaw& prior, const SourceSpec& sources, const PointFieldSpec& field1,
    const PointFieldSpec& field2, const TimeGrid& grid, std::uint64_t seed,
    std::uint64_t path_index) {
    sources.validate();
    RngStream signal_rng(seed, path_index, StreamRole::Signal);
    const double x = prior.sample(signal_rng);
    RngStream s1(seed, path_index, StreamRole::Switch, 0);
    RngStream s2(seed, path_index, StreamRole::Switch, 1);
    SwitchPath sw1 = sample_switch_path(field1, s1);
    SwitchPath sw2 = sample_switch_path(field2, s2);

    // merged event times so both observers share one exact node set
    SwitchPath merged;
    std::vector<double> ev_times;
    for (const auto& ev : sw1.events) ev_times.push_back(ev.time);
    for (const auto& ev : sw2.events) ev_times.push_back(ev.time);
    std::sort(ev_times.begin(), ev_times.end());
    ev_times.erase(std::unique(ev_times.begin(), ev_times.end()), ev_times.end());
    for (double t : ev_times) merged.events.push_back({t, 0, 0});
    auto [times, base_index] = augment_nodes(grid, merged);

    std::vector<BridgePath> bridges(sources.n());
    for (int i = 0; i < sources.n(); ++i) {
        RngStream brng(seed, path_index, StreamRole::Bridge, static_cast<std::uint64_t>(i));
        bridges[i] = sample_bridge(times, brng);
        bridges[i].sigma = sources.sigmas[i];
    }
    InfoSystemPath p1 =
        build_info_path(x, bridges, sw1, times, base_index, sources.sigmas);
    InfoSystemPath p2 = build_info_path(x, bridges, sw2, std::move(times),
                                        std::move(base_index), sources.sigmas);
    return {std::move(p1), std::move(p2)};
}

static EffectiveState make_effective(const InfoSystemPath& path, std::size_t node,
                                     std::uint32_t mask) {
    EffectiveState st;
    st.t = path.times[node];
    st.active_mask = mask;
    if (mask == 0) return st;
    st.sigma_hat = effective_sigma(mask, path.sigmas);
    double s = 0.0;
    for (int i = 0; i < path.n_sources(); ++i)
        if ((mask >> i) & 1u) s += path.xi[i][node] / (path.sigmas[i] * path.sigmas[i]);
    st.xi_hat = st.sigma_hat * st.sigma_hat * s;
    return st;
}

EffectiveState effective_state(const InfoSystemPath& path, std::size_t node) {
    return make_effective(path, node, path.mask[node]);
}

static ComplementarySummary make_summary(const InfoSystemPath& path, std::size_t node,
                                         std::uint32_t mask,
                                         const std::vector<double>& tau_of) {
    ComplementarySummary comp;
    for (int i = 0; i < path.n_sources(); ++i) {
        if ((mask >> i) & 1u) continue;
        const double tau = tau_of[i];
        const double y = tau > 0.0 ? path.xi[i][path.node_index(tau)] : 0.0;
        comp.records.push_back({i, y, tau, path.sigmas[i]});
    }
    return comp;
}

ComplementarySummary complementary_summary(const InfoSystemPath& path, std::size_t node) {
    if (path.times[node] >= 1.0)
        throw std::domain_error("complementary_summary: defined for t < 1 only");
    std::vector<double> tau_of(path.n_sources());
    for (int i = 0; i < path.n_sources(); ++i) tau_of[i] = path.tau[i][node];
    return make_summary(path, node, path.mask[node], tau_of);
}

// Left-limit state at an event node: the mask before the switch and the
// last-active times implied by the events strictly before it.
static std::pair<std::uint32_t, std::vector<double>> pre_state(const InfoSystemPath& path,
                                                               std::size_t node) {
    auto it = std::find(path.event_nodes.begin(), path.event_nodes.end(), node);
    if (it == path.event_nodes.end())
        return {path.mask[node],
                [&] {
                    std::vector<double> tau(path.n_sources());
                    for (int i = 0; i < path.n_sources(); ++i) tau[i] = path.tau[i][node];
                    return tau;
                }()};
    const std::size_t ev_idx = path.event_index[it - path.event_nodes.begin()];
    const double t = path.times[node];
    const std::uint32_t mask = path.sw.events[ev_idx].pre_mask;
    std::vector<double> tau(path.n_sources(), 0.0);
    for (int i = 0; i < path.n_sources(); ++i) {
        if ((mask >> i) & 1u) {
            tau[i] = t;
        } else {
            double last_off = 0.0;
            std::uint32_t m = path.sw.initial_mask;
            for (std::size_t e = 0; e < ev_idx; ++e) {
                const auto& ev = path.sw.events[e];
                if ((ev.pre_mask & ~ev.post_mask) >> i & 1u) last_off = ev.time;
                m = ev.post_mask;
            }
            (void)m;
            tau[i] = last_off;
        }
    }
    return {mask, std::move(tau)};
}

EffectiveState effective_state_pre(const InfoSystemPath& path, std::size_t node) {
    auto [mask, tau] = pre_state(path, node);
    (void)tau;
    return make_effective(path, node, mask);
}

ComplementarySummary complementary_summary_pre(const InfoSystemPath& path,
                                               std::size_t node) {
    auto [mask, tau] = pre_state(path, node);
    return make_summary(path, node, mask, tau);
}

MixedProjection mix_projection(const std::vector<double>& xi,
                               const std::vector<std::vector<double>>& projection,
                               const SourceSpec& sources) {
    const std::size_t n = xi.size();
    if (projection.size() != n || sources.sigmas.size() != n)
        throw std::invalid_argument("mix_projection: dimension mismatch");
    for (const auto& row : projection)
        if (row.size() != n) throw std::invalid_argument("mix_projection: non-square matrix");
    const double tol = 1e-10;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(projection[i][j] - projection[j][i]) > tol)
                throw std::invalid_argument("mix_projection: matrix not symmetric");
            double pij2 = 0.0;
            for (std::size_t l = 0; l < n; ++l) pij2 += projection[i][l] * projection[l][j];
            if (std::abs(pij2 - projection[i][j]) > tol)
                throw std::invalid_argument("mix_projection: matrix not idempotent");
        }

    MixedProjection out;
    out.values.assign(n, 0.0);
    out.alphas.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0, row_abs = 0.0, psi = 0.0, var = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = projection[i][j];
            row_sum += p;
            row_abs += std::abs(p);
            psi += p * xi[j];
            var += p * p * sources.sigmas[j] * sources.sigmas[j];
        }
        if (row_abs == 0.0) continue;  // annihilated coordinate
        if (row_sum == 0.0)
            throw std::invalid_argument("mix_projection: zero row sum on a nonzero row");
        const double p_hat = 1.0 / row_sum;
        out.values[i] = p_hat * psi;
        out.alphas[i] = p_hat * std::sqrt(var);
    }
    return out;
}

}  // namespace modflow
