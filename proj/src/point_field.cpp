#include "modflow/point_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace modflow {

void PointFieldSpec::validate() const {
    if (n_sources < 1 || n_sources > 20)
        throw std::invalid_argument("PointFieldSpec: n_sources out of range [1,20]");
    if (initial_mask >> n_sources)
        throw std::invalid_argument("PointFieldSpec: initial_mask has bits beyond n_sources");
    auto check_rates = [&](const std::vector<double>& r, const char* name) {
        if (static_cast<int>(r.size()) != n_sources)
            throw std::invalid_argument(std::string("PointFieldSpec: ") + name +
                                        " size mismatch");
        for (double v : r)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument(std::string("PointFieldSpec: ") + name +
                                            " must be finite and >= 0");
    };
    switch (mode) {
        case FieldMode::IndependentOnOff:
            check_rates(lambda_on, "lambda_on");
            check_rates(lambda_off, "lambda_off");
            break;
        case FieldMode::Monotone:
            check_rates(lambda_on, "lambda_on");
            if (!lambda_off.empty())
                for (double v : lambda_off)
                    if (v != 0.0)
                        throw std::invalid_argument(
                            "PointFieldSpec: monotone mode forbids off-rates");
            break;
        case FieldMode::Schedule: {
            std::vector<double> last(n_sources, -1.0);
            for (const auto& ev : schedule) {
                if (ev.source < 0 || ev.source >= n_sources)
                    throw std::invalid_argument("PointFieldSpec: schedule source out of range");
                if (!(ev.time > 0.0 && ev.time < 1.0))
                    throw std::invalid_argument(
                        "PointFieldSpec: schedule times must lie in (0,1)");
                if (ev.time <= last[ev.source])
                    throw std::invalid_argument(
                        "PointFieldSpec: schedule times must increase per source");
                last[ev.source] = ev.time;
            }
            break;
        }
    }
}

std::uint32_t SwitchPath::mask_at(double t) const {
    std::uint32_t m = initial_mask;
    for (const auto& ev : events) {
        if (ev.time > t) break;
        m = ev.post_mask;
    }
    return m;
}

std::uint32_t SwitchPath::mask_before(double t) const {
    std::uint32_t m = initial_mask;
    for (const auto& ev : events) {
        if (ev.time >= t) break;
        m = ev.post_mask;
    }
    return m;
}

SwitchPath sample_switch_path(const PointFieldSpec& spec, RngStream& rng) {
    spec.validate();
    SwitchPath path;
    path.initial_mask = spec.initial_mask;

    // raw per-source switch times
    std::vector<std::pair<double, int>> raw;  // (time, source) toggles
    if (spec.mode == FieldMode::Schedule) {
        std::vector<bool> state(spec.n_sources);
        for (int i = 0; i < spec.n_sources; ++i) state[i] = spec.source_initially_active(i);
        std::vector<ScheduleEvent> evs = spec.schedule;
        std::stable_sort(evs.begin(), evs.end(),
                         [](const ScheduleEvent& a, const ScheduleEvent& b) {
                             return a.time < b.time;
                         });
        for (const auto& ev : evs) {
            if (state[ev.source] == ev.on) continue;  // no-op transition
            state[ev.source] = ev.on;
            raw.emplace_back(ev.time, ev.source);
        }
    } else {
        for (int i = 0; i < spec.n_sources; ++i) {
            bool on = spec.source_initially_active(i);
            double t = 0.0;
            while (true) {
                const double rate =
                    on ? (spec.mode == FieldMode::Monotone ? 0.0 : spec.lambda_off[i])
                       : spec.lambda_on[i];
                if (rate <= 0.0) break;
                t += rng.exponential(rate);
                if (t >= 1.0) break;
                on = !on;
                raw.emplace_back(t, i);
            }
        }
        std::sort(raw.begin(), raw.end());
    }

    // merge simultaneous switches into single state changes
    std::uint32_t mask = spec.initial_mask;
    std::size_t k = 0;
    while (k < raw.size()) {
        const double t = raw[k].first;
        std::uint32_t next = mask;
        while (k < raw.size() && raw[k].first == t) {
            next ^= (1u << raw[k].second);
            ++k;
        }
        if (next != mask) path.events.push_back({t, mask, next});
        mask = next;
    }
    return path;
}

double source_active_probability(const PointFieldSpec& spec, int i, double t) {
    const bool on0 = spec.source_initially_active(i);
    if (spec.mode == FieldMode::Schedule) {
        bool on = on0;
        for (const auto& ev : spec.schedule)
            if (ev.source == i && ev.time <= t) on = ev.on;
        return on ? 1.0 : 0.0;
    }
    const double lon = spec.lambda_on[i];
    const double loff = spec.mode == FieldMode::Monotone ? 0.0 : spec.lambda_off[i];
    const double r = lon + loff;
    if (r == 0.0) return on0 ? 1.0 : 0.0;
    const double pi_on = lon / r;
    return pi_on + ((on0 ? 1.0 : 0.0) - pi_on) * std::exp(-r * t);
}

std::vector<std::pair<std::uint32_t, double>> state_probabilities(const PointFieldSpec& spec,
                                                                  double t) {
    spec.validate();
    if (spec.mode == FieldMode::Schedule) {
        SwitchPath p;
        p.initial_mask = spec.initial_mask;
        std::uint32_t m = spec.initial_mask;
        for (const auto& ev : spec.schedule) {
            if (ev.time > t) continue;
            if (ev.on)
                m |= (1u << ev.source);
            else
                m &= ~(1u << ev.source);
        }
        return {{m, 1.0}};
    }
    std::vector<double> p(spec.n_sources);
    for (int i = 0; i < spec.n_sources; ++i) p[i] = source_active_probability(spec, i, t);
    std::vector<std::pair<std::uint32_t, double>> out;
    const std::uint32_t n_states = 1u << spec.n_sources;
    out.reserve(n_states);
    for (std::uint32_t mask = 0; mask < n_states; ++mask) {
        double prob = 1.0;
        for (int i = 0; i < spec.n_sources; ++i)
            prob *= ((mask >> i) & 1u) ? p[i] : (1.0 - p[i]);
        if (prob > 0.0) out.emplace_back(mask, prob);
    }
    return out;
}

}  // namespace modflow
