#include "modflow/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "modflow/parallel.hpp"
#include "modflow/rng.hpp"

namespace modflow {

namespace {
double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

DiscountCurve::DiscountCurve(std::function<double(double)> p0t) : p0t_(std::move(p0t)) {
    if (std::abs(p0t_(0.0) - 1.0) > 1e-14)
        throw std::invalid_argument("DiscountCurve: P_{00} must equal 1");
    double prev = 1.0;
    for (int k = 1; k <= 8; ++k) {
        const double p = p0t_(k / 8.0);
        if (!(p > 0.0 && p <= prev))
            throw std::invalid_argument("DiscountCurve: P_{0t} must be in (0,1], non-increasing");
        prev = p;
    }
}

DiscountCurve DiscountCurve::flat(double rate) {
    if (rate < 0.0) throw std::invalid_argument("DiscountCurve::flat: negative rate");
    return DiscountCurve([rate](double t) { return std::exp(-rate * t); });
}

DiscountCurve DiscountCurve::from_function(std::function<double(double)> p0t) {
    return DiscountCurve(std::move(p0t));
}

double DiscountCurve::p0(double t) const { return p0t_(t); }

double DiscountCurve::forward_to_one(double t) const { return p0t_(1.0) / p0t_(t); }

void CallSpec::validate() const {
    if (!(strike >= 0.0)) throw std::invalid_argument("CallSpec: strike must be >= 0");
    if (!(exercise_t > 0.0 && exercise_t < 1.0))
        throw std::invalid_argument("CallSpec: exercise time must lie in (0,1)");
    sources.validate();
    field.validate();
    if (field.n_sources != sources.n())
        throw std::invalid_argument("CallSpec: field/source count mismatch");
    if (field.mode != FieldMode::Monotone)
        throw std::invalid_argument("CallSpec: point field must be activation-only");
    if (field.initial_mask == 0)
        throw std::invalid_argument("CallSpec: at least one source must start active");
}

double price_process_value(const PosteriorMeasure& post, const DiscountCurve& curve,
                           double t) {
    if (!(t < 1.0)) throw std::domain_error("price_process_value: t must be < 1");
    return curve.forward_to_one(t) * post.mean();
}

namespace {

// signed value and absolute scale of the exercise integrand at varsigma,
// after max-log stabilization
std::pair<double, double> exercise_function(const SignalLaw& prior, double sigma_hat,
                                            double t, double strike, double p_t1,
                                            double varsigma) {
    const auto& xs = prior.atoms();
    const double c = sigma_hat * sigma_hat * (1.0 - t);
    double lmax = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        lw[j] = (xs[j] * varsigma - t * xs[j] * xs[j] / 2.0) / c +
                std::log(prior.weights()[j]);
        lmax = std::max(lmax, lw[j]);
    }
    double f = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const double term = (p_t1 * xs[j] - strike) * std::exp(lw[j] - lmax);
        f += term;
        scale += std::abs(term);
    }
    return {f, scale};
}

}  // namespace

double critical_value(const SignalLaw& prior, double sigma_hat, double t, double strike,
                      double p_t1) {
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("critical_value: sigma_hat <= 0");
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("critical_value: t must be in (0,1)");
    const double lo_pay = p_t1 * prior.min_atom() - strike;
    const double hi_pay = p_t1 * prior.max_atom() - strike;
    if (lo_pay >= 0.0) return -std::numeric_limits<double>::infinity();  // always exercise
    if (hi_pay <= 0.0) return std::numeric_limits<double>::infinity();   // never exercise

    const double max_abs_atom =
        std::max(std::abs(prior.min_atom()), std::abs(prior.max_atom()));
    double b = 10.0 * sigma_hat * sigma_hat * (1.0 - t) * (1.0 + max_abs_atom);
    auto value = [&](double s) {
        return exercise_function(prior, sigma_hat, t, strike, p_t1, s);
    };
    // expand until the bracket straddles the root; the normalized integrand
    // is increasing in varsigma so this terminates
    while (!(value(-b).first < 0.0 && value(b).first > 0.0)) {
        b *= 2.0;
        if (b > 1e300) throw std::runtime_error("critical_value: bracket expansion failed");
    }
    double lo = -b, hi = b;
    double mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const auto [f, scale] = value(mid);
        if (std::abs(f) <= 1e-13 * scale) break;
        if (f < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

CallPriceResult call_price(const CallSpec& spec, const DiscountCurve& curve) {
    spec.validate();
    const double t = spec.exercise_t;
    const double p0t = curve.p0(t);
    const double p_t1 = curve.forward_to_one(t);
    const auto& xs = spec.prior.atoms();
    const auto& ws = spec.prior.weights();

    CallPriceResult out;
    for (const auto& [mask, prob] : state_probabilities(spec.field, t)) {
        const double sig = effective_sigma(mask, spec.sources.sigmas);
        const double vs = critical_value(spec.prior, sig, t, spec.strike, p_t1);
        double price = 0.0;
        if (vs == -std::numeric_limits<double>::infinity()) {
            price = p0t * (p_t1 * spec.prior.mean() - spec.strike);
        } else if (vs == std::numeric_limits<double>::infinity()) {
            price = 0.0;
        } else {
            const double zhat = vs / std::sqrt(t * (1.0 - t));
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double d =
                    -zhat / sig + xs[j] * std::sqrt(t) / (sig * std::sqrt(1.0 - t));
                price += ws[j] * (p_t1 * xs[j] - spec.strike) * norm_cdf(d);
            }
            price *= p0t;
        }
        out.states.push_back({mask, prob, vs, price});
        out.total += prob * price;
    }
    return out;
}

McPriceResult mc_call_price(const CallSpec& spec, const DiscountCurve& curve,
                            std::size_t n_paths, std::uint64_t seed, unsigned threads) {
    spec.validate();
    const double t = spec.exercise_t;
    const double p0t = curve.p0(t);
    const double p_t1 = curve.forward_to_one(t);
    const int n = spec.sources.n();

    std::vector<double> p_on(n);
    for (int i = 0; i < n; ++i) p_on[i] = source_active_probability(spec.field, i, t);

    // fixed chunking keeps the reduction independent of the thread count
    const std::size_t n_chunks = 256;
    std::vector<double> sum(n_chunks, 0.0), sumsq(n_chunks, 0.0);
    const auto& xs = spec.prior.atoms();
    const auto& ws = spec.prior.weights();

    parallel_for(n_chunks, threads, [&](std::size_t chunk) {
        const std::size_t lo = chunk * n_paths / n_chunks;
        const std::size_t hi = (chunk + 1) * n_paths / n_chunks;
        std::vector<double> lw(xs.size());
        for (std::size_t p = lo; p < hi; ++p) {
            RngStream rng(seed, p, StreamRole::Payoff);
            std::uint32_t mask = 0;
            for (int i = 0; i < n; ++i) {
                const bool on = spec.field.source_initially_active(i)
                                    ? true
                                    : rng.uniform() < p_on[i];
                if (on) mask |= (1u << i);
            }
            const double x = spec.prior.sample(rng);
            const double sig = effective_sigma(mask, spec.sources.sigmas);
            const double xi = t * x + sig * std::sqrt(t * (1.0 - t)) * rng.normal();
            double lmax = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < xs.size(); ++j) {
                lw[j] = std::log(ws[j]) + log_kernel(xs[j], xi, t, sig);
                lmax = std::max(lmax, lw[j]);
            }
            double z = 0.0, zx = 0.0;
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double w = std::exp(lw[j] - lmax);
                z += w;
                zx += w * xs[j];
            }
            const double payoff = p0t * std::max(p_t1 * zx / z - spec.strike, 0.0);
            sum[chunk] += payoff;
            sumsq[chunk] += payoff * payoff;
        }
    });

    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < n_chunks; ++c) {
        s += sum[c];
        s2 += sumsq[c];
    }
    McPriceResult res;
    res.estimate = s / n_paths;
    const double var = std::max(s2 / n_paths - res.estimate * res.estimate, 0.0);
    res.stderr_ = std::sqrt(var / n_paths);
    return res;
}

}  // namespace modflow
