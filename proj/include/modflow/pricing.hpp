#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "modflow/filter.hpp"
#include "modflow/info_system.hpp"
#include "modflow/point_field.hpp"
#include "modflow/signal_law.hpp"

namespace modflow {

// Deterministic discount system P_{0t}, with P(t,1) = P_{01}/P_{0t}.
class DiscountCurve {
public:
    static DiscountCurve flat(double rate);
    static DiscountCurve from_function(std::function<double(double)> p0t);

    double p0(double t) const;             // P_{0t}
    double forward_to_one(double t) const; // P_{t1}

private:
    explicit DiscountCurve(std::function<double(double)> p0t);
    std::function<double(double)> p0t_;
};

struct CallSpec {
    double strike = 0.0;
    double exercise_t = 0.5;   // in (0,1)
    SignalLaw prior;
    SourceSpec sources;
    PointFieldSpec field;      // monotone with >= 1 initially active source
    void validate() const;
};

// discounted conditional mean P_{t1} * E[X | F_t]
double price_process_value(const PosteriorMeasure& post, const DiscountCurve& curve,
                           double t);

// Root of the per-state exercise equation
//   integral (P_{t1} x - K) exp[(x s - t x^2/2)/(sigma_hat^2 (1-t))] nu(dx) = 0.
// Returns +/-inf when the integrand has no sign change over the atoms.
double critical_value(const SignalLaw& prior, double sigma_hat, double t, double strike,
                      double p_t1);

struct CallPriceResult {
    double total = 0.0;
    struct StateRow {
        std::uint32_t mask;
        double probability;
        double critical;  // +/-inf sentinel for trivial-exercise states
        double price;
    };
    std::vector<StateRow> states;
};

CallPriceResult call_price(const CallSpec& spec, const DiscountCurve& curve);

struct McPriceResult {
    double estimate = 0.0;
    double stderr_ = 0.0;
};

McPriceResult mc_call_price(const CallSpec& spec, const DiscountCurve& curve,
                            std::size_t n_paths, std::uint64_t seed, unsigned threads = 0);

}  // namespace modflow
