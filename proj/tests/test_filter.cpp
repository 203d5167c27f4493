#include <doctest.h>

#include <cmath>

#include "modflow/filter.hpp"
#include "modflow/verify.hpp"

using namespace modflow;

TEST_CASE("conditioning kernel matches its closed form") {
    CHECK(kernel_h(0.0, 1.7, 0.3, 0.9) == 1.0);
    CHECK(kernel_h(1.0, 1.0, 0.0, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(kernel_h(2.0, 1.0, 0.5, 1.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(kernel_h(0.0, 0.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(kernel_h(0.0, 0.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("posterior degenerates correctly in the trivial regimes") {
    const SignalLaw point = SignalLaw::from_atoms({0.7}, {1.0});
    EffectiveState eff{0.5, 1, 0.9, 1.0};
    ComplementarySummary comp;
    const PosteriorMeasure p = posterior(point, eff, comp);
    CHECK(p.weights()[0] == 1.0);
    CHECK(p.mean() == 0.7);

    // nothing observed: posterior equals the prior
    const SignalLaw prior = SignalLaw::from_atoms({-0.4, 0.2, 1.1}, {0.2, 0.5, 0.3});
    EffectiveState empty{0.5, 0, 0.0, 0.0};
    const PosteriorMeasure q = posterior(prior, empty, comp);
    for (std::size_t j = 0; j < q.size(); ++j)
        CHECK(q.weights()[j] == doctest::Approx(prior.weights()[j]).epsilon(1e-14));
}

TEST_CASE("symmetric observation leaves a symmetric prior balanced") {
    const SignalLaw prior = SignalLaw::from_atoms({-1.0, 1.0}, {0.5, 0.5});
    EffectiveState eff{0.5, 1, 0.0, 1.0};
    const PosteriorMeasure p = posterior(prior, eff, {});
    CHECK(p.weights()[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p.weights()[1] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("binary posterior matches brute-force Bayes") {
    const SignalLaw prior = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    EffectiveState eff{0.5, 1, 0.4, 1.0};
    const PosteriorMeasure p = posterior(prior, eff, {});
    const double expected = std::exp(0.3) / (1.0 + std::exp(0.3));
    CHECK(p.weights()[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(p.weights()[1] == doctest::Approx(0.57444).epsilon(1e-5));
    CHECK(p.mean() == doctest::Approx(expected).epsilon(1e-12));
    CHECK(p.variance() == doctest::Approx(expected * (1.0 - expected)).epsilon(1e-12));
    CHECK(p.variance() == doctest::Approx(0.24446).epsilon(1e-4));
    double total = 0.0;
    for (double w : p.weights()) total += w;
    CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("posterior is invariant to prior weight rescaling") {
    EffectiveState eff{0.4, 1, 0.7, 0.8};
    const PosteriorMeasure a =
        posterior(SignalLaw::from_atoms({0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}), eff, {});
    const PosteriorMeasure b =
        posterior(SignalLaw::from_atoms({0.0, 0.5, 1.0}, {10.0, 20.0, 30.0}), eff, {});
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(a.weights()[j] == doctest::Approx(b.weights()[j]).epsilon(1e-14));
}

TEST_CASE("posterior concentrates on the true atom near the terminal time") {
    const SignalLaw prior = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    const double t = 1.0 - 1e-6;
    EffectiveState eff{t, 1, t * 1.0, 1.0};  // observation centered on atom 1
    const PosteriorMeasure p = posterior(prior, eff, {});
    CHECK(p.weights()[1] > 0.999);
}

TEST_CASE("reduction identity holds on randomized configurations") {
    const CheckResult res = check_reduction_identity(50, 424242);
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("filter matches the Gaussian-likelihood oracle on randomized cases") {
    const CheckResult res = check_bayes_oracle(50, 424242);
    INFO(res.detail);
    CHECK(res.pass);
}

TEST_CASE("conditional moments are plain weighted power sums") {
    const PosteriorMeasure point(std::make_shared<std::vector<double>>(
                                     std::vector<double>{0.7}),
                                 {1.0});
    CHECK(conditional_moment(point, 2) == doctest::Approx(0.49).epsilon(1e-14));
    const PosteriorMeasure uniform(std::make_shared<std::vector<double>>(
                                       std::vector<double>{0.0, 1.0}),
                                   {0.5, 0.5});
    CHECK(conditional_moment(uniform, 1) == 0.5);
    CHECK_THROWS_AS(conditional_moment(uniform, 0), std::invalid_argument);
}

TEST_CASE("jump size law exposes the proof's Gaussian parameters") {
    // single never-active source activating at t
    const SignalLaw prior = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    JumpContext ctx;
    ctx.activated = {0};
    ctx.pre_eff = {0.5, 0, 0.0, 0.0};
    ctx.activated_y = {0.0};
    ctx.activated_tau = {0.0};
    ctx.activated_sigma = {1.2};
    const double t = 0.5;
    const JumpSizeLaw law = jump_size_law(prior, ctx, t);
    const double c = 1.2 * 1.2 * (1.0 - t);
    CHECK(law.v == doctest::Approx(t / c).epsilon(1e-14));
    CHECK(law.u_per_atom[0] == 0.0);
    CHECK(law.u_per_atom[1] == doctest::Approx(t / c).epsilon(1e-14));
    CHECK_FALSE(law.degenerate);
    // g interpolates the post-activation conditional mean; it must stay in hull
    for (double g : law.g_values) {
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }
}

TEST_CASE("point-mass prior makes the jump law constant") {
    const SignalLaw point = SignalLaw::from_atoms({0.7}, {1.0});
    JumpContext ctx;
    ctx.activated = {0};
    ctx.pre_eff = {0.4, 0, 0.0, 0.0};
    ctx.activated_y = {0.0};
    ctx.activated_tau = {0.0};
    ctx.activated_sigma = {1.0};
    const JumpSizeLaw law = jump_size_law(point, ctx, 0.4);
    for (double g : law.g_values) CHECK(g == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("re-activation at the frozen time is flagged degenerate") {
    const SignalLaw prior = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    JumpContext ctx;
    ctx.activated = {0};
    ctx.pre_eff = {0.5, 0, 0.0, 0.0};
    ctx.activated_y = {0.3};
    ctx.activated_tau = {0.5};  // tau equals t: no accumulated gap
    ctx.activated_sigma = {1.0};
    CHECK(jump_size_law(prior, ctx, 0.5).degenerate);
}

TEST_CASE("multi-factor posterior factorizes and matches independence algebra") {
    const SignalLaw binary = SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5});
    const EffectiveState e1{0.5, 1, 0.3, 1.0};
    const EffectiveState e2{0.5, 1, -0.2, 0.8};
    const ComplementarySummary none;

    MultiFactorSpec sum_spec{{binary, binary},
                             [](const std::vector<double>& x) { return x[0] + x[1]; }};
    const MultiFactorPosterior sum =
        multi_factor_posterior(sum_spec, {{e1, none}, {e2, none}});
    CHECK(sum.joint_expectation ==
          doctest::Approx(sum.factors[0].mean() + sum.factors[1].mean()).epsilon(1e-12));

    MultiFactorSpec prod_spec{{binary, binary},
                              [](const std::vector<double>& x) { return x[0] * x[1]; }};
    const MultiFactorPosterior prod =
        multi_factor_posterior(prod_spec, {{e1, none}, {e2, none}});
    CHECK(prod.joint_expectation ==
          doctest::Approx(prod.factors[0].mean() * prod.factors[1].mean())
              .epsilon(1e-12));

    // m = 1 reduces to the plain posterior
    MultiFactorSpec one{{binary}, [](const std::vector<double>& x) { return x[0]; }};
    const MultiFactorPosterior single = multi_factor_posterior(one, {{e1, none}});
    const PosteriorMeasure direct = posterior(binary, e1, none);
    CHECK(single.joint_expectation == doctest::Approx(direct.mean()).epsilon(1e-14));
}

TEST_CASE("multi-factor product grids above the cap are refused") {
    const SignalLaw wide =
        SignalLaw::from_density([](double) { return 1.0; }, 0.0, 1.0, 4000);
    MultiFactorSpec spec{{wide, wide},
                         [](const std::vector<double>& x) { return x[0]; }};
    const EffectiveState e{0.5, 1, 0.0, 1.0};
    CHECK_THROWS_AS(multi_factor_posterior(spec, {{e, {}}, {e, {}}}), std::length_error);
}
