#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "modflow/info_system.hpp"

using namespace modflow;

namespace {

SystemSpec schedule_system(std::vector<ScheduleEvent> schedule, std::uint32_t initial,
                           std::vector<double> sigmas, int n_steps = 40) {
    SystemSpec spec{SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5}), {std::move(sigmas)},
                    {}, TimeGrid(n_steps)};
    spec.field.n_sources = spec.sources.n();
    spec.field.mode = FieldMode::Schedule;
    spec.field.schedule = std::move(schedule);
    spec.field.initial_mask = initial;
    return spec;
}

}  // namespace

TEST_CASE("last-active time tracks activity, freezes on deactivation") {
    // active from 0, deactivated at 0.4, still off at 0.7
    const SystemSpec spec = schedule_system({{0.4, 0, false}}, 1, {1.0});
    const InfoSystemPath path = simulate_path(spec, 5, 0);
    const std::size_t k_early = path.node_index(0.25);
    CHECK(path.tau[0][k_early] == 0.25);
    CHECK(path.tau[0][path.node_index(0.7)] == 0.4);
    // tau is non-decreasing and bounded by t
    for (std::size_t k = 1; k < path.n_nodes(); ++k) {
        CHECK(path.tau[0][k] >= path.tau[0][k - 1]);
        CHECK(path.tau[0][k] <= path.times[k]);
    }
}

TEST_CASE("never-active source keeps tau at zero and modulated at zero") {
    const SystemSpec spec = schedule_system({}, 0, {1.0});
    const InfoSystemPath path = simulate_path(spec, 5, 1);
    for (std::size_t k = 0; k < path.n_nodes(); ++k) {
        CHECK(path.tau[0][k] == 0.0);
        CHECK(path.modulated[0][k] == 0.0);
    }
}

TEST_CASE("raw observation starts at zero and is x at the terminal node") {
    const SystemSpec spec = schedule_system({}, 1, {0.7});
    const InfoSystemPath path = simulate_path(spec, 9, 3);
    CHECK(path.xi[0].front() == 0.0);
    CHECK(path.xi[0].back() == path.x_true);  // bridge pinned at 1
}

TEST_CASE("effective state aggregates active sources by precision") {
    const SystemSpec spec = schedule_system({}, 0b11, {1.0, 1.0});
    const InfoSystemPath path = simulate_path(spec, 2, 0);
    const std::size_t k = path.node_index(0.5);
    const EffectiveState eff = effective_state(path, k);
    CHECK(eff.sigma_hat == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(eff.xi_hat ==
          doctest::Approx((path.xi[0][k] + path.xi[1][k]) / 2.0).epsilon(1e-14));

    const SystemSpec single = schedule_system({}, 1, {2.0});
    const InfoSystemPath sp = simulate_path(single, 2, 0);
    const std::size_t j = sp.node_index(0.5);
    const EffectiveState se = effective_state(sp, j);
    CHECK(se.sigma_hat == 2.0);
    CHECK(se.xi_hat == doctest::Approx(sp.xi[0][j]).epsilon(1e-14));
}

TEST_CASE("empty active set collapses the effective state to zero") {
    const SystemSpec spec = schedule_system({}, 0, {1.0, 1.5});
    const InfoSystemPath path = simulate_path(spec, 4, 0);
    const EffectiveState eff = effective_state(path, path.node_index(0.5));
    CHECK(eff.empty());
    CHECK(eff.xi_hat == 0.0);
    CHECK(eff.sigma_hat == 0.0);
}

TEST_CASE("adding an active source strictly shrinks the effective noise") {
    const std::vector<double> sigmas = {0.9, 1.4, 2.2};
    CHECK(effective_sigma(0b11, sigmas) < effective_sigma(0b01, sigmas));
    CHECK(effective_sigma(0b111, sigmas) < effective_sigma(0b11, sigmas));
}

TEST_CASE("complementary summary holds exactly the frozen factors") {
    ComplementarySummary none;
    CHECK(none.eval(0.7) == 1.0);

    ComplementarySummary never;
    never.records = {{0, 0.0, 0.0, 1.0}};
    CHECK(never.eval(1.3) == 1.0);  // h(x, 0, 0, sigma) = 1

    ComplementarySummary one;
    one.records = {{0, 0.2, 0.5, 1.0}};
    CHECK(one.eval(1.0) == doctest::Approx(std::exp(-0.1)).epsilon(1e-14));
    CHECK(one.eval(1.0) == doctest::Approx(0.90484).epsilon(1e-5));
}

TEST_CASE("summary is constant between switch events") {
    SystemSpec spec{SignalLaw::from_atoms({0.0, 1.0}, {0.5, 0.5}), {{1.0, 0.8}}, {},
                    TimeGrid(60)};
    spec.field.n_sources = 2;
    spec.field.mode = FieldMode::IndependentOnOff;
    spec.field.lambda_on = {2.0, 3.0};
    spec.field.lambda_off = {2.0, 1.0};
    spec.field.initial_mask = 0b01;
    for (std::uint64_t p = 0; p < 20; ++p) {
        const InfoSystemPath path = simulate_path(spec, 31, p);
        for (std::size_t k = 1; k + 1 < path.n_nodes(); ++k) {
            const bool event_here =
                std::find(path.event_nodes.begin(), path.event_nodes.end(), k) !=
                path.event_nodes.end();
            if (event_here) continue;
            const auto a = complementary_summary(path, k - 1);
            const auto b = complementary_summary(path, k);
            if (path.mask[k - 1] != path.mask[k]) continue;
            REQUIRE(a.records.size() == b.records.size());
            for (std::size_t r = 0; r < a.records.size(); ++r) {
                CHECK(a.records[r].source == b.records[r].source);
                CHECK(a.records[r].y == b.records[r].y);
                CHECK(a.records[r].tau == b.records[r].tau);
            }
        }
    }
}

TEST_CASE("projection mixing reduces to modulation for diagonal projections") {
    const SourceSpec sources{{1.0, 2.0}};
    const std::vector<double> xi = {0.4, -0.7};

    const MixedProjection ident =
        mix_projection(xi, {{1.0, 0.0}, {0.0, 1.0}}, sources);
    CHECK(ident.values == xi);
    CHECK(ident.alphas[0] == 1.0);
    CHECK(ident.alphas[1] == 2.0);

    const MixedProjection gate = mix_projection(xi, {{1.0, 0.0}, {0.0, 0.0}}, sources);
    CHECK(gate.values[0] == xi[0]);
    CHECK(gate.values[1] == 0.0);
    CHECK(gate.alphas[1] == 0.0);
}

TEST_CASE("uniform mixing has bridge coefficient 1/sqrt(2)") {
    const SourceSpec sources{{1.0, 1.0}};
    const MixedProjection mix =
        mix_projection({0.3, 0.9}, {{0.5, 0.5}, {0.5, 0.5}}, sources);
    CHECK(mix.values[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(mix.alphas[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(mix.alphas[1] == mix.alphas[0]);
}

TEST_CASE("projection validation rejects bad matrices") {
    const SourceSpec sources{{1.0, 1.0}};
    CHECK_THROWS_AS(mix_projection({0.0, 0.0}, {{1.0, 0.2}, {0.0, 1.0}}, sources),
                    std::invalid_argument);  // asymmetric
    CHECK_THROWS_AS(mix_projection({0.0, 0.0}, {{0.5, 0.2}, {0.2, 0.5}}, sources),
                    std::invalid_argument);  // not idempotent
    CHECK_THROWS_AS(mix_projection({0.0, 0.0}, {{0.5, -0.5}, {-0.5, 0.5}}, sources),
                    std::invalid_argument);  // zero row sum on a nonzero row
}
