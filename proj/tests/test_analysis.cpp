#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "blowlab/analysis.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/integrate.hpp"
#include "blowlab/reaction.hpp"

using namespace blowlab;

namespace {

ProblemSpec reference_problem(double M, double p_exp = 2.0) {
    ProblemSpec p;
    p.domain = DomainSpec::interval(1.0);
    p.potential = FieldSpec::constant(1.0);
    p.profile = FieldSpec::cosine();
    p.exponent = p_exp;
    p.amplitude = M;
    p.potential_floor = 1.0;
    return p;
}

// Synthetic trajectory u_max(t) = C (T - t)^{-1/(p-1)} sampled on a geometric
// ladder of T - t; stop_reason forced to threshold-reached.
TrajectoryRecord synthetic_power_law(double C, double T, double p, int n_points,
                                     double tau_hi, double tau_lo) {
    TrajectoryRecord traj;
    traj.exponent = p;
    traj.stop_reason = StopReason::ThresholdReached;
    const double ratio = std::pow(tau_lo / tau_hi, 1.0 / (n_points - 1));
    double tau = tau_hi;
    for (int i = 0; i < n_points; ++i, tau *= ratio) {
        traj.times.push_back(T - tau);
        traj.umax.push_back(C * std::pow(tau, -1.0 / (p - 1.0)));
        traj.argmax_node.push_back(0);
    }
    return traj;
}

} // namespace

TEST_CASE("estimate_blowup_time is exact on self-similar input") {
    // u_max = (1-t)^{-1} sampled at t in {0.9, 0.99, 0.999}: y = 1-t exactly.
    TrajectoryRecord traj;
    traj.exponent = 2.0;
    traj.stop_reason = StopReason::ThresholdReached;
    for (double t : {0.9, 0.99, 0.999}) {
        traj.times.push_back(t);
        traj.umax.push_back(1.0 / (1.0 - t));
        traj.argmax_node.push_back(0);
    }
    FitWindow window;
    window.level_lo = 1.0;
    window.min_points = 3;
    const TimeFit fit = estimate_blowup_time(traj, 2.0, window);
    CHECK(fit.T_est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residual < 1e-15);
}

TEST_CASE("estimate_blowup_time is scale invariant in C") {
    for (double C : {0.5, 1.0, 2.0, 7.25}) {
        const TrajectoryRecord traj = synthetic_power_law(C, 1.0, 2.0, 80, 1e-2, 1e-8);
        FitWindow window;
        window.level_lo = 1.0;
        const TimeFit fit = estimate_blowup_time(traj, 2.0, window);
        CHECK(fit.T_est == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("estimate_blowup_time exactness across C, T, p") {
    for (double T : {0.25, 1.0, 3.0}) {
        for (double p : {2.0, 3.0}) {
            const TrajectoryRecord traj = synthetic_power_law(2.0, T, p, 120, 1e-3, 1e-9);
            FitWindow window;
            window.level_lo = 1.0;
            const TimeFit fit = estimate_blowup_time(traj, p, window);
            CHECK(fit.T_est == doctest::Approx(T).epsilon(1e-9));
        }
    }
}

TEST_CASE("estimate_blowup_time is stable under tail subsampling") {
    const ProblemSpec p = reference_problem(80.0);
    const auto grid = build_grid(p.domain, 0.025);
    SolverConfig config;
    const TrajectoryRecord traj = integrate(p, grid, config);
    REQUIRE(traj.stop_reason == StopReason::ThresholdReached);
    const TimeFit fit = estimate_blowup_time(traj, p.exponent);

    TrajectoryRecord thinned;
    thinned.exponent = traj.exponent;
    thinned.stop_reason = traj.stop_reason;
    for (std::size_t i = 0; i < traj.times.size(); i += 2) {
        thinned.times.push_back(traj.times[i]);
        thinned.umax.push_back(traj.umax[i]);
        thinned.argmax_node.push_back(traj.argmax_node[i]);
    }
    FitWindow window;
    window.min_points = 25;
    const TimeFit fit2 = estimate_blowup_time(thinned, p.exponent, window);
    CHECK(std::abs(fit2.T_est - fit.T_est) <= 3.0 * std::max(fit.residual, 1e-12) + 1e-9);
}

TEST_CASE("estimate_blowup_time guards") {
    TrajectoryRecord decayed;
    decayed.stop_reason = StopReason::DecayDetected;
    CHECK_THROWS_WITH_AS(estimate_blowup_time(decayed, 2.0), doctest::Contains("no-blowup"),
                         Error);

    TrajectoryRecord few = synthetic_power_law(1.0, 1.0, 2.0, 10, 1e-4, 1e-8);
    CHECK_THROWS_WITH_AS(estimate_blowup_time(few, 2.0), doctest::Contains("insufficient-tail"),
                         Error);

    TrajectoryRecord dip = synthetic_power_law(1.0, 1.0, 2.0, 80, 1e-2, 1e-8);
    dip.umax[40] = dip.umax[39] * 0.5; // force a non-monotone window
    FitWindow window;
    window.level_lo = 1.0;
    CHECK_THROWS_WITH_AS(estimate_blowup_time(dip, 2.0, window),
                         doctest::Contains("nonmonotone-tail"), Error);
}

TEST_CASE("estimate_blowup_point: symmetric problem gives the center") {
    const ProblemSpec p = reference_problem(160.0);
    const auto grid = build_grid(p.domain, 0.025);
    SolverConfig config;
    const TrajectoryRecord traj = integrate(p, grid, config);
    REQUIRE(traj.stop_reason == StopReason::ThresholdReached);
    const BlowupPoint point = estimate_blowup_point(traj);
    CHECK(std::abs(point.location.x) < 1e-9);
    CHECK_FALSE(point.wandering);
}

TEST_CASE("estimate_blowup_point: reaction-only run lands on the weight argmax") {
    ProblemSpec p = reference_problem(20.0);
    p.potential = FieldSpec::gaussian_bumps(1.0, {{1.0, 20.0, {0.3, 0.0}}});
    const auto grid = build_grid(p.domain, 0.0125);
    SolverConfig config;
    config.reaction_only = true;
    const TrajectoryRecord traj = integrate(p, grid, config);
    REQUIRE(traj.stop_reason == StopReason::ThresholdReached);
    const BlowupPoint point = estimate_blowup_point(traj);

    // Dense scan of phi^{p-1} V.
    double best_x = 0.0, best = -1e300;
    for (double x = -1.0; x <= 1.0; x += 1e-5) {
        const double w = evaluate(p.profile, p.domain, {x, 0.0}) *
                         evaluate(p.potential, p.domain, {x, 0.0});
        if (w > best) {
            best = w;
            best_x = x;
        }
    }
    // The final snapshot is nearly singular at the peak, which drives the
    // quadratic refinement toward the node itself; node resolution is the
    // honest tolerance here (the M-sweep acceptance check uses 2h).
    CHECK(std::abs(point.location.x - best_x) < grid->spacing);
}

TEST_CASE("estimate_blowup_point guards on non-blow-up runs") {
    const ProblemSpec p = reference_problem(0.0);
    const auto grid = build_grid(p.domain, 0.125);
    SolverConfig config;
    config.decay_window = 50;
    const TrajectoryRecord traj = integrate(p, grid, config);
    CHECK_THROWS_WITH_AS(estimate_blowup_point(traj), doctest::Contains("no-blowup"), Error);
}

TEST_CASE("extract_blowup_set: nesting and component structure") {
    const ProblemSpec p = reference_problem(160.0);
    const auto grid = build_grid(p.domain, 0.025);
    SolverConfig config;
    const TrajectoryRecord traj = integrate(p, grid, config);
    REQUIRE(traj.stop_reason == StopReason::ThresholdReached);

    const BlowupSet half = extract_blowup_set(traj, 0.5);
    const BlowupSet tight = extract_blowup_set(traj, 0.9);
    CHECK(!half.nodes.empty());
    for (int i : tight.nodes)
        CHECK(std::find(half.nodes.begin(), half.nodes.end(), i) != half.nodes.end());
    CHECK(!half.component.empty());

    const BlowupSet peak_only = extract_blowup_set(traj, 0.99);
    CHECK(peak_only.nodes.size() <= 3); // argmax and possibly immediate neighbors
}

TEST_CASE("extract_blowup_set: flat interior field selects every interior node") {
    const auto grid = build_grid(DomainSpec::interval(1.0), 0.125);
    TrajectoryRecord traj;
    traj.stop_reason = StopReason::ThresholdReached;
    traj.exponent = 2.0;
    traj.times = {0.0};
    traj.umax = {5.0};
    traj.argmax_node = {grid->interior.front()};
    GridField flat(grid);
    for (int i : grid->interior) flat.values[i] = 5.0;
    traj.final_state = {0.0, flat};
    const BlowupSet set = extract_blowup_set(traj, 0.5);
    CHECK(set.nodes.size() == grid->interior.size());
    CHECK(set.component.size() == grid->interior.size());
}

TEST_CASE("fit_blowup_rate recovers exact power laws") {
    const TrajectoryRecord traj = synthetic_power_law(1.0, 1.0, 2.0, 80, 1e-2, 1e-8);
    FitWindow window;
    window.level_lo = 1.0;
    const RateFit fit = fit_blowup_rate(traj, 1.0, 2.0, window);
    CHECK(fit.exponent == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(fit.constant == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_blowup_rate on a reaction-only p = 3 run") {
    ProblemSpec p = reference_problem(10.0, 3.0);
    const auto grid = build_grid(p.domain, 0.0125);
    SolverConfig config;
    config.reaction_only = true;
    config.growth_cap = 5e-3;
    const TrajectoryRecord traj = integrate(p, grid, config);
    REQUIRE(traj.stop_reason == StopReason::ThresholdReached);
    const TimeFit time_fit = estimate_blowup_time(traj, 3.0);
    const RateFit rate = fit_blowup_rate(traj, time_fit.T_est, 3.0);
    CHECK(rate.exponent == doctest::Approx(-0.5).epsilon(0.01));
    CHECK(rate.constant == doctest::Approx(std::pow(2.0, -0.5)).epsilon(0.02));
}

TEST_CASE("concentration_residual vanishes at xbar and is nonnegative elsewhere") {
    ProblemSpec p = reference_problem(160.0);
    p.potential = FieldSpec::gaussian_bumps(1.0, {{1.0, 20.0, {0.3, 0.0}}});
    const auto grid = build_grid(p.domain, 0.0125);
    const WeightMax w = argmax_weight(p, *grid);
    const double A = 1.0 / w.value;

    CHECK(concentration_residual(w.location, p, A) == doctest::Approx(0.0));
    for (int i : grid->interior) {
        const double r = concentration_residual(grid->nodes[i], p, A);
        CHECK(r >= -1e-6); // refinement slack
    }
    CHECK_THROWS_WITH_AS(concentration_residual({5.0, 0.0}, p, A),
                         doctest::Contains("point-outside-domain"), Error);
}
