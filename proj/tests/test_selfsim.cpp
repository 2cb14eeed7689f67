#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "blowlab/errors.hpp"
#include "blowlab/integrate.hpp"
#include "blowlab/reaction.hpp"
#include "blowlab/selfsim.hpp"

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

// Grid wide enough in y that the gaussian tail beyond it is negligible.
GridPtr wide_grid(double extent, double h) {
    return build_grid(DomainSpec::interval(extent), h);
}

Snapshot constant_snapshot(const GridPtr& grid, double value, double t) {
    GridField f(grid);
    for (int i : grid->interior) f.values[i] = value;
    return {t, f};
}

} // namespace

TEST_CASE("rescale_snapshot of a constant field") {
    const auto grid = wide_grid(1.0, 0.125);
    const Snapshot snap = constant_snapshot(grid, 7.0, 0.75);
    const double T = 1.0, p = 2.0;
    const RescaledProfile w = rescale_snapshot(snap, {0.0, 0.0}, T, p);
    CHECK(w.s == doctest::Approx(std::log(4.0)));
    for (int i : grid->interior) CHECK(w.w[i] == doctest::Approx(0.25 * 7.0));
    CHECK(w.y_spacing == doctest::Approx(0.125 / 0.5));
}

TEST_CASE("rescale_snapshot at t = 0 reproduces the initial profile form") {
    const ProblemSpec p = reference_problem(160.0);
    const auto grid = build_grid(p.domain, 0.0125);
    const GridField phi = sample_field(p.profile, grid);
    GridField u0(grid);
    for (int i : grid->interior) u0.values[i] = p.amplitude * phi.values[i];
    const double T = 0.00654; // any 0 < T
    const RescaledProfile w = rescale_snapshot({0.0, u0}, {0.0, 0.0}, T, 2.0);
    CHECK(w.s == 0.0);
    for (int i : grid->interior) {
        const double y = w.y_nodes[i].x;
        const double expected = T * 160.0 * evaluate(p.profile, p.domain, {y * std::sqrt(T), 0.0});
        CHECK(w.w[i] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("rescale_snapshot of the exact ODE solution has w(0,s) = k for all s") {
    // V = 1, p = 2 at the peak: u(t) = (T-t)^{-1} exactly, so w(0,s) = 1 = k.
    const auto grid = wide_grid(1.0, 0.125);
    const double T = 0.1;
    const int center = grid->index(grid->nx / 2, 0);
    for (double frac : {0.1, 0.5, 0.9, 0.99}) {
        const double t = frac * T;
        GridField u(grid);
        for (int i : grid->interior) u.values[i] = 1.0 / (T - t);
        const RescaledProfile w = rescale_snapshot({t, u}, {0.0, 0.0}, T, 2.0);
        CHECK(w.w[center] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("rescale_snapshot rejects t at or past T") {
    const auto grid = wide_grid(1.0, 0.125);
    const Snapshot snap = constant_snapshot(grid, 1.0, 1.0);
    CHECK_THROWS_WITH_AS(rescale_snapshot(snap, {0.0, 0.0}, 1.0, 2.0),
                         doctest::Contains("time-at-or-past-blowup"), Error);
}

TEST_CASE("k_of_a closed forms") {
    CHECK(k_of_a(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(k_of_a(2.0, 3.0) == doctest::Approx(0.5));
    CHECK(k_of_a(1.0, 3.0) == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK_THROWS_WITH_AS(k_of_a(0.0, 2.0), doctest::Contains("nonpositive-input"), Error);
}

TEST_CASE("gaussian weight integral") {
    CHECK(gaussian_weight_integral(1) ==
          doctest::Approx(2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
    CHECK(gaussian_weight_integral(2) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    CHECK_THROWS_WITH_AS(gaussian_weight_integral(3), doctest::Contains("unsupported-dimension"),
                         Error);
}

TEST_CASE("energy_of_constant and the explicit E(k(a)) display agree") {
    CHECK(energy_of_constant(0.0, 1.0, 2.0, 1) == 0.0);

    // E(k=1; V=1, p=2, N=1) = Gamma (1/2 - 1/3) = 2 sqrt(pi) / 6.
    const double expected = 2.0 * std::sqrt(std::numbers::pi) / 6.0;
    CHECK(energy_of_constant(1.0, 1.0, 2.0, 1) == doctest::Approx(expected).epsilon(1e-14));

    std::mt19937 rng(20240831);
    std::uniform_real_distribution<double> V_dist(0.5, 5.0), p_dist(1.1, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double V = V_dist(rng), p = p_dist(rng);
        const double k = k_of_a(V, p);
        const double direct = energy_of_constant(k, V, p, 1);
        const double display = k * k *
                               (1.0 / (2.0 * (p - 1.0)) - 1.0 / ((p + 1.0) * (p - 1.0))) *
                               gaussian_weight_integral(1);
        CHECK(direct == doctest::Approx(display).epsilon(1e-12));
    }
}

TEST_CASE("f_function stationarity and curvature at k(a)") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> V_dist(0.5, 5.0), p_dist(1.1, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double V = V_dist(rng), p = p_dist(rng);
        const double k = k_of_a(V, p);
        // F'(k) = 0 via symmetric difference quotient.
        const double eps = 1e-6 * k;
        const double dF = f_function(k + eps, V, p).value - f_function(k - eps, V, p).value;
        CHECK(std::abs(dF / (2.0 * eps)) < 1e-8);
        // F''(k) = -1 exactly.
        CHECK(f_function(k, V, p).second_derivative == doctest::Approx(-1.0).epsilon(1e-12));
    }
    CHECK(f_function(0.0, 1.0, 3.0).value == 0.0);
    CHECK(f_function(0.0, 1.0, 3.0).second_derivative == doctest::Approx(0.5));
}

TEST_CASE("F attains its unique positive maximum at k(a)") {
    const double V = 1.3, p = 2.5;
    const double k = k_of_a(V, p);
    const double Fk = f_function(k, V, p).value;
    for (double b = 0.0; b <= 2.0 * k; b += 1e-3 * k) {
        if (std::abs(b - k) < 1e-3 * k) continue;
        CHECK(f_function(b, V, p).value < Fk);
    }
}

TEST_CASE("weighted_energy of zero and constant profiles") {
    const auto grid = wide_grid(10.0, 0.01);

    const Snapshot zero = constant_snapshot(grid, 0.0, 0.0);
    const RescaledProfile wz = rescale_snapshot(zero, {0.0, 0.0}, 1.0, 2.0);
    CHECK(weighted_energy(wz, 1.0, 2.0) == 0.0);

    // w == k on |y| <= 10: quadrature must match Gamma F(k) to 1e-6.
    // Choose T - t = 1 so w equals the stored field values and y = x.
    const double V = 1.0, p = 2.0;
    const double k = k_of_a(V, p);
    const Snapshot flat = constant_snapshot(grid, k, 0.0);
    const RescaledProfile w = rescale_snapshot(flat, {0.0, 0.0}, 1.0, p);
    const double E = weighted_energy(w, V, p);
    // The two boundary nodes carry w = 0, so the far tail contributes a spike
    // of gradient; with rho(10) ~ 1.4e-11 it stays under the tolerance.
    CHECK(E == doctest::Approx(energy_of_constant(k, V, p, 1)).epsilon(1e-6));
}

TEST_CASE("weighted_energy quadrature sanity for w = 1") {
    const auto grid = wide_grid(10.0, 0.01);
    const Snapshot flat = constant_snapshot(grid, 1.0, 0.0);
    const RescaledProfile w = rescale_snapshot(flat, {0.0, 0.0}, 1.0, 2.0);
    const double E = weighted_energy(w, 1.0, 2.0);
    const double target = gaussian_weight_integral(1) * f_function(1.0, 1.0, 2.0).value;
    CHECK(std::abs(E - target) <= 1e-6 + 1e-9);
}

TEST_CASE("half-loaded profile lands strictly between zero and the full constant") {
    const auto grid = wide_grid(10.0, 0.01);
    GridField f(grid);
    for (int i : grid->interior)
        if (grid->nodes[i].x < 0.0) f.values[i] = 1.0;
    const RescaledProfile w = rescale_snapshot({0.0, f}, {0.0, 0.0}, 1.0, 2.0);
    const double E = weighted_energy(w, 1.0, 2.0);
    const double full = energy_of_constant(1.0, 1.0, 2.0, 1);
    CHECK(E > 0.0);
    // Half the F-mass plus the gradient spike at the jump.
    CHECK(E > 0.5 * full);
}

TEST_CASE("convergence_diagnostic on exact ODE snapshots") {
    const auto grid = wide_grid(1.0, 0.125);
    const double T = 0.1;
    std::vector<Snapshot> snaps;
    for (double frac : {0.9, 0.99, 0.999}) {
        const double t = frac * T;
        GridField u(grid);
        for (int i : grid->interior) u.values[i] = 1.0 / (T - t);
        snaps.push_back({t, u});
    }
    ProblemSpec p = reference_problem(1.0);
    const EnergyTrace trace = convergence_diagnostic(snaps, {0.0, 0.0}, T, p);
    CHECK(trace.k_target == doctest::Approx(1.0));
    for (double w : trace.w_center) CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace.w_rel_err_final < 1e-12);

    std::vector<Snapshot> too_few(snaps.begin(), snaps.begin() + 2);
    CHECK_THROWS_WITH_AS(convergence_diagnostic(too_few, {0.0, 0.0}, T, p),
                         doctest::Contains("insufficient-snapshots"), Error);
}

TEST_CASE("energy_inequality_check verdicts") {
    EnergyTrace trace;
    trace.s_values = {0.5, 1.0, 2.0};
    const double E_w0 = 0.4, T = 0.01;

    trace.E_values = {E_w0, E_w0, E_w0}; // constant-in-s
    const SlackResult ok = energy_inequality_check(trace, E_w0, T, 10.0);
    CHECK(ok.pass);
    CHECK(ok.slack <= 0.0);

    trace.E_values = {E_w0, E_w0 + 100.0 * T * T, E_w0}; // constructed violation
    const SlackResult bad = energy_inequality_check(trace, E_w0, T, 10.0);
    CHECK_FALSE(bad.pass);
    CHECK(bad.slack == doctest::Approx(100.0));
}
