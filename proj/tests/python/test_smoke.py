import math

import pytest

import blowlab as bl


def reference_problem(M, p=2.0):
    problem = bl.ProblemSpec()
    problem.domain = bl.DomainSpec.interval(1.0)
    problem.potential = bl.FieldSpec.constant(1.0)
    problem.profile = bl.FieldSpec.cosine()
    problem.exponent = p
    problem.amplitude = M
    problem.potential_floor = 1.0
    return problem


def test_grid_and_fields():
    grid = bl.build_grid(bl.DomainSpec.interval(1.0), 0.125)
    assert grid.size() == 17
    assert len(grid.interior) == 15
    phi = bl.sample_field(bl.FieldSpec.cosine(), grid)
    assert phi.values[8] == pytest.approx(1.0)
    assert abs(phi.values[0]) < 1e-12

    with pytest.raises(bl.Error):
        bl.build_grid(bl.DomainSpec.interval(1.0), 0.5)


def test_validation_and_weight():
    problem = reference_problem(160.0)
    grid = bl.build_grid(problem.domain, 0.0125)
    report = bl.validate_problem(problem, grid)
    assert report.all_pass()
    xbar, wbar = bl.argmax_weight(problem, grid)
    assert abs(xbar.x) < 1e-12
    assert wbar == pytest.approx(1.0)


def test_reaction_oracle_closed_forms():
    assert bl.ode_blowup_time(10.0, 1.0, 1.0, 2.0) == pytest.approx(0.1)
    assert bl.ode_value(10.0, 1.0, 1.0, 2.0, 0.05) == pytest.approx(20.0)
    with pytest.raises(bl.Error):
        bl.ode_value(10.0, 1.0, 1.0, 2.0, 0.1)


def test_reaction_only_integration_matches_ode():
    problem = reference_problem(10.0)
    grid = bl.build_grid(problem.domain, 0.0125)
    solver = bl.SolverConfig()
    solver.reaction_only = True
    solver.growth_cap = 4e-4
    solver.stop_threshold = 1e8
    traj = bl.integrate(problem, grid, solver)
    assert traj.stop_reason == bl.StopReason.ThresholdReached
    fit = bl.estimate_blowup_time(traj, 2.0)
    assert fit.T_est == pytest.approx(0.1, rel=1e-3)


def test_full_run_and_analysis():
    problem = reference_problem(160.0)
    grid = bl.build_grid(problem.domain, 0.0125)
    solver = bl.SolverConfig()
    solver.stop_threshold = 1e8
    solver.snapshot_levels = [1e2, 1e3, 1e4]
    traj = bl.integrate(problem, grid, solver)
    assert traj.stop_reason == bl.StopReason.ThresholdReached

    fit = bl.estimate_blowup_time(traj, 2.0)
    assert fit.T_est * 160.0 == pytest.approx(1.0, abs=0.15)

    point = bl.estimate_blowup_point(traj)
    assert abs(point.location.x) < 1e-9

    trace = bl.convergence_diagnostic(traj.level_snapshots, point.location, fit.T_est, problem)
    assert trace.k_target == pytest.approx(1.0)
    assert trace.w_rel_err_final <= 0.10
    assert trace.E_rel_err_final <= 0.15


def test_selfsim_closed_forms():
    assert bl.k_of_a(1.0, 2.0) == pytest.approx(1.0)
    assert bl.gaussian_weight_integral(1) == pytest.approx(2.0 * math.sqrt(math.pi))
    value, second = bl.f_function(bl.k_of_a(2.5, 3.0), 2.5, 3.0)
    assert second == pytest.approx(-1.0)
    assert bl.eigenvalue_constant(1) == pytest.approx(math.pi**2 / 4.0)
    assert bl.bessel_j0_first_zero() == pytest.approx(2.40482555769577, abs=1e-10)


def test_bounds_report():
    problem = reference_problem(4000.0)
    grid = bl.build_grid(problem.domain, 0.0125)
    report = bl.lemma21_upper_bound(problem, grid)
    assert report.T_upper > 0.0
    assert report.epsilon < 0.5
    assert report.T_upper * 4000.0 > 1.0
    with pytest.raises(bl.Error):
        bl.lemma21_upper_bound(reference_problem(1.0), grid)


def test_harness_sweep(tmp_path):
    config = bl.experiment_config_from_text(
        """
[domain]
dimension = 1
shape = interval
half_length = 1

[potential]
kind = constant
c0 = 1
floor = 1

[profile]
kind = cosine

[exponent]
p = 2

[solver]
h = 0.0625
u_stop = 1e6

[sweep]
m_values = 40 80 160

[analysis]
fit_window_lo = 1e2
fit_window_hi = 1e6
"""
    )
    config.output.dir = str(tmp_path / "results")
    rows = bl.run_sweep(config, 1)
    assert [row.M for row in rows] == [40.0, 80.0, 160.0]
    scaled = [row.T_scaled for row in rows]
    assert all(s is not None for s in scaled)
    assert scaled[0] > scaled[1] > scaled[2] > 1.0

    bl.emit_outputs(rows, config)
    csv = (tmp_path / "results" / "results.csv").read_text()
    assert csv.startswith(bl.csv_header(1))
    assert len(csv.strip().splitlines()) == 4
