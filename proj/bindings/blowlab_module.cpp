// Python bindings for the blowlab core: problem construction, the explicit
// integrator, blow-up analysis, the self-similar diagnostics, the theoretical
// bounds, and the sweep harness.

#include <pybind11/pybind11.h>
#include <pybind11/functional.h>
#include <pybind11/stl.h>

#include <memory>

#include "blowlab/analysis.hpp"
#include "blowlab/bounds.hpp"
#include "blowlab/config.hpp"
#include "blowlab/errors.hpp"
#include "blowlab/harness.hpp"
#include "blowlab/integrate.hpp"
#include "blowlab/reaction.hpp"
#include "blowlab/selfsim.hpp"

namespace py = pybind11;
using namespace blowlab;

namespace {

std::shared_ptr<Grid> build_grid_py(const DomainSpec& domain, double h) {
    return std::const_pointer_cast<Grid>(build_grid(domain, h));
}

GridPtr as_const(const std::shared_ptr<Grid>& g) { return g; }

} // namespace

PYBIND11_MODULE(_blowlab, m) {
    m.doc() = "Numerical laboratory for finite-time blow-up of u_t = lap u + V(x) u^p";

    py::register_exception<Error>(m, "Error");

    // ---- geometry ----------------------------------------------------
    py::class_<Point>(m, "Point")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Point{x, y}; }), py::arg("x"),
             py::arg("y") = 0.0)
        .def_readwrite("x", &Point::x)
        .def_readwrite("y", &Point::y)
        .def("__repr__", [](const Point& p) {
            return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::enum_<Shape>(m, "Shape")
        .value("Interval", Shape::Interval)
        .value("Rectangle", Shape::Rectangle)
        .value("Disc", Shape::Disc);

    py::class_<DomainSpec>(m, "DomainSpec")
        .def_static("interval", &DomainSpec::interval, py::arg("half_length"))
        .def_static("rectangle", &DomainSpec::rectangle, py::arg("half_length_x"),
                    py::arg("half_length_y"))
        .def_static("disc", &DomainSpec::disc, py::arg("radius"))
        .def_readonly("dimension", &DomainSpec::dimension)
        .def_readonly("shape", &DomainSpec::shape)
        .def_readonly("half_length_x", &DomainSpec::half_length_x)
        .def_readonly("half_length_y", &DomainSpec::half_length_y)
        .def("contains_interior", &DomainSpec::contains_interior)
        .def("boundary_distance", &DomainSpec::boundary_distance);

    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def_readonly("domain", &Grid::domain)
        .def_readonly("spacing", &Grid::spacing)
        .def_readonly("nx", &Grid::nx)
        .def_readonly("ny", &Grid::ny)
        .def_readonly("nodes", &Grid::nodes)
        .def_readonly("boundary", &Grid::boundary)
        .def_readonly("interior", &Grid::interior)
        .def("size", &Grid::size)
        .def("index", &Grid::index, py::arg("ix"), py::arg("iy"));

    m.def("build_grid", &build_grid_py, py::arg("domain"), py::arg("h"));

    py::class_<GridField>(m, "GridField")
        .def(py::init([](const std::shared_ptr<Grid>& g) { return GridField(g); }))
        .def_property_readonly(
            "grid", [](const GridField& f) { return std::const_pointer_cast<Grid>(f.grid); })
        .def_readwrite("values", &GridField::values);

    m.def("discrete_laplacian", &discrete_laplacian, py::arg("field"), py::arg("node"));
    m.def("refine_argmax", &refine_argmax, py::arg("grid"), py::arg("values"), py::arg("node"));

    // ---- fields and problems -----------------------------------------
    py::enum_<FieldKind>(m, "FieldKind")
        .value("Constant", FieldKind::Constant)
        .value("GaussianBumps", FieldKind::GaussianBumps)
        .value("Cosine", FieldKind::Cosine)
        .value("CosineTimesGaussian", FieldKind::CosineTimesGaussian);

    py::class_<GaussianBump>(m, "GaussianBump")
        .def(py::init([](double a, double b, const Point& center) {
                 return GaussianBump{a, b, center};
             }),
             py::arg("amplitude"), py::arg("width"), py::arg("center"))
        .def_readwrite("amplitude", &GaussianBump::amplitude)
        .def_readwrite("width", &GaussianBump::width)
        .def_readwrite("center", &GaussianBump::center);

    py::class_<FieldSpec>(m, "FieldSpec")
        .def_static("constant", &FieldSpec::constant, py::arg("c0"))
        .def_static("gaussian_bumps", &FieldSpec::gaussian_bumps, py::arg("c0"),
                    py::arg("bumps"))
        .def_static("cosine", &FieldSpec::cosine)
        .def_static("cosine_times_gaussian", &FieldSpec::cosine_times_gaussian, py::arg("c0"),
                    py::arg("bumps"))
        .def_readonly("kind", &FieldSpec::kind)
        .def_readonly("c0", &FieldSpec::c0)
        .def_readonly("bumps", &FieldSpec::bumps);

    m.def("evaluate", &evaluate, py::arg("spec"), py::arg("domain"), py::arg("point"));
    m.def("gradient_bound", &gradient_bound, py::arg("spec"), py::arg("domain"));
    m.def("sup_bound", &sup_bound, py::arg("spec"));
    m.def(
        "sample_field",
        [](const FieldSpec& spec, const std::shared_ptr<Grid>& grid) {
            return sample_field(spec, as_const(grid));
        },
        py::arg("spec"), py::arg("grid"));

    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("domain", &ProblemSpec::domain)
        .def_readwrite("potential", &ProblemSpec::potential)
        .def_readwrite("profile", &ProblemSpec::profile)
        .def_readwrite("exponent", &ProblemSpec::exponent)
        .def_readwrite("amplitude", &ProblemSpec::amplitude)
        .def_readwrite("potential_floor", &ProblemSpec::potential_floor);

    py::class_<ValidationCheck>(m, "ValidationCheck")
        .def_readonly("name", &ValidationCheck::name)
        .def_readonly("pass_", &ValidationCheck::pass)
        .def_readonly("value", &ValidationCheck::value);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("checks", &ValidationReport::checks)
        .def_readonly("empirical_lipschitz", &ValidationReport::empirical_lipschitz)
        .def("all_pass", &ValidationReport::all_pass);

    m.def("validate_problem", &validate_problem, py::arg("problem"), py::arg("grid"));
    m.def(
        "check_initial_condition",
        [](const ProblemSpec& problem, const Grid& grid) {
            const InitialConditionCheck c = check_initial_condition(problem, grid);
            return py::make_tuple(c.holds, c.min_value);
        },
        py::arg("problem"), py::arg("grid"));
    m.def(
        "argmax_weight",
        [](const ProblemSpec& problem, const Grid& grid) {
            const WeightMax w = argmax_weight(problem, grid);
            return py::make_tuple(w.location, w.value);
        },
        py::arg("problem"), py::arg("grid"));

    // ---- reaction oracle ----------------------------------------------
    m.def("ode_blowup_time", &ode_blowup_time, py::arg("M"), py::arg("phi_x"), py::arg("V_x"),
          py::arg("p"));
    m.def("ode_value", &ode_value, py::arg("M"), py::arg("phi_x"), py::arg("V_x"), py::arg("p"),
          py::arg("t"));
    m.def(
        "ode_min_blowup_time",
        [](const ProblemSpec& problem, const Grid& grid) {
            const OdeMinResult r = ode_min_blowup_time(problem, grid);
            return py::make_tuple(r.time, r.location, r.node);
        },
        py::arg("problem"), py::arg("grid"));

    // ---- integrator -----------------------------------------------------
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("diffusion_safety", &SolverConfig::diffusion_safety)
        .def_readwrite("growth_cap", &SolverConfig::growth_cap)
        .def_readwrite("stop_threshold", &SolverConfig::stop_threshold)
        .def_readwrite("max_steps", &SolverConfig::max_steps)
        .def_readwrite("snapshot_levels", &SolverConfig::snapshot_levels)
        .def_readwrite("reaction_only", &SolverConfig::reaction_only)
        .def_readwrite("decay_window", &SolverConfig::decay_window);

    py::enum_<StopReason>(m, "StopReason")
        .value("ThresholdReached", StopReason::ThresholdReached)
        .value("MaxSteps", StopReason::MaxSteps)
        .value("DecayDetected", StopReason::DecayDetected);

    py::class_<Snapshot>(m, "Snapshot")
        .def_readonly("time", &Snapshot::time)
        .def_readonly("field", &Snapshot::field);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("times", &TrajectoryRecord::times)
        .def_readonly("umax", &TrajectoryRecord::umax)
        .def_readonly("argmax_node", &TrajectoryRecord::argmax_node)
        .def_readonly("level_snapshots", &TrajectoryRecord::level_snapshots)
        .def_readonly("initial", &TrajectoryRecord::initial)
        .def_readonly("final_state", &TrajectoryRecord::final_state)
        .def_readonly("stop_reason", &TrajectoryRecord::stop_reason)
        .def_readonly("monotone_diagnostic", &TrajectoryRecord::monotone_diagnostic)
        .def("steps", &TrajectoryRecord::steps);

    m.def("step_dt", &step_dt, py::arg("umax"), py::arg("h"), py::arg("dimension"),
          py::arg("max_V"), py::arg("p"), py::arg("config"));
    m.def(
        "step",
        [](const GridField& state, double t, const ProblemSpec& problem,
           const SolverConfig& config) {
            StepResult r = step(state, t, problem, config);
            return py::make_tuple(r.state, r.dt);
        },
        py::arg("state"), py::arg("t"), py::arg("problem"), py::arg("config"));
    m.def(
        "integrate",
        [](const ProblemSpec& problem, const std::shared_ptr<Grid>& grid,
           const SolverConfig& config) { return integrate(problem, as_const(grid), config); },
        py::arg("problem"), py::arg("grid"), py::arg("config"));

    // ---- analysis -------------------------------------------------------
    py::class_<FitWindow>(m, "FitWindow")
        .def(py::init<>())
        .def_readwrite("level_lo", &FitWindow::level_lo)
        .def_readwrite("level_hi", &FitWindow::level_hi)
        .def_readwrite("min_points", &FitWindow::min_points);

    py::class_<TimeFit>(m, "TimeFit")
        .def_readonly("T_est", &TimeFit::T_est)
        .def_readonly("residual", &TimeFit::residual)
        .def_readonly("points", &TimeFit::points);

    m.def("estimate_blowup_time", &estimate_blowup_time, py::arg("traj"), py::arg("p"),
          py::arg("window") = FitWindow{});

    py::class_<BlowupPoint>(m, "BlowupPoint")
        .def_readonly("location", &BlowupPoint::location)
        .def_readonly("wandering", &BlowupPoint::wandering);

    m.def("estimate_blowup_point", &estimate_blowup_point, py::arg("traj"));

    py::class_<BlowupSet>(m, "BlowupSet")
        .def_readonly("nodes", &BlowupSet::nodes)
        .def_readonly("component", &BlowupSet::component);

    m.def("extract_blowup_set", &extract_blowup_set, py::arg("traj"),
          py::arg("fraction") = 0.5);

    py::class_<RateFit>(m, "RateFit")
        .def_readonly("exponent", &RateFit::exponent)
        .def_readonly("constant", &RateFit::constant)
        .def_readonly("points", &RateFit::points);

    m.def("fit_blowup_rate", &fit_blowup_rate, py::arg("traj"), py::arg("T_est"), py::arg("p"),
          py::arg("window") = FitWindow{});
    m.def("concentration_residual", &concentration_residual, py::arg("a"), py::arg("problem"),
          py::arg("A"));

    py::class_<BlowupEstimate>(m, "BlowupEstimate")
        .def_readonly("T_est", &BlowupEstimate::T_est)
        .def_readonly("blowup_point", &BlowupEstimate::blowup_point)
        .def_readonly("blowup_set", &BlowupEstimate::blowup_set)
        .def_readonly("rate_exponent", &BlowupEstimate::rate_exponent)
        .def_readonly("rate_constant", &BlowupEstimate::rate_constant)
        .def_readonly("fit_residual", &BlowupEstimate::fit_residual);

    m.def("analyze_trajectory", &analyze_trajectory, py::arg("traj"), py::arg("p"),
          py::arg("window") = FitWindow{}, py::arg("set_fraction") = 0.5);

    // ---- self-similar diagnostics ----------------------------------------
    py::class_<RescaledProfile>(m, "RescaledProfile")
        .def_readonly("center", &RescaledProfile::center)
        .def_readonly("s", &RescaledProfile::s)
        .def_readonly("time", &RescaledProfile::time)
        .def_readonly("T", &RescaledProfile::T)
        .def_readonly("y_spacing", &RescaledProfile::y_spacing)
        .def_readonly("y_nodes", &RescaledProfile::y_nodes)
        .def_readonly("w", &RescaledProfile::w)
        .def_readonly("mask", &RescaledProfile::mask);

    m.def("rescale_snapshot", &rescale_snapshot, py::arg("snapshot"), py::arg("a"), py::arg("T"),
          py::arg("p"));
    m.def("weighted_energy", &weighted_energy, py::arg("profile"), py::arg("V_a"), py::arg("p"));
    m.def("k_of_a", &k_of_a, py::arg("V_a"), py::arg("p"));
    m.def("gaussian_weight_integral", &gaussian_weight_integral, py::arg("N"));
    m.def("energy_of_constant", &energy_of_constant, py::arg("b"), py::arg("V_a"), py::arg("p"),
          py::arg("N"));
    m.def(
        "f_function",
        [](double z, double V_a, double p) {
            const FValue f = f_function(z, V_a, p);
            return py::make_tuple(f.value, f.second_derivative);
        },
        py::arg("z"), py::arg("V_a"), py::arg("p"));

    py::class_<EnergyTrace>(m, "EnergyTrace")
        .def_readonly("s_values", &EnergyTrace::s_values)
        .def_readonly("E_values", &EnergyTrace::E_values)
        .def_readonly("w_center", &EnergyTrace::w_center)
        .def_readonly("k_target", &EnergyTrace::k_target)
        .def_readonly("E_target", &EnergyTrace::E_target)
        .def_readonly("w_rel_err_final", &EnergyTrace::w_rel_err_final)
        .def_readonly("E_rel_err_final", &EnergyTrace::E_rel_err_final);

    m.def("convergence_diagnostic", &convergence_diagnostic, py::arg("snapshots"), py::arg("a"),
          py::arg("T_est"), py::arg("problem"));
    m.def(
        "energy_inequality_check",
        [](const EnergyTrace& trace, double E_w0, double T, double c_slack) {
            const SlackResult r = energy_inequality_check(trace, E_w0, T, c_slack);
            return py::make_tuple(r.slack, r.pass);
        },
        py::arg("trace"), py::arg("E_w0"), py::arg("T"), py::arg("c_slack"));
    m.def("default_energy_slack", &default_energy_slack);

    // ---- theoretical bounds ----------------------------------------------
    m.def("bessel_j0", &bessel_j0, py::arg("x"));
    m.def("bessel_j0_first_zero", &bessel_j0_first_zero);
    m.def("eigenvalue_constant", &eigenvalue_constant, py::arg("N"));
    m.def("lambda1", &lambda1, py::arg("delta"), py::arg("N"));

    py::class_<BoundsReport>(m, "BoundsReport")
        .def_readonly("A", &BoundsReport::A)
        .def_readonly("xbar", &BoundsReport::xbar)
        .def_readonly("K", &BoundsReport::K)
        .def_readonly("D", &BoundsReport::D)
        .def_readonly("epsilon", &BoundsReport::epsilon)
        .def_readonly("delta", &BoundsReport::delta)
        .def_readonly("lambda1", &BoundsReport::lambda1)
        .def_readonly("T_upper", &BoundsReport::T_upper)
        .def_readonly("rate_constant", &BoundsReport::rate_constant)
        .def_readonly("gamma", &BoundsReport::gamma)
        .def_readonly("M", &BoundsReport::M);

    m.def("compute_A", &compute_A, py::arg("problem"), py::arg("grid"));
    m.def("solve_epsilon", &solve_epsilon, py::arg("M"), py::arg("phi_xbar"), py::arg("V_xbar"),
          py::arg("p"), py::arg("K"), py::arg("D"));
    m.def("lemma21_upper_bound", &lemma21_upper_bound, py::arg("problem"), py::arg("grid"));
    m.def("lemma22_rate_constant", &lemma22_rate_constant, py::arg("problem"), py::arg("grid"));
    m.def("theorem1_window", &theorem1_window, py::arg("A"), py::arg("p"), py::arg("M"),
          py::arg("C1"), py::arg("C2"));
    m.def("gamma_exponent", &gamma_exponent, py::arg("p"));

    // ---- harness -----------------------------------------------------------
    py::class_<OutputConfig>(m, "OutputConfig")
        .def_readwrite("dir", &OutputConfig::dir)
        .def_readwrite("formats", &OutputConfig::formats);

    py::class_<AnalysisConfig>(m, "AnalysisConfig")
        .def_readwrite("fit_window", &AnalysisConfig::fit_window)
        .def_readwrite("set_fraction", &AnalysisConfig::set_fraction)
        .def_readwrite("c_slack", &AnalysisConfig::c_slack);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("problem", &ExperimentConfig::problem)
        .def_readwrite("h", &ExperimentConfig::h)
        .def_readwrite("solver", &ExperimentConfig::solver)
        .def_readwrite("m_values", &ExperimentConfig::m_values)
        .def_readwrite("analysis", &ExperimentConfig::analysis)
        .def_readwrite("output", &ExperimentConfig::output);

    m.def("load_experiment_config", &load_experiment_config, py::arg("path"));
    m.def("experiment_config_from_text", &experiment_config_from_text, py::arg("text"));

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("M", &SweepRow::M)
        .def_readonly("T_est", &SweepRow::T_est)
        .def_readonly("T_scaled", &SweepRow::T_scaled)
        .def_readonly("T_upper", &SweepRow::T_upper)
        .def_readonly("blowup_point", &SweepRow::blowup_point)
        .def_readonly("concentration_residual", &SweepRow::concentration_residual)
        .def_readonly("rate_exponent", &SweepRow::rate_exponent)
        .def_readonly("w_center_final", &SweepRow::w_center_final)
        .def_readonly("E_final", &SweepRow::E_final)
        .def_readonly("E_target", &SweepRow::E_target)
        .def_readonly("stop_reason", &SweepRow::stop_reason)
        .def_readonly("error", &SweepRow::error)
        .def_readonly("rate_constant", &SweepRow::rate_constant)
        .def_readonly("fit_residual", &SweepRow::fit_residual)
        .def_readonly("energy_slack", &SweepRow::energy_slack)
        .def_readonly("energy_pass", &SweepRow::energy_pass);

    m.def("run_single", &run_single, py::arg("config"), py::arg("M"));
    m.def("run_sweep", &run_sweep, py::arg("config"), py::arg("jobs") = 1,
          py::arg("on_row") = nullptr, py::call_guard<py::gil_scoped_release>());

    py::class_<FitReport>(m, "FitReport")
        .def_readonly("C1_fit", &FitReport::C1_fit)
        .def_readonly("C2_fit", &FitReport::C2_fit)
        .def_readonly("slope", &FitReport::slope)
        .def_readonly("slope_stderr", &FitReport::slope_stderr)
        .def_readonly("note", &FitReport::note);

    m.def("fit_convergence", &fit_convergence, py::arg("rows"), py::arg("A"), py::arg("p"));

    py::class_<ConcentrationFit>(m, "ConcentrationFit")
        .def_readonly("C_fit", &ConcentrationFit::C_fit)
        .def_readonly("slope", &ConcentrationFit::slope)
        .def_readonly("rows_used", &ConcentrationFit::rows_used)
        .def_readonly("rows_saturated", &ConcentrationFit::rows_saturated)
        .def_readonly("saturated", &ConcentrationFit::saturated);

    m.def("fit_concentration", &fit_concentration, py::arg("rows"), py::arg("gamma"));
    m.def("csv_header", &csv_header, py::arg("dimension"));
    m.def("csv_row", &csv_row, py::arg("row"), py::arg("dimension"));
    m.def("emit_outputs", &emit_outputs, py::arg("rows"), py::arg("config"));
    m.def("render_report", &render_report, py::arg("rows"), py::arg("config"));

#ifdef BLOWLAB_VERSION
    m.attr("__version__") = BLOWLAB_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
