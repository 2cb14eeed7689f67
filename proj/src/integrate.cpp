#include "blowlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowlab/errors.hpp"

namespace blowlab {

std::string to_string(StopReason r) {
    switch (r) {
    case StopReason::ThresholdReached: return "threshold-reached";
    case StopReason::MaxSteps: return "max-steps";
    case StopReason::DecayDetected: return "decay-detected";
    }
    return "unknown";
}

namespace {

inline double pow_p(double u, double p) {
    if (p == 2.0) return u * u;
    if (p == 3.0) return u * u * u;
    return std::pow(u, p);
}

double max_value(const GridField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, v);
    return m;
}

int argmax_node(const GridField& f) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(f.values.size()); ++i)
        if (f.values[i] > f.values[best]) best = i;
    return best;
}

// Allocation-free kernel: writes the stepped interior into `out` (boundary
// entries are expected to be zero already and are left untouched).
void euler_kernel(const Grid& g, const std::vector<double>& u, const std::vector<double>& V,
                  double dt, double p, bool reaction_only, std::vector<double>& out) {
    const double inv_h2 = 1.0 / (g.spacing * g.spacing);
    const int nx = g.nx;
    for (int i : g.interior) {
        double rhs = V[i] * pow_p(u[i], p);
        if (!reaction_only) {
            double lap = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
            if (g.domain.dimension == 2)
                lap += (u[i - nx] - 2.0 * u[i] + u[i + nx]) * inv_h2;
            rhs += lap;
        }
        out[i] = u[i] + dt * rhs;
    }
}

} // namespace

double step_dt(double umax, double h, int dimension, double max_V, double p,
               const SolverConfig& config) {
    const double dt_diffusion = config.diffusion_safety * h * h / (2.0 * dimension);
    if (!(umax > 0.0) || !(max_V > 0.0)) return dt_diffusion;
    const double dt_reaction = config.growth_cap / (max_V * pow_p(umax, p - 1.0));
    return config.reaction_only ? dt_reaction : std::min(dt_diffusion, dt_reaction);
}

GridField forward_euler_step(const GridField& state, const GridField& V_field, double dt,
                             double p, bool reaction_only) {
    GridField next(state.grid);
    euler_kernel(*state.grid, state.values, V_field.values, dt, p, reaction_only, next.values);
    return next;
}

StepResult step(const GridField& state, double /*t*/, const ProblemSpec& problem,
                const SolverConfig& config) {
    const GridField V = sample_field(problem.potential, state.grid);
    const double max_V = max_value(V);
    const double dt = step_dt(max_value(state), state.grid->spacing,
                              state.grid->domain.dimension, max_V, problem.exponent, config);
    GridField next = forward_euler_step(state, V, dt, problem.exponent, config.reaction_only);
    for (double v : next.values)
        if (!std::isfinite(v)) fail("nonfinite-value", "overflow before threshold check");
    return {std::move(next), dt};
}

namespace {

void check_solver_config(const SolverConfig& c, double initial_max) {
    if (!(c.diffusion_safety > 0.0 && c.diffusion_safety <= 1.0))
        fail("invalid-config", "diffusion_safety must lie in (0,1]");
    if (!(c.growth_cap > 0.0)) fail("invalid-config", "growth_cap must be positive");
    if (!(c.stop_threshold > initial_max))
        fail("invalid-config", "stop_threshold must exceed the initial max");
    if (c.max_steps <= 0) fail("invalid-config", "max_steps must be positive");
}

} // namespace

TrajectoryRecord integrate(const ProblemSpec& problem, const GridPtr& grid,
                           const SolverConfig& config) {
    const double p = problem.exponent;
    const GridField V = sample_field(problem.potential, grid);
    const GridField phi = sample_field(problem.profile, grid);

    double max_V = 0.0, min_V = std::numeric_limits<double>::infinity();
    for (double v : V.values) {
        max_V = std::max(max_V, v);
        min_V = std::min(min_V, v);
    }

    GridField u(grid);
    for (int i : grid->interior) u.values[i] = problem.amplitude * phi.values[i];
    // Dirichlet datum: boundary values stay zero regardless of phi.
    check_solver_config(config, max_value(u));

    std::vector<double> levels = config.snapshot_levels;
    std::sort(levels.begin(), levels.end());
    std::size_t next_level = 0;

    TrajectoryRecord traj;
    traj.exponent = p;
    traj.initial = {0.0, u};

    double t = 0.0;
    double umax = max_value(u);
    const double umax0 = umax;
    int peak = argmax_node(u);
    traj.times.push_back(t);
    traj.umax.push_back(umax);
    traj.argmax_node.push_back(peak);
    // Levels the datum has already crossed are sampled by the initial state
    // (once, however many levels it covers).
    if (next_level < levels.size() && umax >= levels[next_level])
        traj.level_snapshots.push_back({0.0, u});
    while (next_level < levels.size() && umax >= levels[next_level]) ++next_level;

    long monotone_hits = 0;
    long steps = 0;
    int nonincreasing_run = 0;
    GridField next(grid);

    traj.stop_reason = StopReason::MaxSteps;
    while (steps < config.max_steps) {
        const double dt =
            step_dt(umax, grid->spacing, grid->domain.dimension, max_V, p, config);
        euler_kernel(*grid, u.values, V.values, dt, p, config.reaction_only, next.values);

        double next_umax = 0.0, next_umin = 0.0;
        for (int i : grid->interior) {
            next_umax = std::max(next_umax, next.values[i]);
            next_umin = std::min(next_umin, next.values[i]);
        }
        if (!std::isfinite(next_umax)) {
            // Overflow past the threshold in one step: keep the previous state.
            traj.stop_reason = StopReason::ThresholdReached;
            break;
        }
        if (next_umin < 0.0)
            fail("negativity", "positivity lost; the dt rule was violated");

        // Lemma-2.2-style diagnostic at the current peak: u_t >= (m/2) u^p.
        const double lhs = (next.values[peak] - u.values[peak]) / dt;
        const double rhs = 0.5 * min_V * pow_p(u.values[peak], p);
        if (lhs >= rhs - 1e-10 * std::max(1.0, std::abs(rhs))) ++monotone_hits;
        ++steps;

        std::swap(u.values, next.values);
        t += dt;
        nonincreasing_run = next_umax <= umax ? nonincreasing_run + 1 : 0;
        umax = next_umax;
        peak = argmax_node(u);

        traj.times.push_back(t);
        traj.umax.push_back(umax);
        traj.argmax_node.push_back(peak);

        while (next_level < levels.size() && umax >= levels[next_level]) {
            traj.level_snapshots.push_back({t, u});
            ++next_level;
        }

        if (umax >= config.stop_threshold) {
            traj.stop_reason = StopReason::ThresholdReached;
            break;
        }
        if (nonincreasing_run >= config.decay_window && umax <= umax0) {
            traj.stop_reason = StopReason::DecayDetected;
            break;
        }
    }

    traj.final_state = {t, u};
    traj.monotone_diagnostic =
        steps > 0 ? static_cast<double>(monotone_hits) / static_cast<double>(steps) : 1.0;
    return traj;
}

} // namespace blowlab
