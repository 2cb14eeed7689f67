#pragma once

#include <string>
#include <vector>

#include "blowlab/domain.hpp"
#include "blowlab/problem.hpp"

namespace blowlab {

struct SolverConfig {
    double diffusion_safety = 0.4; // sigma in (0,1]
    double growth_cap = 0.05;      // eta: max relative increase of u_max per step
    double stop_threshold = 1e8;   // U_stop
    long max_steps = 10'000'000;
    std::vector<double> snapshot_levels; // u_max trigger ladder for full snapshots
    bool reaction_only = false;          // disables the Laplacian (oracle runs)
    int decay_window = 1000;             // recorded steps of monotone decrease before decay stop
};

enum class StopReason { ThresholdReached, MaxSteps, DecayDetected };

std::string to_string(StopReason r);

struct Snapshot {
    double time = 0.0;
    GridField field;
};

// Discrete orbit of one integration: u_max and its node every step, full
// snapshots at the configured u_max levels plus the initial and final states.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> umax;
    std::vector<int> argmax_node;
    std::vector<Snapshot> level_snapshots; // one per triggered level, in order
    Snapshot initial;
    Snapshot final_state;
    StopReason stop_reason = StopReason::MaxSteps;
    // Fraction of steps where the discrete u_t >= (m/2) u^p held at the
    // argmax node (m = min V over nodes).
    double monotone_diagnostic = 0.0;
    double exponent = 2.0; // p of the generating problem, for analysis

    int steps() const { return static_cast<int>(times.size()) - 1; }
};

// Time step rule: dt = min(sigma h^2 / (2N), eta / (max V * u_max^{p-1})).
// With reaction_only the diffusion bound does not apply (no Laplacian); when
// u_max = 0 the reaction cap is vacuous and the diffusion bound is used.
double step_dt(double umax, double h, int dimension, double max_V, double p,
               const SolverConfig& config);

// One forward-Euler step with an explicit dt (kernel shared by step() and the
// comparison tests):
//   new = state + dt (lap_h state + V state^p) at interior nodes, 0 on the boundary.
GridField forward_euler_step(const GridField& state, const GridField& V_field, double dt,
                             double p, bool reaction_only);

struct StepResult {
    GridField state;
    double dt = 0.0;
};

// One adaptive step of u_t = lap u + V u^p.  `t` is carried for signature
// completeness; the equation is autonomous.
StepResult step(const GridField& state, double t, const ProblemSpec& problem,
                const SolverConfig& config);

// Integrates from M phi until the blow-up threshold, the step budget, or the
// decay heuristic triggers.  Precondition: validated problem.
TrajectoryRecord integrate(const ProblemSpec& problem, const GridPtr& grid,
                           const SolverConfig& config);

} // namespace blowlab
