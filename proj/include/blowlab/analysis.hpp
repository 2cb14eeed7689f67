#pragma once

#include <optional>
#include <vector>

#include "blowlab/integrate.hpp"
#include "blowlab/problem.hpp"

namespace blowlab {

// Tail fit window, stated in u_max levels.  The early transient is
// diffusion-dominated and must stay out of the fit.
struct FitWindow {
    double level_lo = 1e4;
    double level_hi = 1e8;
    int min_points = 50;
};

struct TimeFit {
    double T_est = 0.0;
    double residual = 0.0; // RMS of the linear fit in the y = u_max^{1-p} variable
    int points = 0;
};

// Fits a line to y(t) = u_max^{1-p} over the tail window and returns its root.
// Errors: "insufficient-tail", "nonmonotone-tail", "no-blowup".
TimeFit estimate_blowup_time(const TrajectoryRecord& traj, double p, const FitWindow& window = {});

struct BlowupPoint {
    Point location;        // quadratic-refined argmax of the final snapshot
    bool wandering = false; // argmax node moved within the last decade of growth
};

// Errors: "no-blowup" when the trajectory did not reach the threshold.
BlowupPoint estimate_blowup_point(const TrajectoryRecord& traj);

struct BlowupSet {
    std::vector<int> nodes;     // final-snapshot values >= fraction * u_max
    std::vector<int> component; // connected component containing the argmax
};

BlowupSet extract_blowup_set(const TrajectoryRecord& traj, double fraction = 0.5);

struct RateFit {
    double exponent = 0.0; // slope of log u_max vs log(T_est - t); negative
    double constant = 0.0; // exp(intercept)
    int points = 0;
};

// Errors: "insufficient-tail".
RateFit fit_blowup_rate(const TrajectoryRecord& traj, double T_est, double p,
                        const FitWindow& window = {});

// r = 1/A - phi^{p-1}(a) V(a), evaluated in closed form at the refined point.
// Errors: "point-outside-domain".
double concentration_residual(const Point& a, const ProblemSpec& problem, double A);

// Aggregate of the per-trajectory estimates.
struct BlowupEstimate {
    double T_est = 0.0;
    FitWindow fit_window;
    Point blowup_point;
    std::vector<int> blowup_set;
    double rate_exponent = 0.0;
    double rate_constant = 0.0;
    double fit_residual = 0.0;
};

BlowupEstimate analyze_trajectory(const TrajectoryRecord& traj, double p,
                                  const FitWindow& window = {}, double set_fraction = 0.5);

} // namespace blowlab
