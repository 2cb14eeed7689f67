#include "blowlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "blowlab/errors.hpp"

namespace blowlab {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

// Ordinary least squares with mean-centering for conditioning.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        sxx += dx * dx;
        sxy += dx * (y[i] - my);
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

// Indices of recorded steps with u_max inside the fit window.
std::vector<int> window_indices(const TrajectoryRecord& traj, const FitWindow& window) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(traj.umax.size()); ++i)
        if (traj.umax[i] >= window.level_lo && traj.umax[i] <= window.level_hi)
            idx.push_back(i);
    return idx;
}

} // namespace

TimeFit estimate_blowup_time(const TrajectoryRecord& traj, double p, const FitWindow& window) {
    if (traj.stop_reason != StopReason::ThresholdReached)
        fail("no-blowup", "trajectory did not reach the blow-up threshold");

    const std::vector<int> idx = window_indices(traj, window);
    if (static_cast<int>(idx.size()) < window.min_points)
        fail("insufficient-tail", "only " + std::to_string(idx.size()) +
                                      " recorded points in the fit window");
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (!(traj.umax[idx[k]] > traj.umax[idx[k - 1]]))
            fail("nonmonotone-tail", "u_max is not increasing across the fit window");

    // u_max ~ C (T-t)^{-1/(p-1)}  =>  y = u_max^{1-p} is asymptotically linear
    // with root T.
    std::vector<double> t, y;
    t.reserve(idx.size());
    y.reserve(idx.size());
    for (int i : idx) {
        t.push_back(traj.times[i]);
        y.push_back(std::pow(traj.umax[i], 1.0 - p));
    }
    const LineFit fit = fit_line(t, y);
    if (!(fit.slope < 0.0)) fail("nonmonotone-tail", "fitted slope of u_max^{1-p} is not negative");

    TimeFit result;
    result.T_est = -fit.intercept / fit.slope;
    result.residual = fit.rms;
    result.points = static_cast<int>(idx.size());
    if (!(result.T_est > traj.times.back()))
        fail("nonmonotone-tail", "extrapolated blow-up time does not exceed the last sample");
    return result;
}

BlowupPoint estimate_blowup_point(const TrajectoryRecord& traj) {
    if (traj.stop_reason != StopReason::ThresholdReached)
        fail("no-blowup", "trajectory did not reach the blow-up threshold");

    // The argmax should be settled over the last decade of u_max growth.
    const double last = traj.umax.back();
    const int final_node = traj.argmax_node.back();
    bool wandering = false;
    for (int i = static_cast<int>(traj.umax.size()) - 1; i >= 0; --i) {
        if (traj.umax[i] < 0.1 * last) break;
        if (traj.argmax_node[i] != final_node) {
            wandering = true;
            break;
        }
    }

    const GridField& u = traj.final_state.field;
    BlowupPoint result;
    result.location = refine_argmax(*u.grid, u.values, final_node);
    result.wandering = wandering;
    return result;
}

BlowupSet extract_blowup_set(const TrajectoryRecord& traj, double fraction) {
    if (traj.stop_reason != StopReason::ThresholdReached)
        fail("no-blowup", "trajectory did not reach the blow-up threshold");
    if (!(fraction > 0.0 && fraction < 1.0))
        fail("invalid-config", "fraction must lie in (0,1)");

    const GridField& u = traj.final_state.field;
    const Grid& g = *u.grid;
    double umax = 0.0;
    for (double v : u.values) umax = std::max(umax, v);
    const double threshold = fraction * umax;

    BlowupSet set;
    std::vector<bool> in_set(u.values.size(), false);
    for (int i : g.interior)
        if (u.values[i] >= threshold) {
            set.nodes.push_back(i);
            in_set[i] = true;
        }

    // Connected component (lattice adjacency) containing the argmax.
    int peak = 0;
    for (int i = 1; i < g.size(); ++i)
        if (u.values[i] > u.values[peak]) peak = i;
    if (in_set[peak]) {
        std::vector<bool> seen(u.values.size(), false);
        std::queue<int> frontier;
        frontier.push(peak);
        seen[peak] = true;
        while (!frontier.empty()) {
            const int i = frontier.front();
            frontier.pop();
            set.component.push_back(i);
            const int ix = i % g.nx, iy = i / g.nx;
            const int neighbors[4] = {ix > 0 ? i - 1 : -1, ix < g.nx - 1 ? i + 1 : -1,
                                      iy > 0 ? i - g.nx : -1, iy < g.ny - 1 ? i + g.nx : -1};
            for (int nb : neighbors)
                if (nb >= 0 && in_set[nb] && !seen[nb]) {
                    seen[nb] = true;
                    frontier.push(nb);
                }
        }
        std::sort(set.component.begin(), set.component.end());
    }
    return set;
}

RateFit fit_blowup_rate(const TrajectoryRecord& traj, double T_est, double /*p*/,
                        const FitWindow& window) {
    const std::vector<int> idx = window_indices(traj, window);
    if (static_cast<int>(idx.size()) < window.min_points)
        fail("insufficient-tail", "only " + std::to_string(idx.size()) +
                                      " recorded points in the fit window");
    if (!(T_est > traj.times.back()))
        fail("invalid-config", "T_est must exceed every recorded time");

    std::vector<double> lx, ly;
    lx.reserve(idx.size());
    ly.reserve(idx.size());
    for (int i : idx) {
        lx.push_back(std::log(T_est - traj.times[i]));
        ly.push_back(std::log(traj.umax[i]));
    }
    const LineFit fit = fit_line(lx, ly);
    RateFit result;
    result.exponent = fit.slope;
    result.constant = std::exp(fit.intercept);
    result.points = static_cast<int>(idx.size());
    return result;
}

double concentration_residual(const Point& a, const ProblemSpec& problem, double A) {
    if (!problem.domain.contains_closure(a))
        fail("point-outside-domain", "blow-up point outside the domain closure");
    const double phi_a = evaluate(problem.profile, problem.domain, a);
    const double V_a = evaluate(problem.potential, problem.domain, a);
    return 1.0 / A - std::pow(phi_a, problem.exponent - 1.0) * V_a;
}

BlowupEstimate analyze_trajectory(const TrajectoryRecord& traj, double p,
                                  const FitWindow& window, double set_fraction) {
    BlowupEstimate estimate;
    estimate.fit_window = window;
    const TimeFit time_fit = estimate_blowup_time(traj, p, window);
    estimate.T_est = time_fit.T_est;
    estimate.fit_residual = time_fit.residual;
    estimate.blowup_point = estimate_blowup_point(traj).location;
    estimate.blowup_set = extract_blowup_set(traj, set_fraction).nodes;
    const RateFit rate = fit_blowup_rate(traj, time_fit.T_est, p, window);
    estimate.rate_exponent = rate.exponent;
    estimate.rate_constant = rate.constant;
    return estimate;
}

} // namespace blowlab
