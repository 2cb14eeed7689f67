#include "blowlab/reaction.hpp"

#include <cmath>
#include <limits>

#include "blowlab/errors.hpp"

namespace blowlab {

OdeSolution::OdeSolution(double u0, double V_x, double p)
    : base(u0), rate(V_x), exponent(p) {
    if (!(u0 > 0.0) || !(V_x > 0.0) || !(p > 1.0))
        fail("nonpositive-input", "OdeSolution needs u0 > 0, V > 0, p > 1");
    blowup_time = std::pow(u0, 1.0 - p) / ((p - 1.0) * V_x);
}

double OdeSolution::value(double t) const {
    if (t < 0.0 || t >= blowup_time)
        fail("time-at-or-past-blowup", "ode_value requires 0 <= t < T_x");
    return base * std::pow(1.0 - t / blowup_time, -1.0 / (exponent - 1.0));
}

double ode_blowup_time(double M, double phi_x, double V_x, double p) {
    if (!(M > 0.0) || !(phi_x > 0.0) || !(V_x > 0.0) || !(p > 1.0))
        fail("nonpositive-input", "ode_blowup_time needs M, phi, V > 0 and p > 1");
    return std::pow(M, 1.0 - p) / ((p - 1.0) * V_x * std::pow(phi_x, p - 1.0));
}

double ode_value(double M, double phi_x, double V_x, double p, double t) {
    return OdeSolution(M * phi_x, V_x, p).value(t);
}

OdeMinResult ode_min_blowup_time(const ProblemSpec& problem, const Grid& grid) {
    auto grid_ptr = std::make_shared<Grid>(grid);
    const GridField V = sample_field(problem.potential, grid_ptr);
    const GridField phi = sample_field(problem.profile, grid_ptr);

    OdeMinResult result;
    result.time = std::numeric_limits<double>::infinity();
    for (int i : grid.interior) {
        if (!(phi.values[i] > 0.0) || !(V.values[i] > 0.0)) continue;
        const double T =
            ode_blowup_time(problem.amplitude, phi.values[i], V.values[i], problem.exponent);
        if (T < result.time) {
            result.time = T;
            result.node = i;
        }
    }
    if (result.node < 0) fail("nonpositive-input", "no node with phi > 0 and V > 0");
    result.location = grid.nodes[result.node];
    return result;
}

} // namespace blowlab
