#pragma once

#include "blowlab/domain.hpp"
#include "blowlab/problem.hpp"

namespace blowlab {

// Closed-form solution of the diffusion-free equation u_t = V(x) u^p with
// u(0) = M phi(x), where x is a parameter:
//   u(t) = u0 (1 - t/T)^{-1/(p-1)},   T = u0^{1-p} / ((p-1) V).
struct OdeSolution {
    double base = 0.0;        // u0 = M phi(x) > 0
    double rate = 0.0;        // V(x) > 0
    double exponent = 2.0;    // p > 1
    double blowup_time = 0.0; // T_x

    OdeSolution(double u0, double V_x, double p);
    double value(double t) const; // finite iff t < blowup_time
};

// T = M^{1-p} / ((p-1) V phi^{p-1}).  Errors: "nonpositive-input".
double ode_blowup_time(double M, double phi_x, double V_x, double p);

// Exact solution value at time t.  Errors: "time-at-or-past-blowup".
double ode_value(double M, double phi_x, double V_x, double p, double t);

struct OdeMinResult {
    double time = 0.0;
    Point location;
    int node = -1;
};

// Minimum of the nodewise ODE blow-up time and its argmin node; equals
// A / ((p-1) M^{p-1}) at the argmax of phi^{p-1} V.
OdeMinResult ode_min_blowup_time(const ProblemSpec& problem, const Grid& grid);

} // namespace blowlab
