#pragma once

#include <utility>

#include "blowlab/domain.hpp"
#include "blowlab/problem.hpp"

namespace blowlab {

// Bessel J0 by its power series (adequate to ~1e-13 for |x| <= 8).
double bessel_j0(double x);

// First positive zero of J0, by bisection on [2,3] to 1e-12.
double bessel_j0_first_zero();

// D = first Dirichlet eigenvalue of the unit-radius ball:
//   N=1 -> (pi/2)^2,  N=2 -> j_{0,1}^2.
// Errors: "unsupported-dimension".
double eigenvalue_constant(int N);

// lambda_1(delta) = D / delta^2 for the ball of radius delta.
double lambda1(double delta, int N);

// Every explicit theoretical quantity attached to one (problem, M) pair.
struct BoundsReport {
    double A = 0.0;
    Point xbar;
    double K = 0.0;       // max of the gradient bound of phi and Lip(V)
    double D = 0.0;       // eigenvalue scaling constant
    double epsilon = 0.0; // root of the matching equation below
    double delta = 0.0;   // epsilon / (2K)
    double lambda1 = 0.0; // D / delta^2
    double T_upper = 0.0;
    double rate_constant = 0.0; // (2/(m(p-1)))^{1/(p-1)}
    double gamma = 0.0;         // min((p-1)/4, 1/3)
    double M = 0.0;
};

// A = 1 / max(phi^{p-1} V) and the refined maximizer.
std::pair<double, Point> compute_A(const ProblemSpec& problem, const Grid& grid);

// Root of g(eps) = (eps/2)(M(phi(xbar)-eps))^{p-1} - D (2K/eps)^2 on
// (0, min(phi(xbar), V(xbar))/2], solved by bisection to 1e-10 relative.
// Exposed for the slope diagnostics; lemma21_upper_bound wraps it.
// Errors: "M-too-small" when no admissible root exists, "degenerate-K".
double solve_epsilon(double M, double phi_xbar, double V_xbar, double p, double K, double D);

// Upper blow-up-time bound via the eigenfunction comparison construction:
//   T_upper = 1 / (M^{p-1} (p-1) (V(xbar)-eps) (phi(xbar)-eps)^{p-1}).
// Also requires B(xbar, delta) inside the domain ("M-too-small" otherwise).
// M is taken from problem.amplitude.
BoundsReport lemma21_upper_bound(const ProblemSpec& problem, const Grid& grid);

// C_rate = (2/(m(p-1)))^{1/(p-1)} with m = min V over nodes.
double lemma22_rate_constant(const ProblemSpec& problem, const Grid& grid);

// The two-sided window for T(M) M^{p-1} with empirically fitted constants:
//   [A/(p-1) - C1 M^{-(p-1)/4},  A/(p-1) + C2 M^{-(p-1)/3}].
std::pair<double, double> theorem1_window(double A, double p, double M, double C1, double C2);

// gamma = min((p-1)/4, 1/3).
double gamma_exponent(double p);

} // namespace blowlab
