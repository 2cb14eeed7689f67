#include "blowlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blowlab/errors.hpp"

namespace blowlab {

double bessel_j0(double x) {
    // Power series J0(x) = sum (-1)^k (x^2/4)^k / (k!)^2; used only on [0, 8]
    // where cancellation stays mild.
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 80; ++k) {
        term *= -q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double bessel_j0_first_zero() {
    // J0(2) > 0 > J0(3); bisect.
    double lo = 2.0, hi = 3.0;
    for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j0(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double eigenvalue_constant(int N) {
    if (N == 1) {
        const double half_pi = 0.5 * std::numbers::pi;
        return half_pi * half_pi; // eigenfunction cos(pi x / 2) on (-1, 1)
    }
    if (N == 2) {
        const double j01 = bessel_j0_first_zero();
        return j01 * j01;
    }
    fail("unsupported-dimension", "eigenvalue constant defined for N in {1, 2}");
}

double lambda1(double delta, int N) {
    if (!(delta > 0.0)) fail("nonpositive-input", "radius must be positive");
    return eigenvalue_constant(N) / (delta * delta);
}

std::pair<double, Point> compute_A(const ProblemSpec& problem, const Grid& grid) {
    const WeightMax w = argmax_weight(problem, grid);
    return {1.0 / w.value, w.location};
}

double solve_epsilon(double M, double phi_xbar, double V_xbar, double p, double K, double D) {
    if (!(K > 0.0))
        fail("degenerate-K", "phi and V are both constant; the comparison ball is unbounded");
    if (!(M > 0.0)) fail("M-too-small", "amplitude must be positive");

    // g(eps) = (eps/2)(M(phi-eps))^{p-1} - D (2K/eps)^2, increasing from -inf
    // near 0.  The admissible cap keeps both (phi - eps) and (V - eps) away
    // from zero.
    const double cap = 0.5 * std::min(phi_xbar, V_xbar);
    auto g = [&](double eps) {
        return 0.5 * eps * std::pow(M * (phi_xbar - eps), p - 1.0) -
               D * (2.0 * K / eps) * (2.0 * K / eps);
    };
    if (!(g(cap) >= 0.0))
        fail("M-too-small", "no admissible root of the eigenvalue matching equation");

    double lo = 0.0, hi = cap;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

BoundsReport lemma21_upper_bound(const ProblemSpec& problem, const Grid& grid) {
    const double p = problem.exponent;
    const double M = problem.amplitude;

    BoundsReport report;
    report.M = M;
    const auto [A, xbar] = compute_A(problem, grid);
    report.A = A;
    report.xbar = xbar;
    report.K = std::max(gradient_bound(problem.profile, problem.domain),
                        gradient_bound(problem.potential, problem.domain));
    report.D = eigenvalue_constant(problem.domain.dimension);
    report.rate_constant = lemma22_rate_constant(problem, grid);
    report.gamma = gamma_exponent(p);

    const double phi_xbar = evaluate(problem.profile, problem.domain, xbar);
    const double V_xbar = evaluate(problem.potential, problem.domain, xbar);
    report.epsilon = solve_epsilon(M, phi_xbar, V_xbar, p, report.K, report.D);
    report.delta = report.epsilon / (2.0 * report.K);
    report.lambda1 = report.D / (report.delta * report.delta);

    // The comparison ball must fit inside the domain.
    if (!(problem.domain.boundary_distance(xbar) > report.delta))
        fail("M-too-small", "comparison ball B(xbar, delta) protrudes outside the domain");

    report.T_upper = 1.0 / (std::pow(M, p - 1.0) * (p - 1.0) * (V_xbar - report.epsilon) *
                            std::pow(phi_xbar - report.epsilon, p - 1.0));
    return report;
}

double lemma22_rate_constant(const ProblemSpec& problem, const Grid& grid) {
    auto grid_ptr = std::make_shared<Grid>(grid);
    const GridField V = sample_field(problem.potential, grid_ptr);
    double m = V.values.front();
    for (double v : V.values) m = std::min(m, v);
    if (!(m > 0.0)) fail("nonpositive-input", "min V must be positive");
    const double p = problem.exponent;
    return std::pow(2.0 / (m * (p - 1.0)), 1.0 / (p - 1.0));
}

std::pair<double, double> theorem1_window(double A, double p, double M, double C1, double C2) {
    if (!(C1 >= 0.0) || !(C2 >= 0.0)) fail("nonpositive-input", "window constants must be >= 0");
    const double center = A / (p - 1.0);
    const double lower = center - C1 * std::pow(M, -(p - 1.0) / 4.0);
    const double upper = center + C2 * std::pow(M, -(p - 1.0) / 3.0);
    return {lower, upper};
}

double gamma_exponent(double p) {
    if (!(p > 1.0)) fail("nonpositive-input", "gamma defined for p > 1");
    return std::min((p - 1.0) / 4.0, 1.0 / 3.0);
}

} // namespace blowlab
