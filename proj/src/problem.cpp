#include "blowlab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "blowlab/errors.hpp"

namespace blowlab {

bool ValidationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

constexpr double kBoundaryZeroTol = 1e-12;

// Max difference quotient over axis-adjacent node pairs.
double empirical_lipschitz(const GridField& f) {
    const Grid& g = *f.grid;
    double L = 0.0;
    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const int i = g.index(ix, iy);
            if (ix + 1 < g.nx)
                L = std::max(L, std::abs(f.values[i + 1] - f.values[i]) / g.spacing);
            if (iy + 1 < g.ny)
                L = std::max(L, std::abs(f.values[i + g.nx] - f.values[i]) / g.spacing);
        }
    }
    return L;
}

} // namespace

ValidationReport validate_problem(const ProblemSpec& problem, const Grid& grid) {
    ValidationReport report;
    auto grid_ptr = std::make_shared<Grid>(grid);
    const GridField V = sample_field(problem.potential, grid_ptr);
    const GridField phi = sample_field(problem.profile, grid_ptr);

    report.checks.push_back({"exponent-supercritical-free", problem.exponent > 1.0,
                             problem.exponent});

    double min_V = std::numeric_limits<double>::infinity();
    for (double v : V.values) min_V = std::min(min_V, v);
    report.checks.push_back(
        {"potential-above-floor",
         problem.potential_floor > 0.0 && min_V >= problem.potential_floor, min_V});

    double min_phi_interior = std::numeric_limits<double>::infinity();
    for (int i : grid.interior) min_phi_interior = std::min(min_phi_interior, phi.values[i]);
    report.checks.push_back({"profile-positive-interior", min_phi_interior > 0.0,
                             min_phi_interior});

    double max_phi_boundary = 0.0;
    for (int i = 0; i < grid.size(); ++i)
        if (grid.boundary[i]) max_phi_boundary = std::max(max_phi_boundary, std::abs(phi.values[i]));
    report.checks.push_back(
        {"profile-zero-boundary", max_phi_boundary <= kBoundaryZeroTol, max_phi_boundary});

    report.empirical_lipschitz = empirical_lipschitz(V);
    return report;
}

InitialConditionCheck check_initial_condition(const ProblemSpec& problem, const Grid& grid) {
    const double M = problem.amplitude;
    const double p = problem.exponent;
    auto grid_ptr = std::make_shared<Grid>(grid);
    const GridField V = sample_field(problem.potential, grid_ptr);
    const GridField phi = sample_field(problem.profile, grid_ptr);

    double m = std::numeric_limits<double>::infinity();
    for (double v : V.values) m = std::min(m, v);

    double min_value = std::numeric_limits<double>::infinity();
    for (int i : grid.interior) {
        const double lap = discrete_laplacian(phi, i);
        const double value =
            M * lap + 0.5 * m * std::pow(M, p) * std::pow(phi.values[i], p);
        min_value = std::min(min_value, value);
    }
    if (grid.interior.empty()) min_value = 0.0;
    if (M == 0.0) min_value = 0.0; // expression is identically zero

    const double tol_slack = 1e-8 * std::pow(M, p);
    return {min_value >= -tol_slack, min_value};
}

WeightMax argmax_weight(const ProblemSpec& problem, const Grid& grid) {
    const double p = problem.exponent;
    auto grid_ptr = std::make_shared<Grid>(grid);
    const GridField V = sample_field(problem.potential, grid_ptr);
    const GridField phi = sample_field(problem.profile, grid_ptr);

    std::vector<double> weight(grid.size(), 0.0);
    for (int i = 0; i < grid.size(); ++i)
        weight[i] = std::pow(phi.values[i], p - 1.0) * V.values[i];

    int best = 0;
    for (int i = 1; i < grid.size(); ++i)
        if (weight[i] > weight[best]) best = i;

    const Point refined = refine_argmax(grid, weight, best);
    const double phi_r = evaluate(problem.profile, problem.domain, refined);
    const double V_r = evaluate(problem.potential, problem.domain, refined);
    const double value = std::pow(phi_r, p - 1.0) * V_r;

    if (!(value > 0.0))
        fail("degenerate-weight", "max of phi^{p-1} V is not positive; validate the problem");
    return {refined, value};
}

} // namespace blowlab
