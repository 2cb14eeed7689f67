#pragma once

#include <string>
#include <vector>

#include "blowlab/domain.hpp"
#include "blowlab/field.hpp"

namespace blowlab {

// A full instance of  u_t = Laplace(u) + V(x) u^p  on Omega with u = 0 on the
// boundary and u(x,0) = M phi(x).
struct ProblemSpec {
    DomainSpec domain;
    FieldSpec potential;          // V, bounded below by potential_floor
    FieldSpec profile;            // phi, positive inside, zero on the boundary
    double exponent = 2.0;        // p > 1
    double amplitude = 0.0;       // M >= 0
    double potential_floor = 1.0; // declared c > 0 with V >= c, cross-checked on the grid
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double value = 0.0; // the measured quantity behind the verdict
};

// Per-condition report; failures are reported, never thrown.
struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double empirical_lipschitz = 0.0; // max adjacent difference quotient of V

    bool all_pass() const;
    const ValidationCheck* find(const std::string& name) const;
};

ValidationReport validate_problem(const ProblemSpec& problem, const Grid& grid);

struct InitialConditionCheck {
    bool holds = false;
    double min_value = 0.0; // min over interior nodes of M lap(phi) + (m/2) M^p phi^p
};

// Discrete check of the initial-datum condition
//   M lap(phi) + (min V / 2) M^p phi^p >= 0,
// with slack 1e-8 * M^p absorbing the discretization of the Laplacian.
InitialConditionCheck check_initial_condition(const ProblemSpec& problem, const Grid& grid);

struct WeightMax {
    Point location; // xbar, quadratically refined
    double value;   // Wbar = phi^{p-1}(xbar) V(xbar), evaluated in closed form
};

// Locates the maximizer of w(x) = phi(x)^{p-1} V(x): discrete argmax over the
// grid followed by one quadratic refinement per axis.
// Errors: "degenerate-weight" when the refined maximum is not positive.
WeightMax argmax_weight(const ProblemSpec& problem, const Grid& grid);

} // namespace blowlab
