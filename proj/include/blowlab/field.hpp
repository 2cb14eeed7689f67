#pragma once

#include <vector>

#include "blowlab/domain.hpp"

namespace blowlab {

// Closed-form scalar field families.  Restricting to closed forms keeps exact
// point evaluation, analytic Lipschitz bounds, and dense-scan maxima oracles
// available everywhere.
enum class FieldKind {
    Constant,            // c0
    GaussianBumps,       // c0 + sum_i a_i * exp(-b_i |x - x_i|^2)
    Cosine,              // prod_j cos(pi x_j / (2 l_j))
    CosineTimesGaussian, // cosine profile times a gaussian bump sum
};

struct GaussianBump {
    double amplitude = 0.0; // a_i
    double width = 1.0;     // b_i > 0
    Point center;
};

struct FieldSpec {
    FieldKind kind = FieldKind::Constant;
    double c0 = 0.0;
    std::vector<GaussianBump> bumps;

    static FieldSpec constant(double c0);
    static FieldSpec gaussian_bumps(double c0, std::vector<GaussianBump> bumps);
    static FieldSpec cosine();
    static FieldSpec cosine_times_gaussian(double c0, std::vector<GaussianBump> bumps);
};

// Exact evaluation at a point.  The domain supplies the cosine half-lengths.
double evaluate(const FieldSpec& spec, const DomainSpec& domain, const Point& p);

// Closed-form bound on |grad f| over the domain closure, computed from the
// family parameters (never sampled).  Gaussian bump slope bound: |a| sqrt(2b/e).
double gradient_bound(const FieldSpec& spec, const DomainSpec& domain);

// Closed-form bound on |f| over the domain closure.
double sup_bound(const FieldSpec& spec);

// Pointwise evaluation at every grid node.
// Errors: "dimension-mismatch" when a 2D bump center is given on a 1D domain.
GridField sample_field(const FieldSpec& spec, const GridPtr& grid);

} // namespace blowlab
