#include "blowlab/field.hpp"

#include <cmath>
#include <numbers>

#include "blowlab/errors.hpp"

namespace blowlab {

namespace {

void check_bumps(const std::vector<GaussianBump>& bumps) {
    for (const auto& b : bumps)
        if (!(b.width > 0.0)) fail("invalid-field", "gaussian bump width must be positive");
}

double bump_sum(const FieldSpec& spec, const Point& p, int dimension) {
    double v = spec.c0;
    for (const auto& b : spec.bumps) {
        const double dx = p.x - b.center.x;
        const double dy = dimension == 2 ? p.y - b.center.y : 0.0;
        v += b.amplitude * std::exp(-b.width * (dx * dx + dy * dy));
    }
    return v;
}

double cosine_profile(const DomainSpec& domain, const Point& p) {
    const double pi = std::numbers::pi;
    double v = std::cos(pi * p.x / (2.0 * domain.half_length(0)));
    if (domain.dimension == 2) v *= std::cos(pi * p.y / (2.0 * domain.half_length(1)));
    return v;
}

// |a| sqrt(2b/e): the slope bound of a single gaussian bump.
double bump_slope_bound(const GaussianBump& b) {
    return std::abs(b.amplitude) * std::sqrt(2.0 * b.width / std::numbers::e);
}

double bump_sum_slope_bound(const std::vector<GaussianBump>& bumps) {
    double s = 0.0;
    for (const auto& b : bumps) s += bump_slope_bound(b);
    return s;
}

double bump_sum_sup_bound(const FieldSpec& spec) {
    double s = std::abs(spec.c0);
    for (const auto& b : spec.bumps) s += std::abs(b.amplitude);
    return s;
}

double cosine_slope_bound(const DomainSpec& domain) {
    const double pi = std::numbers::pi;
    const double gx = pi / (2.0 * domain.half_length(0));
    if (domain.dimension == 1) return gx;
    const double gy = pi / (2.0 * domain.half_length(1));
    return std::hypot(gx, gy);
}

} // namespace

FieldSpec FieldSpec::constant(double c0) {
    FieldSpec s;
    s.kind = FieldKind::Constant;
    s.c0 = c0;
    return s;
}

FieldSpec FieldSpec::gaussian_bumps(double c0, std::vector<GaussianBump> bumps) {
    check_bumps(bumps);
    FieldSpec s;
    s.kind = FieldKind::GaussianBumps;
    s.c0 = c0;
    s.bumps = std::move(bumps);
    return s;
}

FieldSpec FieldSpec::cosine() {
    FieldSpec s;
    s.kind = FieldKind::Cosine;
    s.c0 = 1.0;
    return s;
}

FieldSpec FieldSpec::cosine_times_gaussian(double c0, std::vector<GaussianBump> bumps) {
    check_bumps(bumps);
    FieldSpec s;
    s.kind = FieldKind::CosineTimesGaussian;
    s.c0 = c0;
    s.bumps = std::move(bumps);
    return s;
}

double evaluate(const FieldSpec& spec, const DomainSpec& domain, const Point& p) {
    switch (spec.kind) {
    case FieldKind::Constant:
        return spec.c0;
    case FieldKind::GaussianBumps:
        return bump_sum(spec, p, domain.dimension);
    case FieldKind::Cosine:
        return cosine_profile(domain, p);
    case FieldKind::CosineTimesGaussian:
        return cosine_profile(domain, p) * bump_sum(spec, p, domain.dimension);
    }
    fail("invalid-field", "unknown field kind");
}

double gradient_bound(const FieldSpec& spec, const DomainSpec& domain) {
    switch (spec.kind) {
    case FieldKind::Constant:
        return 0.0;
    case FieldKind::GaussianBumps:
        return bump_sum_slope_bound(spec.bumps);
    case FieldKind::Cosine:
        return cosine_slope_bound(domain);
    case FieldKind::CosineTimesGaussian:
        // |grad(fg)| <= sup|f| Lip(g) + sup|g| Lip(f), |cosine| <= 1.
        return bump_sum_slope_bound(spec.bumps) +
               bump_sum_sup_bound(spec) * cosine_slope_bound(domain);
    }
    fail("invalid-field", "unknown field kind");
}

double sup_bound(const FieldSpec& spec) {
    switch (spec.kind) {
    case FieldKind::Constant:
        return std::abs(spec.c0);
    case FieldKind::Cosine:
        return 1.0;
    case FieldKind::GaussianBumps:
    case FieldKind::CosineTimesGaussian:
        return bump_sum_sup_bound(spec);
    }
    fail("invalid-field", "unknown field kind");
}

GridField sample_field(const FieldSpec& spec, const GridPtr& grid) {
    if (grid->domain.dimension == 1)
        for (const auto& b : spec.bumps)
            if (b.center.y != 0.0)
                fail("dimension-mismatch", "2D bump center on a 1D domain");

    GridField f(grid);
    for (int i = 0; i < grid->size(); ++i)
        f.values[i] = evaluate(spec, grid->domain, grid->nodes[i]);
    return f;
}

} // namespace blowlab
