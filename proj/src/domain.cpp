#include "blowlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blowlab/errors.hpp"

namespace blowlab {

DomainSpec DomainSpec::interval(double half_length) {
    if (half_length <= 0.0) fail("invalid-domain", "interval half-length must be positive");
    DomainSpec d;
    d.dimension = 1;
    d.shape = Shape::Interval;
    d.half_length_x = half_length;
    d.half_length_y = half_length;
    return d;
}

DomainSpec DomainSpec::rectangle(double half_length_x, double half_length_y) {
    if (half_length_x <= 0.0 || half_length_y <= 0.0)
        fail("invalid-domain", "rectangle side lengths must be positive");
    DomainSpec d;
    d.dimension = 2;
    d.shape = Shape::Rectangle;
    d.half_length_x = half_length_x;
    d.half_length_y = half_length_y;
    return d;
}

DomainSpec DomainSpec::disc(double radius) {
    if (radius <= 0.0) fail("invalid-domain", "disc radius must be positive");
    DomainSpec d;
    d.dimension = 2;
    d.shape = Shape::Disc;
    d.half_length_x = radius;
    d.half_length_y = radius;
    return d;
}

double DomainSpec::half_length(int axis) const {
    return axis == 0 ? half_length_x : half_length_y;
}

bool DomainSpec::contains_interior(const Point& p) const {
    switch (shape) {
    case Shape::Interval:
        return std::abs(p.x) < half_length_x;
    case Shape::Rectangle:
        return std::abs(p.x) < half_length_x && std::abs(p.y) < half_length_y;
    case Shape::Disc:
        return p.x * p.x + p.y * p.y < half_length_x * half_length_x;
    }
    return false;
}

bool DomainSpec::contains_closure(const Point& p, double tol) const {
    switch (shape) {
    case Shape::Interval:
        return std::abs(p.x) <= half_length_x + tol;
    case Shape::Rectangle:
        return std::abs(p.x) <= half_length_x + tol && std::abs(p.y) <= half_length_y + tol;
    case Shape::Disc:
        return std::hypot(p.x, p.y) <= half_length_x + tol;
    }
    return false;
}

double DomainSpec::boundary_distance(const Point& p) const {
    switch (shape) {
    case Shape::Interval:
        return half_length_x - std::abs(p.x);
    case Shape::Rectangle:
        return std::min(half_length_x - std::abs(p.x), half_length_y - std::abs(p.y));
    case Shape::Disc:
        return half_length_x - std::hypot(p.x, p.y);
    }
    return 0.0;
}

namespace {

// Number of cells along one axis; h must divide 2*ell within rounding tolerance.
int axis_cells(double ell, double h) {
    const double cells = 2.0 * ell / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
        fail("incommensurate-spacing", "h does not divide the domain extent");
    return static_cast<int>(rounded);
}

} // namespace

GridPtr build_grid(const DomainSpec& domain, double h) {
    if (!(h > 0.0)) fail("non-positive-h", "grid spacing must be positive");

    auto grid = std::make_shared<Grid>();
    grid->domain = domain;
    grid->spacing = h;

    const int cells_x = axis_cells(domain.half_length_x, h);
    grid->nx = cells_x + 1;
    if (domain.dimension == 2) {
        const int cells_y = axis_cells(domain.half_length_y, h);
        grid->ny = cells_y + 1;
    } else {
        grid->ny = 1;
    }

    const int n = grid->nx * grid->ny;
    grid->nodes.resize(n);
    grid->boundary.assign(n, false);

    for (int iy = 0; iy < grid->ny; ++iy) {
        for (int ix = 0; ix < grid->nx; ++ix) {
            const int idx = grid->index(ix, iy);
            Point p;
            p.x = -domain.half_length_x + ix * h;
            p.y = domain.dimension == 2 ? -domain.half_length_y + iy * h : 0.0;
            grid->nodes[idx] = p;

            bool bdry = false;
            switch (domain.shape) {
            case Shape::Interval:
                bdry = ix == 0 || ix == grid->nx - 1;
                break;
            case Shape::Rectangle:
                bdry = ix == 0 || ix == grid->nx - 1 || iy == 0 || iy == grid->ny - 1;
                break;
            case Shape::Disc:
                // Lattice nodes on or outside the circle are pinned to zero.
                bdry = p.x * p.x + p.y * p.y >=
                       domain.half_length_x * domain.half_length_x * (1.0 - 1e-12);
                break;
            }
            grid->boundary[idx] = bdry;
            if (!bdry) grid->interior.push_back(idx);
        }
    }

    // At least 8 interior nodes per axis (central row/column for the disc).
    const int interior_x = grid->nx - 2;
    const int interior_y = domain.dimension == 2 ? grid->ny - 2 : interior_x;
    if (interior_x < 8 || interior_y < 8)
        fail("too-coarse",
             "need at least 8 interior nodes per axis, got " + std::to_string(interior_x));

    return grid;
}

double discrete_laplacian(const GridField& f, int node) {
    const Grid& g = *f.grid;
    const double h2 = g.spacing * g.spacing;
    const double c = f.values[node];
    double lap = (f.values[node - 1] - 2.0 * c + f.values[node + 1]) / h2;
    if (g.domain.dimension == 2)
        lap += (f.values[node - g.nx] - 2.0 * c + f.values[node + g.nx]) / h2;
    return lap;
}

namespace {

double parabola_vertex_offset(double vm, double v0, double vp, double h) {
    const double curvature = vp - 2.0 * v0 + vm;
    if (!(curvature < 0.0)) return 0.0; // flat or convex: keep the node
    double offset = 0.5 * h * (vm - vp) / curvature;
    return std::clamp(offset, -0.5 * h, 0.5 * h);
}

} // namespace

Point refine_argmax(const Grid& grid, const std::vector<double>& values, int node) {
    const int ix = node % grid.nx;
    const int iy = node / grid.nx;
    Point p = grid.nodes[node];
    if (ix > 0 && ix < grid.nx - 1)
        p.x += parabola_vertex_offset(values[node - 1], values[node], values[node + 1],
                                      grid.spacing);
    if (grid.domain.dimension == 2 && iy > 0 && iy < grid.ny - 1)
        p.y += parabola_vertex_offset(values[node - grid.nx], values[node],
                                      values[node + grid.nx], grid.spacing);
    return p;
}

} // namespace blowlab
