#pragma once

#include <memory>
#include <vector>

namespace blowlab {

// Point in R^1 or R^2; y is ignored for one-dimensional domains.
struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Shape { Interval, Rectangle, Disc };

// Convex domain centered at the origin: an interval (-l, l), an axis-aligned
// rectangle (-lx, lx) x (-ly, ly), or a disc of radius l.  Only convex shapes
// are representable.
struct DomainSpec {
    int dimension = 1;
    Shape shape = Shape::Interval;
    double half_length_x = 1.0; // interval half-length, rectangle x half-length, disc radius
    double half_length_y = 1.0; // rectangle only

    static DomainSpec interval(double half_length);
    static DomainSpec rectangle(double half_length_x, double half_length_y);
    static DomainSpec disc(double radius);

    double half_length(int axis) const;

    // Strict interior test.
    bool contains_interior(const Point& p) const;
    // Closure test (used to validate analysis points).
    bool contains_closure(const Point& p, double tol = 1e-12) const;
    // Distance from p to the boundary (negative outside).
    double boundary_distance(const Point& p) const;
};

// Uniform lattice over the domain's bounding box with a boundary mask.
// Node ordering is deterministic: index = iy * nx + ix (y-major).
// For the disc, lattice nodes on or outside the circle are boundary nodes
// with values pinned to zero.
struct Grid {
    DomainSpec domain;
    double spacing = 0.0;
    int nx = 0;
    int ny = 1;
    std::vector<Point> nodes;
    std::vector<bool> boundary;
    std::vector<int> interior; // indices of interior nodes, ascending

    int index(int ix, int iy) const { return iy * nx + ix; }
    int size() const { return static_cast<int>(nodes.size()); }
};

using GridPtr = std::shared_ptr<const Grid>;

// Builds the lattice.  h must divide the domain extent within rounding
// tolerance and leave at least 8 interior nodes per axis.
// Errors: "non-positive-h", "incommensurate-spacing", "too-coarse".
GridPtr build_grid(const DomainSpec& domain, double h);

// Scalar values attached to the nodes of a grid.
struct GridField {
    GridPtr grid;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(GridPtr g) : grid(std::move(g)), values(grid->nodes.size(), 0.0) {}
};

// Five-point (three-point in 1D) discrete Laplacian at an interior node.
double discrete_laplacian(const GridField& f, int node);

// Quadratic vertex refinement of a discrete argmax: fits a parabola through
// the node and its two axis neighbors, per axis, and returns the vertex.
// Falls back to the node coordinate when the local curvature is not concave.
Point refine_argmax(const Grid& grid, const std::vector<double>& values, int node);

} // namespace blowlab
