#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynball/geometry.hpp"

namespace dynball {

// A continuous self-map of a model domain, with optional analytic
// derivative and optional inverse. Immutable after construction; all
// evaluation entry points are pure.
struct MapObject {
    Domain domain;
    std::string label;
    std::function<Point2(Point2)> forward;
    std::function<Matrix2(Point2)> derivative;  // empty if none provided
    std::function<Point2(Point2)> inverse;      // empty if none provided
    bool area_preserving = false;

    bool has_derivative() const { return static_cast<bool>(derivative); }
    bool has_inverse() const { return static_cast<bool>(inverse); }
};

// f(p); validates domain membership and canonicalizes the image.
Point2 evaluate(const MapObject& m, Point2 p);

// p, f(p), ..., f^n(p): n+1 points.
std::vector<Point2> iterate(const MapObject& m, Point2 p, int n);

// Df at p; throws NotDifferentiable when no derivative is available.
Matrix2 jacobian(const MapObject& m, Point2 p);

// Apply the inverse; throws NotDifferentiable-free contract: callers must
// check has_inverse() first (std::bad_function_call otherwise).
Point2 evaluate_inverse(const MapObject& m, Point2 p);

// --- the zoo -------------------------------------------------------------

MapObject make_identity(const Domain& dom);

// Rigid rotation of the unit disc about its center.
MapObject make_rotation(double theta);

// Translation by (alpha, beta) on the flat torus.
MapObject make_torus_translation(double alpha, double beta, double period = 1.0);

// Hyperbolic toral automorphism (2x+y, x+y) mod 1.
MapObject make_cat_map();

// Standard (kicked-rotor) map mod 1:
//   theta' = theta + p + (K/2pi) sin(2pi theta),  p' = p + (K/2pi) sin(2pi theta).
MapObject make_standard_map(double k_param);

// Four-branch piecewise-linear plane map with three distinct expansion
// rates along the lines y=x, x=0 and y=0 through the origin. Branches are
// tested in listed order; not differentiable at the origin (no derivative
// is attached).
MapObject make_example_map();

// diag(2, 1/2) on the plane.
MapObject make_plane_diag_map();

// Area-preserving chaotic disc map, identity on the unit-disc boundary:
// the composition of two radial twists supported on overlapping sub-discs
// centered at (-0.3, 0) and (0.3, 0) with angle profile s*(1 - (r/R)^2).
MapObject make_disc_standin(double twist1 = 3.0, double twist2 = 2.4);

// l o m o l^{-1} with l(p) = center + ratio * p, acting on the disc of
// radius ratio * (radius of m's disc) around 'center'.
MapObject conjugate_by_homothety(const MapObject& m, Point2 center, double ratio);

struct DiscFamilySpec {
    int n = 1;          // n^2 discs on a regular grid
    double k = 1.0;     // each disc has radius k / (10 n)
    MapObject base;     // defined on the unit disc, identity on its boundary
    Domain ambient = Domain::flat_torus(1.0);
};

struct DiscFamily {
    MapObject map;
    std::vector<Point2> centers;
    double radius = 0.0;
    double spacing = 0.0;
    double total_disc_area() const;
};

// Identity outside the n^2 discs, homothety-conjugated base inside each.
// Throws DiscOverlap if the grid cannot keep discs disjoint and contained,
// BoundaryMismatch if the base is not identity on the unit-disc boundary.
DiscFamily make_disc_family(const DiscFamilySpec& spec);
MapObject build_disc_family(const DiscFamilySpec& spec);

// Catalog of ready-made maps under their default parameters.
std::vector<MapObject> zoo();
const MapObject* zoo_find(const std::vector<MapObject>& catalog, std::string_view label);

}  // namespace dynball
