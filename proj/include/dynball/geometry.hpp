#pragma once

#include <cmath>

#include "dynball/errors.hpp"

namespace dynball {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Vec2 {
    double dx = 0.0;
    double dy = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.dx + b.dx, a.dy + b.dy}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.dx - b.dx, a.dy - b.dy}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.dx, s * v.dy}; }
inline Point2 operator+(Point2 p, Vec2 v) { return {p.x + v.dx, p.y + v.dy}; }

double norm(Vec2 v);
Vec2 normalized(Vec2 v);  // throws DegenerateSeparation on the zero vector

struct Matrix2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    static Matrix2 identity() { return {}; }
};

Matrix2 operator*(const Matrix2& a, const Matrix2& b);
Vec2 operator*(const Matrix2& a, Vec2 v);
Matrix2 operator*(double s, const Matrix2& a);
double det(const Matrix2& a);
double operator_norm(const Matrix2& a);  // largest singular value
Matrix2 inverse(const Matrix2& a);

// Model phase spaces. All computation happens in global Euclidean
// coordinates; the torus is handled by wrapping representatives.
struct Domain {
    enum class Kind { Plane, FlatTorus, ClosedDisc };

    Kind kind = Kind::Plane;
    double period = 1.0;      // FlatTorus
    Point2 center{};          // ClosedDisc
    double radius = 1.0;      // ClosedDisc

    static Domain plane();
    static Domain flat_torus(double period);
    static Domain closed_disc(Point2 center, double radius);

    bool contains(Point2 p) const;
    // Canonical representative (torus points wrapped to [0, period)).
    Point2 canonical(Point2 p) const;
    bool bounded() const { return kind != Kind::Plane; }
    double area() const;  // throws UnboundedDomain for the plane
};

// Shortest representative of q - p; on the torus components lie in
// [-period/2, period/2). Throws DomainViolation if either point is
// outside a ClosedDisc domain.
Vec2 displacement(const Domain& d, Point2 p, Point2 q);

// distance is defined as norm(displacement(...)) so the two always agree
// on the same floating path.
double distance(const Domain& d, Point2 p, Point2 q);

}  // namespace dynball
