#include "dynball/geometry.hpp"

#include <algorithm>

namespace dynball {

double norm(Vec2 v) { return std::hypot(v.dx, v.dy); }

Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    if (n == 0.0 || !std::isfinite(n))
        throw DegenerateSeparation("cannot normalize a zero/non-finite vector");
    return {v.dx / n, v.dy / n};
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

Vec2 operator*(const Matrix2& a, Vec2 v) {
    return {a.a11 * v.dx + a.a12 * v.dy, a.a21 * v.dx + a.a22 * v.dy};
}

Matrix2 operator*(double s, const Matrix2& a) {
    return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
}

double det(const Matrix2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }

double operator_norm(const Matrix2& a) {
    // sigma_max^2 = (|A|_F^2 + sqrt(|A|_F^4 - 4 det^2)) / 2
    const double f2 = a.a11 * a.a11 + a.a12 * a.a12 + a.a21 * a.a21 + a.a22 * a.a22;
    const double d = det(a);
    const double disc = std::sqrt(std::max(f2 * f2 - 4.0 * d * d, 0.0));
    return std::sqrt(0.5 * (f2 + disc));
}

Matrix2 inverse(const Matrix2& a) {
    const double d = det(a);
    if (d == 0.0 || !std::isfinite(d))
        throw NotDifferentiable("matrix is singular");
    return {a.a22 / d, -a.a12 / d, -a.a21 / d, a.a11 / d};
}

Domain Domain::plane() { return {}; }

Domain Domain::flat_torus(double period) {
    if (!(period > 0.0)) throw DomainViolation("torus period must be positive");
    Domain d;
    d.kind = Kind::FlatTorus;
    d.period = period;
    return d;
}

Domain Domain::closed_disc(Point2 center, double radius) {
    if (!(radius > 0.0)) throw DomainViolation("disc radius must be positive");
    Domain d;
    d.kind = Kind::ClosedDisc;
    d.center = center;
    d.radius = radius;
    return d;
}

namespace {

// Membership slack for disc domains: orbits of boundary points drift by a
// few ulps per iterate and must not spuriously fall outside.
constexpr double kContainSlack = 1e-12;

double wrap_unit(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    if (y == period) y = 0.0;
    return y;
}

// Wrap a difference to [-period/2, period/2).
double wrap_diff(double d, double period) {
    double w = d - period * std::floor(d / period + 0.5);
    if (w >= 0.5 * period) w -= period;
    return w;
}

}  // namespace

bool Domain::contains(Point2 p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    if (kind != Kind::ClosedDisc) return true;
    const double r = std::hypot(p.x - center.x, p.y - center.y);
    return r <= radius * (1.0 + kContainSlack) + kContainSlack;
}

Point2 Domain::canonical(Point2 p) const {
    if (kind != Kind::FlatTorus) return p;
    return {wrap_unit(p.x, period), wrap_unit(p.y, period)};
}

double Domain::area() const {
    switch (kind) {
        case Kind::FlatTorus: return period * period;
        case Kind::ClosedDisc: return M_PI * radius * radius;
        case Kind::Plane: break;
    }
    throw UnboundedDomain("the plane has no finite area");
}

Vec2 displacement(const Domain& d, Point2 p, Point2 q) {
    if (d.kind == Domain::Kind::ClosedDisc) {
        if (!d.contains(p) || !d.contains(q))
            throw DomainViolation("point outside the closed disc");
    }
    double dx = q.x - p.x;
    double dy = q.y - p.y;
    if (d.kind == Domain::Kind::FlatTorus) {
        dx = wrap_diff(dx, d.period);
        dy = wrap_diff(dy, d.period);
    }
    return {dx, dy};
}

double distance(const Domain& d, Point2 p, Point2 q) {
    return norm(displacement(d, p, q));
}

}  // namespace dynball
