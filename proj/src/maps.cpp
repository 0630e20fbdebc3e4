#include "dynball/maps.hpp"

#include <cmath>
#include <utility>

namespace dynball {

Point2 evaluate(const MapObject& m, Point2 p) {
    if (!m.domain.contains(p))
        throw DomainViolation("point outside the domain of map '" + m.label + "'");
    return m.domain.canonical(m.forward(p));
}

std::vector<Point2> iterate(const MapObject& m, Point2 p, int n) {
    if (n < 0) throw Error("iterate: negative horizon");
    std::vector<Point2> orbit;
    orbit.reserve(static_cast<std::size_t>(n) + 1);
    orbit.push_back(m.domain.canonical(p));
    for (int j = 0; j < n; ++j) orbit.push_back(evaluate(m, orbit.back()));
    return orbit;
}

Matrix2 jacobian(const MapObject& m, Point2 p) {
    if (!m.has_derivative())
        throw NotDifferentiable("map '" + m.label + "' has no derivative at the queried point");
    if (!m.domain.contains(p))
        throw DomainViolation("point outside the domain of map '" + m.label + "'");
    return m.derivative(p);
}

Point2 evaluate_inverse(const MapObject& m, Point2 p) {
    if (!m.domain.contains(p))
        throw DomainViolation("point outside the domain of map '" + m.label + "'");
    return m.domain.canonical(m.inverse(p));
}

MapObject make_identity(const Domain& dom) {
    MapObject m;
    m.domain = dom;
    m.label = "identity";
    m.forward = [](Point2 p) { return p; };
    m.derivative = [](Point2) { return Matrix2::identity(); };
    m.inverse = [](Point2 p) { return p; };
    m.area_preserving = true;
    return m;
}

MapObject make_rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    MapObject m;
    m.domain = Domain::closed_disc({0.0, 0.0}, 1.0);
    m.label = "rotation";
    m.forward = [c, s](Point2 p) { return Point2{c * p.x - s * p.y, s * p.x + c * p.y}; };
    m.derivative = [c, s](Point2) { return Matrix2{c, -s, s, c}; };
    m.inverse = [c, s](Point2 p) { return Point2{c * p.x + s * p.y, -s * p.x + c * p.y}; };
    m.area_preserving = true;
    return m;
}

MapObject make_torus_translation(double alpha, double beta, double period) {
    MapObject m;
    m.domain = Domain::flat_torus(period);
    m.label = "translation";
    m.forward = [alpha, beta](Point2 p) { return Point2{p.x + alpha, p.y + beta}; };
    m.derivative = [](Point2) { return Matrix2::identity(); };
    m.inverse = [alpha, beta](Point2 p) { return Point2{p.x - alpha, p.y - beta}; };
    m.area_preserving = true;
    return m;
}

MapObject make_cat_map() {
    MapObject m;
    m.domain = Domain::flat_torus(1.0);
    m.label = "cat";
    m.forward = [](Point2 p) { return Point2{2.0 * p.x + p.y, p.x + p.y}; };
    m.derivative = [](Point2) { return Matrix2{2.0, 1.0, 1.0, 1.0}; };
    m.inverse = [](Point2 p) { return Point2{p.x - p.y, -p.x + 2.0 * p.y}; };
    m.area_preserving = true;
    return m;
}

MapObject make_standard_map(double k_param) {
    const double a = k_param / (2.0 * M_PI);
    MapObject m;
    m.domain = Domain::flat_torus(1.0);
    m.label = "standard";
    m.forward = [a](Point2 p) {
        const double kick = a * std::sin(2.0 * M_PI * p.x);
        return Point2{p.x + p.y + kick, p.y + kick};
    };
    m.derivative = [k_param](Point2 p) {
        const double c = k_param * std::cos(2.0 * M_PI * p.x);
        return Matrix2{1.0 + c, 1.0, c, 1.0};
    };
    m.inverse = [a](Point2 p) {
        const double x_prev = p.x - p.y;
        return Point2{x_prev, p.y - a * std::sin(2.0 * M_PI * x_prev)};
    };
    m.area_preserving = true;
    return m;
}

MapObject make_example_map() {
    MapObject m;
    m.domain = Domain::plane();
    m.label = "example";
    m.forward = [](Point2 p) {
        const double x = p.x, y = p.y;
        if (x * (y - x) > 0.0) return Point2{2.0 * x, 1.5 * x + 0.5 * y};
        if (x * (y - x) < 0.0) return Point2{3.0 * x - y, 2.0 * y};
        if (x * y <= 0.0) return Point2{3.0 * x, 0.5 * y};
        return Point2{2.0 * x, 2.0 * y};  // remaining case: x == y, x != 0
    };
    m.area_preserving = false;
    return m;
}

MapObject make_plane_diag_map() {
    MapObject m;
    m.domain = Domain::plane();
    m.label = "diag";
    m.forward = [](Point2 p) { return Point2{2.0 * p.x, 0.5 * p.y}; };
    m.derivative = [](Point2) { return Matrix2{2.0, 0.0, 0.0, 0.5}; };
    m.inverse = [](Point2 p) { return Point2{0.5 * p.x, 2.0 * p.y}; };
    m.area_preserving = false;  // det = 1 but not declared for the box test (plane)
    return m;
}

namespace {

// Radial twist about 'c', supported on r < R: rotate by s*(1 - (r/R)^2).
Point2 apply_twist(Point2 p, Point2 c, double support, double strength) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    const double r2 = dx * dx + dy * dy;
    const double s2 = support * support;
    if (r2 >= s2) return p;
    const double angle = strength * (1.0 - r2 / s2);
    const double ca = std::cos(angle), sa = std::sin(angle);
    return {c.x + ca * dx - sa * dy, c.y + sa * dx + ca * dy};
}

constexpr Point2 kTwistCenter1{-0.3, 0.0};
constexpr Point2 kTwistCenter2{0.3, 0.0};
constexpr double kTwistSupport = 0.65;

}  // namespace

MapObject make_disc_standin(double twist1, double twist2) {
    MapObject m;
    m.domain = Domain::closed_disc({0.0, 0.0}, 1.0);
    m.label = "standin";
    m.forward = [twist1, twist2](Point2 p) {
        return apply_twist(apply_twist(p, kTwistCenter1, kTwistSupport, twist1),
                           kTwistCenter2, kTwistSupport, twist2);
    };
    m.inverse = [twist1, twist2](Point2 p) {
        return apply_twist(apply_twist(p, kTwistCenter2, kTwistSupport, -twist2),
                           kTwistCenter1, kTwistSupport, -twist1);
    };
    m.area_preserving = true;
    return m;
}

MapObject conjugate_by_homothety(const MapObject& m, Point2 center, double ratio) {
    if (!(ratio > 0.0)) throw Error("conjugate_by_homothety: ratio must be positive");
    if (m.domain.kind != Domain::Kind::ClosedDisc)
        throw DomainViolation("conjugate_by_homothety expects a disc map");
    const auto fwd = m.forward;
    const auto inv = m.inverse;
    MapObject out;
    out.domain = Domain::closed_disc({center.x + ratio * m.domain.center.x,
                                      center.y + ratio * m.domain.center.y},
                                     ratio * m.domain.radius);
    out.label = m.label + "~homothety";
    out.forward = [fwd, center, ratio](Point2 p) {
        const Point2 q = fwd(Point2{(p.x - center.x) / ratio, (p.y - center.y) / ratio});
        return Point2{center.x + ratio * q.x, center.y + ratio * q.y};
    };
    if (inv) {
        out.inverse = [inv, center, ratio](Point2 p) {
            const Point2 q = inv(Point2{(p.x - center.x) / ratio, (p.y - center.y) / ratio});
            return Point2{center.x + ratio * q.x, center.y + ratio * q.y};
        };
    }
    if (m.derivative) {
        const auto der = m.derivative;
        out.derivative = [der, center, ratio](Point2 p) {
            return der(Point2{(p.x - center.x) / ratio, (p.y - center.y) / ratio});
        };
    }
    out.area_preserving = m.area_preserving;
    return out;
}

double DiscFamily::total_disc_area() const {
    return static_cast<double>(centers.size()) * M_PI * radius * radius;
}

DiscFamily make_disc_family(const DiscFamilySpec& spec) {
    if (spec.n < 1) throw Error("disc family: n must be >= 1");
    if (!(spec.k > 0.0)) throw Error("disc family: k must be positive");
    if (spec.base.domain.kind != Domain::Kind::ClosedDisc ||
        spec.base.domain.radius != 1.0)
        throw BoundaryMismatch("disc family base must live on the unit disc");

    // Base must fix the unit-disc boundary pointwise.
    const Domain unit = spec.base.domain;
    for (int i = 0; i < 1000; ++i) {
        const double phi = 2.0 * M_PI * static_cast<double>(i) / 1000.0;
        const Point2 b{unit.center.x + std::cos(phi), unit.center.y + std::sin(phi)};
        const Point2 fb = spec.base.forward(b);
        if (std::hypot(fb.x - b.x, fb.y - b.y) > 1e-9)
            throw BoundaryMismatch("disc family base is not identity on the unit-disc boundary");
    }

    const double radius = spec.k / (10.0 * spec.n);
    double side = 0.0;
    Point2 origin{0.0, 0.0};
    switch (spec.ambient.kind) {
        case Domain::Kind::FlatTorus:
            side = spec.ambient.period;
            break;
        case Domain::Kind::Plane:
            side = 1.0;
            break;
        case Domain::Kind::ClosedDisc:
            side = spec.ambient.radius * std::sqrt(2.0);
            origin = {spec.ambient.center.x - 0.5 * side, spec.ambient.center.y - 0.5 * side};
            break;
    }
    const double spacing = side / spec.n;
    if (spacing < 4.0 * radius)
        throw DiscOverlap("disc family: grid spacing below 4x disc radius; reduce k");

    DiscFamily fam;
    fam.radius = radius;
    fam.spacing = spacing;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j)
            fam.centers.push_back({origin.x + (i + 0.5) * spacing, origin.y + (j + 0.5) * spacing});

    // Each disc lies strictly inside its own grid cell (spacing >= 4r), so
    // membership reduces to an O(1) cell lookup plus one distance check.
    const Domain ambient = spec.ambient;
    const bool torus = ambient.kind == Domain::Kind::FlatTorus;
    const int n = spec.n;
    const double r = radius;
    const auto centers = fam.centers;

    auto locate = [=](Point2 p, Vec2& offset_out) -> int {
        Point2 q = torus ? ambient.canonical(p) : p;
        const int i = static_cast<int>(std::floor((q.x - origin.x) / spacing));
        const int j = static_cast<int>(std::floor((q.y - origin.y) / spacing));
        if (i < 0 || i >= n || j < 0 || j >= n) return -1;
        const std::size_t idx = static_cast<std::size_t>(i) * n + j;
        const Point2 c = centers[idx];
        const Vec2 d = torus ? displacement(ambient, c, q) : Vec2{q.x - c.x, q.y - c.y};
        if (norm(d) > r) return -1;
        offset_out = d;
        return static_cast<int>(idx);
    };

    auto conjugated = [centers, r, locate](const std::function<Point2(Point2)>& base, Point2 p) {
        Vec2 d;
        const int i = locate(p, d);
        if (i < 0) return p;
        const Point2 c = centers[static_cast<std::size_t>(i)];
        const Point2 q = base(Point2{d.dx / r, d.dy / r});
        return Point2{c.x + r * q.x, c.y + r * q.y};
    };

    const auto base_fwd = spec.base.forward;
    const auto base_inv = spec.base.inverse;

    MapObject g;
    g.domain = spec.ambient;
    g.label = "disc_family";
    g.forward = [conjugated, base_fwd](Point2 p) { return conjugated(base_fwd, p); };
    if (base_inv)
        g.inverse = [conjugated, base_inv](Point2 p) { return conjugated(base_inv, p); };
    g.area_preserving = spec.base.area_preserving;
    fam.map = std::move(g);
    return fam;
}

MapObject build_disc_family(const DiscFamilySpec& spec) { return make_disc_family(spec).map; }

std::vector<MapObject> zoo() {
    std::vector<MapObject> catalog;
    catalog.push_back(make_identity(Domain::flat_torus(1.0)));
    catalog.push_back(make_rotation(0.73));
    catalog.push_back(make_torus_translation(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0)));
    catalog.push_back(make_cat_map());
    catalog.push_back(make_standard_map(1.5));
    catalog.push_back(make_example_map());
    catalog.push_back(make_disc_standin());
    catalog.push_back(make_plane_diag_map());
    return catalog;
}

const MapObject* zoo_find(const std::vector<MapObject>& catalog, std::string_view label) {
    for (const auto& m : catalog)
        if (m.label == label) return &m;
    return nullptr;
}

}  // namespace dynball
