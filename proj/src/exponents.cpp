#include "dynball/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dynball/parallel.hpp"
#include "dynball/rng.hpp"

namespace dynball {

void Schedule::validate() const {
    if (n_values.empty()) throw Error("schedule: n_values must be nonempty");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 1) throw Error("schedule: horizons must be positive");
        if (i > 0 && n_values[i] <= n_values[i - 1])
            throw Error("schedule: n_values must be strictly increasing");
    }
    if (delta_values.empty()) throw Error("schedule: delta_values must be nonempty");
    for (std::size_t i = 0; i < delta_values.size(); ++i) {
        if (!(delta_values[i] > 1e-6))
            throw Error("schedule: delta values must exceed 1e-6");
        if (i > 0 && delta_values[i] >= delta_values[i - 1])
            throw Error("schedule: delta_values must be strictly decreasing");
    }
    if (directions < 1) throw Error("schedule: directions must be positive");
    if (tail_window < 1 || tail_window > static_cast<int>(n_values.size()))
        throw Error("schedule: tail_window must lie in [1, #n_values]");
}

double classical_top_exponent(const MapObject& m, Point2 x, int n) {
    if (n < 1) throw Error("classical_top_exponent: horizon must be positive");
    const auto orbit = iterate(m, x, n - 1);
    Matrix2 q = Matrix2::identity();
    double log_acc = 0.0;
    for (int j = 0; j < n; ++j) {
        q = jacobian(m, orbit[static_cast<std::size_t>(j)]) * q;
        const double s = operator_norm(q);
        if (!(s > 0.0)) throw Error("classical_top_exponent: singular cocycle product");
        log_acc += std::log(s);
        q = (1.0 / s) * q;
    }
    return log_acc / n;
}

double classical_directional_exponent(const MapObject& m, Point2 x, Vec2 v, int n) {
    if (n < 1) throw Error("classical_directional_exponent: horizon must be positive");
    Vec2 w = normalized(v);
    const auto orbit = iterate(m, x, n - 1);
    double log_acc = 0.0;
    for (int j = 0; j < n; ++j) {
        w = jacobian(m, orbit[static_cast<std::size_t>(j)]) * w;
        const double s = norm(w);
        if (!(s > 0.0)) throw Error("classical_directional_exponent: vector collapsed");
        log_acc += std::log(s);
        w = (1.0 / s) * w;
    }
    return log_acc / n;
}

namespace {

ExponentEstimate estimate_over_grid(const MapObject& m, Point2 x, std::span<const Vec2> dirs,
                                    const Schedule& s) {
    s.validate();
    const int n_max = s.n_values.back();
    const auto orbit = iterate(m, x, n_max);

    ExponentEstimate est;
    const std::size_t n_count = s.n_values.size();
    const std::size_t d_count = s.delta_values.size();
    est.grid.assign(n_count * d_count, GridCell{});

    for (std::size_t di = 0; di < d_count; ++di) {
        const double delta = s.delta_values[di];
        const auto tracks = track_candidates(m, orbit, dirs, delta, s.ladder);
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const int n = s.n_values[ni];
            GridCell& cell = est.grid[ni * d_count + di];
            cell.n = n;
            cell.delta = delta;
            for (const auto& t : tracks) {
                const double d0 = t.dist.front();
                if (t.in_ball(n)) {
                    const double v = std::log(t.dist[static_cast<std::size_t>(n)] / d0);
                    if (cell.retained == 0 || v > cell.sup_log) cell.sup_log = v;
                    ++cell.retained;
                } else {
                    const double cap = std::log(delta / d0);
                    if (!cell.any_escaped || cap > cell.cap_log) cell.cap_log = cap;
                    cell.any_escaped = true;
                }
            }
        }
    }

    // Per horizon: the inner-limit surrogate is the supremum at the
    // smallest delta whose cell is nonempty and not exhausted. Exhausted
    // cells say more about the ladder floor than about the ball, so they
    // are skipped while any sound cell exists.
    est.rows.reserve(n_count);
    for (std::size_t ni = 0; ni < n_count; ++ni) {
        RowSummary row;
        row.n = s.n_values[ni];
        for (std::size_t di = d_count; di-- > 0;) {  // smallest delta first
            const GridCell& cell = est.grid[ni * d_count + di];
            if (!cell.nonempty()) continue;
            if (!row.nonempty) {  // smallest nonempty delta as fallback
                row.nonempty = true;
                row.s = cell.sup_log;
                row.delta_used = cell.delta;
            }
            if (!cell.exhausted()) {
                row.healthy = true;
                row.s = cell.sup_log;
                row.delta_used = cell.delta;
                break;
            }
        }
        est.rows.push_back(row);
    }

    for (std::size_t ni = 0; ni < n_count; ++ni) {
        for (std::size_t di = 0; di + 1 < d_count; ++di) {
            const GridCell& big = est.grid[ni * d_count + di];
            const GridCell& small = est.grid[ni * d_count + di + 1];
            if (big.nonempty() && small.nonempty() && small.sup_log > big.sup_log)
                ++est.monotonicity_violations;
        }
    }

    // Rate from the smallest-delta column with at least two sound cells;
    // the per-column finite-delta bias cancels in the increments.
    auto column_rate = [&](std::size_t di, bool sound_only) -> bool {
        std::vector<const GridCell*> cells;
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const GridCell& cell = est.grid[ni * d_count + di];
            if (cell.nonempty() && (!sound_only || !cell.exhausted())) cells.push_back(&cell);
        }
        if (cells.size() < 2) return false;
        const std::size_t take = std::min<std::size_t>(
            static_cast<std::size_t>(s.tail_window), cells.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        est.tail_rows.clear();
        for (std::size_t i = cells.size() - take; i < cells.size(); ++i)
            est.tail_rows.push_back(cells[i]->n);
        for (std::size_t i = cells.size() - take; i + 1 < cells.size(); ++i) {
            const double inc = (cells[i + 1]->sup_log - cells[i]->sup_log) /
                               static_cast<double>(cells[i + 1]->n - cells[i]->n);
            lo = std::min(lo, inc);
            hi = std::max(hi, inc);
        }
        est.value = hi;
        est.tail_spread = hi - lo;
        est.value_delta = s.delta_values[di];
        return true;
    };

    auto single_cell = [&](bool sound_only) -> bool {
        // deepest usable cell, smallest delta among equals
        for (std::size_t ni = n_count; ni-- > 0;) {
            for (std::size_t di = d_count; di-- > 0;) {
                const GridCell& cell = est.grid[ni * d_count + di];
                if (!cell.nonempty() || (sound_only && cell.exhausted())) continue;
                est.value = cell.sup_log / cell.n;
                est.value_delta = cell.delta;
                est.tail_rows = {cell.n};
                est.tail_spread = 0.0;
                return true;
            }
        }
        return false;
    };

    for (std::size_t di = d_count; di-- > 0;)
        if (column_rate(di, true)) return est;
    est.degraded = true;
    if (single_cell(true)) return est;
    for (std::size_t di = d_count; di-- > 0;)
        if (column_rate(di, false)) return est;
    if (single_cell(false)) return est;
    throw EmptyCandidateSet("exponent estimate: every (n, delta) cell is empty");
}

}  // namespace

ExponentEstimate new_directional_exponent(const MapObject& m, Point2 x, Vec2 v,
                                          const Schedule& s) {
    const Vec2 dirs[] = {v};
    return estimate_over_grid(m, x, dirs, s);
}

ExponentEstimate new_top_exponent(const MapObject& m, Point2 x, const Schedule& s) {
    if (s.directions < 8) throw Error("new_top_exponent: need at least 8 directions");
    const auto fan = fan_directions(s.directions);
    return estimate_over_grid(m, x, fan, s);
}

OseledetsFrame estimate_oseledets_directions(const MapObject& m, Point2 x, int n) {
    if (!m.has_derivative() || !m.has_inverse())
        throw NotDifferentiable("oseledets estimate needs a derivative and an inverse");
    OseledetsFrame frame;
    frame.chi_plus = classical_top_exponent(m, x, n);
    if (!(frame.chi_plus > 0.05))
        throw NoHyperbolicity("top exponent below the positivity gate");

    const Vec2 seed{0.852936105461, 0.522027197914};  // fixed generic direction

    const auto orbit = iterate(m, x, n - 1);
    Vec2 w = seed;
    for (int j = 0; j < n; ++j)
        w = normalized(jacobian(m, orbit[static_cast<std::size_t>(j)]) * w);
    frame.e_u = w;

    Point2 p = m.domain.canonical(x);
    w = seed;
    for (int j = 0; j < n; ++j) {
        p = evaluate_inverse(m, p);
        w = normalized(inverse(jacobian(m, p)) * w);
    }
    frame.e_s = w;

    const double cross = std::abs(frame.e_u.dx * frame.e_s.dy - frame.e_u.dy * frame.e_s.dx);
    if (cross < 1e-6)
        throw NoHyperbolicity("expanding and contracting directions are parallel");
    return frame;
}

namespace {

std::vector<Point2> quadrature_points(const Domain& dom, const Quadrature& q) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(q.sample_count));
    if (q.source == Quadrature::Source::RegularGrid) {
        const int g = std::max(1, static_cast<int>(std::floor(std::sqrt(q.sample_count))));
        if (dom.kind == Domain::Kind::FlatTorus) {
            for (int i = 0; i < g; ++i)
                for (int j = 0; j < g; ++j)
                    pts.push_back({dom.period * (i + 0.5) / g, dom.period * (j + 0.5) / g});
        } else {
            // equal-area rings with staggered angles
            for (int i = 0; i < g; ++i) {
                const double r = dom.radius * std::sqrt((i + 0.5) / g);
                for (int j = 0; j < g; ++j) {
                    const double phi = 2.0 * M_PI * (j + 0.5 * (i % 2)) / g;
                    pts.push_back({dom.center.x + r * std::cos(phi),
                                   dom.center.y + r * std::sin(phi)});
                }
            }
        }
        return pts;
    }
    auto rng = make_rng(q.seed, 7);
    for (int i = 0; i < q.sample_count; ++i) pts.push_back(sample_point(dom, rng));
    return pts;
}

}  // namespace

LambdaEstimate lambda_functional(const MapObject& m, const Schedule& s, const Quadrature& q,
                                 int threads) {
    if (q.sample_count < 100) throw Error("lambda_functional: need at least 100 sample points");
    const double area = m.domain.area();  // UnboundedDomain for the plane

    const auto points = quadrature_points(m.domain, q);
    auto spare_rng = make_rng(q.seed, 11);
    std::vector<Point2> spares;
    spares.reserve(3 * points.size());
    for (std::size_t i = 0; i < 3 * points.size(); ++i)
        spares.push_back(sample_point(m.domain, spare_rng));

    struct Slot {
        double integrand = 0.0;
        bool clamped = false;
        bool excluded = false;
        bool degraded = false;
    };
    std::vector<Slot> slots(points.size());

    parallel_for(points.size(), threads, [&](std::size_t i) {
        Point2 p = points[i];
        for (int attempt = 0;; ++attempt) {
            try {
                const ExponentEstimate est = new_top_exponent(m, p, s);
                slots[i].integrand = std::max(est.value, 0.0);
                slots[i].clamped = est.value < 0.0;
                slots[i].degraded = est.degraded;
                return;
            } catch (const Error&) {
                if (attempt >= 3) {
                    slots[i].excluded = true;
                    return;
                }
                p = spares[3 * i + static_cast<std::size_t>(attempt)];
            }
        }
    });

    LambdaEstimate out;
    double sum = 0.0;
    for (const Slot& sl : slots) {
        if (sl.excluded) {
            ++out.excluded_points;
            continue;
        }
        sum += sl.integrand;
        ++out.sample_points;
        if (sl.clamped) ++out.negative_clamp_count;
        if (sl.degraded) ++out.degraded_points;
    }
    if (out.sample_points == 0) throw EmptyCandidateSet("lambda_functional: every point failed");
    const double mean = sum / out.sample_points;
    double ss = 0.0;
    for (const Slot& sl : slots)
        if (!sl.excluded) ss += (sl.integrand - mean) * (sl.integrand - mean);
    const double sd = out.sample_points > 1 ? std::sqrt(ss / (out.sample_points - 1)) : 0.0;
    out.value = area * mean;
    out.standard_error = area * sd / std::sqrt(static_cast<double>(out.sample_points));
    return out;
}

std::vector<double> check_orbit_invariance(const MapObject& m, Point2 x, const Schedule& s,
                                           int m_max) {
    const double base = new_top_exponent(m, x, s).value;
    const auto orbit = iterate(m, x, m_max);
    std::vector<double> deviations;
    deviations.reserve(static_cast<std::size_t>(m_max));
    for (int k = 1; k <= m_max; ++k) {
        const double v = new_top_exponent(m, orbit[static_cast<std::size_t>(k)], s).value;
        deviations.push_back(std::abs(v - base));
    }
    return deviations;
}

}  // namespace dynball
