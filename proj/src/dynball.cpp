#include "dynball/dynball.hpp"

#include <algorithm>
#include <cmath>

namespace dynball {

std::vector<double> Ladder::offsets(double delta) const {
    if (!(delta > 0.0)) throw Error("ladder: delta must be positive");
    // 'scale' maps the absolute anchors through a homothety; the
    // delta-relative top follows the (already mapped) delta by itself.
    const double top = absolute ? top_offset * scale : top_fraction * delta;
    const double lo = std::max(min_offset * scale, kSeparationGuard);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    double eps = top;
    for (int j = 0; j < count; ++j, eps *= factor) {
        if (eps < lo) break;
        if (eps >= delta * scale) continue;
        out.push_back(eps);
    }
    return out;
}

Ladder Ladder::absolute_range(double top, double bottom) {
    Ladder l;
    l.absolute = true;
    l.top_offset = top;
    l.min_offset = bottom;
    l.count = 1 + static_cast<int>(std::ceil(std::log(top / bottom) / -std::log(l.factor)));
    return l;
}

std::pair<bool, std::optional<int>> in_dynamical_ball(const MapObject& m, Point2 x, Point2 y,
                                                      double delta, int n) {
    if (!(delta > 0.0)) throw Error("in_dynamical_ball: delta must be positive");
    Point2 px = m.domain.canonical(x);
    Point2 py = m.domain.canonical(y);
    for (int j = 0; j <= n; ++j) {
        if (distance(m.domain, px, py) >= delta) return {false, j};
        if (j < n) {
            px = evaluate(m, px);
            py = evaluate(m, py);
        }
    }
    return {true, std::nullopt};
}

double delta_ratio(const MapObject& m, int n, Point2 x, Point2 y) {
    const double d0 = distance(m.domain, x, y);
    if (d0 < kSeparationGuard)
        throw DegenerateSeparation("delta_ratio: initial separation below the underflow guard");
    Point2 px = m.domain.canonical(x);
    Point2 py = m.domain.canonical(y);
    for (int j = 0; j < n; ++j) {
        px = evaluate(m, px);
        py = evaluate(m, py);
    }
    return distance(m.domain, px, py) / d0;
}

std::vector<Vec2> fan_directions(int count) {
    if (count < 1) throw Error("fan_directions: count must be positive");
    std::vector<Vec2> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double angle = M_PI * static_cast<double>(i) / static_cast<double>(count);
        dirs.push_back({std::cos(angle), std::sin(angle)});
    }
    return dirs;
}

std::vector<CandidateTrack> track_candidates(const MapObject& m, std::span<const Point2> orbit,
                                             std::span<const Vec2> directions, double delta,
                                             const Ladder& ladder) {
    const auto offsets = ladder.offsets(delta);
    const int n_max = static_cast<int>(orbit.size()) - 1;
    std::vector<CandidateTrack> tracks;
    tracks.reserve(2 * offsets.size() * directions.size());
    for (const Vec2& raw : directions) {
        const Vec2 u = normalized(raw);
        for (const double eps : offsets) {
            for (const double sign : {1.0, -1.0}) {
                const Vec2 step{sign * eps * u.dx, sign * eps * u.dy};
                const Point2 y0 = orbit[0] + step;
                if (!m.domain.contains(y0)) continue;
                CandidateTrack t;
                t.y = m.domain.canonical(y0);
                t.initial_offset = displacement(m.domain, orbit[0], t.y);
                t.direction = raw;
                t.dist.reserve(static_cast<std::size_t>(n_max) + 1);
                Point2 py = t.y;
                for (int j = 0; j <= n_max; ++j) {
                    const double dj = distance(m.domain, orbit[static_cast<std::size_t>(j)], py);
                    t.dist.push_back(dj);
                    if (dj >= delta) {
                        t.escape = j;
                        break;
                    }
                    if (j < n_max) {
                        try {
                            py = evaluate(m, py);
                        } catch (const DomainViolation&) {
                            t.escape = j + 1;
                            break;
                        }
                    }
                }
                tracks.push_back(std::move(t));
            }
        }
    }
    return tracks;
}

namespace {

BallCandidate to_candidate(const CandidateTrack& t, int n, std::optional<Vec2> on_line) {
    BallCandidate c;
    c.y = t.y;
    c.initial_offset = t.initial_offset;
    if (t.escape >= 0 && t.escape <= n) c.escape_index = t.escape;
    c.on_line = on_line;
    return c;
}

bool any_retained(const std::vector<BallCandidate>& cs) {
    return std::any_of(cs.begin(), cs.end(),
                       [](const BallCandidate& c) { return !c.escape_index.has_value(); });
}

}  // namespace

std::vector<BallCandidate> sample_line_candidates(const MapObject& m, Point2 x, Vec2 v,
                                                  double delta, int n, const Ladder& ladder) {
    const Vec2 dir[] = {normalized(v)};
    const auto orbit = iterate(m, x, n);
    const auto tracks = track_candidates(m, orbit, dir, delta, ladder);
    std::vector<BallCandidate> out;
    out.reserve(tracks.size());
    for (const auto& t : tracks) out.push_back(to_candidate(t, n, v));
    if (!any_retained(out))
        throw EmptyCandidateSet("no line candidate stayed in the ball through horizon " +
                                std::to_string(n));
    return out;
}

std::vector<BallCandidate> sample_ball_candidates(const MapObject& m, Point2 x, double delta,
                                                  int n, int directions, const Ladder& ladder) {
    if (directions < 8) throw Error("sample_ball_candidates: need at least 8 directions");
    const auto fan = fan_directions(directions);
    const auto orbit = iterate(m, x, n);
    const auto tracks = track_candidates(m, orbit, fan, delta, ladder);
    std::vector<BallCandidate> out;
    out.reserve(tracks.size());
    for (const auto& t : tracks) {
        const BallCandidate c = to_candidate(t, n, t.direction);
        const bool dup = std::any_of(out.begin(), out.end(), [&](const BallCandidate& o) {
            return std::abs(o.initial_offset.dx - c.initial_offset.dx) < 1e-14 &&
                   std::abs(o.initial_offset.dy - c.initial_offset.dy) < 1e-14;
        });
        if (!dup) out.push_back(c);
    }
    if (!any_retained(out))
        throw EmptyCandidateSet("no ball candidate stayed in the ball through horizon " +
                                std::to_string(n));
    return out;
}

SupEstimate sup_log_delta(const MapObject& m, Point2 x, int n, double delta,
                          const std::vector<BallCandidate>& candidates) {
    SupEstimate est;
    est.n = n;
    est.delta = delta;
    bool found = false;
    for (const auto& c : candidates) {
        if (c.escape_index.has_value()) continue;  // not a verified member
        const double v = std::log(delta_ratio(m, n, x, c.y));
        if (!found || v > est.value) {
            est.value = v;
            est.argmax_candidate = c;
        }
        found = true;
        ++est.candidate_count;
    }
    if (!found) throw EmptyCandidateSet("sup_log_delta: no verified candidates");
    return est;
}

}  // namespace dynball
