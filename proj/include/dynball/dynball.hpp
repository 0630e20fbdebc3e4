#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dynball/maps.hpp"

namespace dynball {

// Initial separations below this carry no usable signal in double
// precision; candidate generation and the divergence ratio refuse them.
inline constexpr double kSeparationGuard = 1e-12;

// Geometric offset ladder used to place candidates along a line. In the
// default (relative) mode the top offset is top_fraction * delta; mapped
// ladders for homothety conjugation use 'scale'.
struct Ladder {
    bool absolute = false;
    double top_fraction = 1e-2;   // relative mode
    double top_offset = 1e-6;     // absolute mode
    double factor = 0.31622776601683794;  // 10^(-1/2)
    int count = 12;
    // Offsets below ~1e-7 make isometry estimates jitter at the 1e-8
    // level: orbit points round at 2^-53 * |coordinate| per step, which is
    // 1e-9 relative to a 1e-7 separation already.
    double min_offset = 1e-7;
    double scale = 1.0;

    // Descending offsets within [max(min_offset, guard), delta).
    std::vector<double> offsets(double delta) const;

    static Ladder absolute_range(double top, double bottom);
};

struct BallCandidate {
    Point2 y{};
    Vec2 initial_offset{};              // y - x, wrapped
    std::optional<int> escape_index;    // first j with d(f^j x, f^j y) >= delta
    std::optional<Vec2> on_line;        // direction v when generated on a line
};

struct SupEstimate {
    double value = 0.0;      // max over retained candidates of log Delta
    int n = 0;
    double delta = 0.0;
    int candidate_count = 0;
    BallCandidate argmax_candidate{};
};

// Membership test for the dynamical ball: all of d(f^j x, f^j y) < delta
// for j = 0..n. Returns (true, nullopt) or (false, first violating j).
std::pair<bool, std::optional<int>> in_dynamical_ball(const MapObject& m, Point2 x, Point2 y,
                                                      double delta, int n);

// ||f^n x - f^n y|| / ||x - y|| in the domain metric.
// Throws DegenerateSeparation when the initial distance is below the guard.
double delta_ratio(const MapObject& m, int n, Point2 x, Point2 y);

// Unit directions at angles i*pi/count, i = 0..count-1 (each line is
// sampled on both sides, so a half-turn fan covers the full circle).
std::vector<Vec2> fan_directions(int count);

// Candidates x +/- eps * v/||v|| for every ladder offset eps, each tagged
// with its escape index relative to horizon n. Throws EmptyCandidateSet if
// nothing stays in the ball through n.
std::vector<BallCandidate> sample_line_candidates(const MapObject& m, Point2 x, Vec2 v,
                                                  double delta, int n, const Ladder& ladder);

// Union of line candidates over 'directions' evenly spaced lines
// (directions >= 8), deduplicated on the initial offset.
std::vector<BallCandidate> sample_ball_candidates(const MapObject& m, Point2 x, double delta,
                                                  int n, int directions, const Ladder& ladder);

// sup over verified candidates of log Delta(f, n, x, y). Candidates that
// carry an escape index are skipped; throws EmptyCandidateSet if none are
// verified.
SupEstimate sup_log_delta(const MapObject& m, Point2 x, int n, double delta,
                          const std::vector<BallCandidate>& candidates);

// --- orbit-separation tracker (shared by the estimators) ------------------
//
// One tracked candidate: the separation d_j = d(f^j x, f^j y) recorded up
// to the first escape (d_j >= delta) or n_max. escape == -1 means the
// candidate stayed in the ball through n_max. A candidate whose orbit
// leaves the domain is treated as escaped at that step.
struct CandidateTrack {
    Point2 y{};
    Vec2 initial_offset{};
    Vec2 direction{};
    std::vector<double> dist;  // dist[j] for j = 0..min(escape, n_max)
    int escape = -1;

    bool in_ball(int n) const { return escape < 0 || escape > n; }
};

std::vector<CandidateTrack> track_candidates(const MapObject& m, std::span<const Point2> orbit,
                                             std::span<const Vec2> directions, double delta,
                                             const Ladder& ladder);

}  // namespace dynball
