#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynball/dynball.hpp"

namespace dynball {

// Numerical realization of the double limit (delta -> 0 inside, horizon
// n -> infinity outside): a grid of horizons and ball radii plus the
// candidate ladder and direction fan.
struct Schedule {
    std::vector<int> n_values = {5, 10, 15, 20, 25, 30};
    std::vector<double> delta_values = {1e-2, 1e-3, 1e-4};
    int directions = 64;
    Ladder ladder{};
    int tail_window = 3;

    void validate() const;
    static Schedule defaults() { return {}; }
};

// One (n, delta) grid cell. 'cap_log' is the largest log(delta / d0) over
// candidates that escaped at or before n: the value such a candidate could
// have reached had it stayed. A cell whose retained supremum falls short
// of that cap hit the ladder floor before the ball radius, so its value
// underestimates the true supremum ("exhausted").
struct GridCell {
    int n = 0;
    double delta = 0.0;
    int retained = 0;
    double sup_log = 0.0;   // valid iff retained > 0
    double cap_log = 0.0;   // valid iff any_escaped
    bool any_escaped = false;

    bool nonempty() const { return retained > 0; }
    bool exhausted() const { return any_escaped && (retained == 0 || cap_log > sup_log); }
};

struct RowSummary {
    int n = 0;
    bool nonempty = false;
    bool healthy = false;    // some delta produced a non-exhausted cell
    double s = 0.0;          // sup at the chosen delta; valid iff nonempty
    double delta_used = 0.0;
};

// The suprema carry horizon-independent offsets (probe-angle factors, the
// finite-delta bias of one ball radius), so the rate is read off as the
// growth of log sup across horizons within a single delta column, where
// those offsets cancel: value = max consecutive increment
// (s(n_{i+1}) - s(n_i)) / (n_{i+1} - n_i) over the tail cells of the
// smallest-delta column holding at least two sound cells. Columns whose
// cells are exhausted (or empty) are skipped; with no usable column the
// estimate degrades to s(n)/n at the deepest nonempty cell.
struct ExponentEstimate {
    double value = 0.0;
    double value_delta = 0.0;           // the column the value was read from
    std::vector<GridCell> grid;         // complete over the schedule
    std::vector<RowSummary> rows;       // per-horizon surrogates (diagnostics)
    std::vector<int> tail_rows;         // horizons that formed the value
    double tail_spread = 0.0;           // max - min over the tail increments
    int monotonicity_violations = 0;    // sup increased as delta shrank
    bool degraded = false;              // fell back to a single cell or unsound cells
};

// (1/n) log ||Df^n_x|| with per-step renormalization.
double classical_top_exponent(const MapObject& m, Point2 x, int n);

// (1/n) log(||Df^n_x v|| / ||v||).
double classical_directional_exponent(const MapObject& m, Point2 x, Vec2 v, int n);

// Ball-divergence exponent restricted to the line through x with direction v.
ExponentEstimate new_directional_exponent(const MapObject& m, Point2 x, Vec2 v,
                                          const Schedule& s);

// Ball-divergence exponent over the full direction fan. With shared
// ladders the candidate set contains every line set, so this dominates
// any directional estimate at the same schedule.
ExponentEstimate new_top_exponent(const MapObject& m, Point2 x, const Schedule& s);

struct OseledetsFrame {
    Vec2 e_u{};
    Vec2 e_s{};
    double chi_plus = 0.0;
};

// Expanding/contracting directions at x via forward and inverse-orbit
// power iteration. Requires derivative + inverse and a positive top
// exponent (> 0.05), else NoHyperbolicity.
OseledetsFrame estimate_oseledets_directions(const MapObject& m, Point2 x, int n);

struct Quadrature {
    int sample_count = 400;
    std::uint64_t seed = 0;
    enum class Source { UniformRandom, RegularGrid };
    Source source = Source::UniformRandom;
};

struct LambdaEstimate {
    double value = 0.0;
    int sample_points = 0;
    double standard_error = 0.0;
    int negative_clamp_count = 0;
    int excluded_points = 0;
    int degraded_points = 0;
};

// Quadrature average of max(new_top_exponent, 0) times the domain area.
// Per-point failures are retried up to 3 times on fresh points, then
// excluded. Deterministic for a fixed seed regardless of thread count.
LambdaEstimate lambda_functional(const MapObject& m, const Schedule& s, const Quadrature& q,
                                 int threads = 1);

// |chi_hat(f^m x) - chi_hat(x)| for m = 1..m_max.
std::vector<double> check_orbit_invariance(const MapObject& m, Point2 x, const Schedule& s,
                                           int m_max);

}  // namespace dynball
