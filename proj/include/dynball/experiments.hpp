#pragma once

#include "dynball/report.hpp"

namespace dynball {

// Three directional divergence rates at the origin of the piecewise-linear
// example map (log 2, -log 2, log 3 along the diagonal, vertical and
// horizontal lines) plus the top estimate, which the horizontal line must
// dominate.
ExperimentReport run_example_experiment(const Schedule& s, double tolerance = 0.02);

struct AgreementOptions {
    std::vector<MapObject> maps;   // all must carry derivatives
    int points_per_map = 20;
    Schedule schedule = Schedule::defaults();
    std::uint64_t seed = 1;
    int threads = 1;
    double tol_abs = 0.05;
    double tol_rel = 0.05;
};

// Ball-divergence estimates against derivative-cocycle estimates at random
// points; also directional agreement on the cat map.
ExperimentReport run_agreement_experiment(const AgreementOptions& opt);

struct InvarianceOptions {
    int points = 10;
    int m_max = 5;
    Schedule schedule = Schedule::defaults();
    std::uint64_t seed = 1;
    int threads = 1;
    double tolerance = 0.05;
    double subadditivity_slack = 0.1;
};

// Constancy of the top estimate along orbits, with subadditivity
// spot-checks of the sampled suprema.
ExperimentReport run_invariance_experiment(const MapObject& m, const InvarianceOptions& opt);

struct LambdaJumpOptions {
    std::vector<int> n_list = {1, 2, 3, 4};
    double k = 1.0;
    MapObject base;                        // unit-disc map, identity on the boundary
    Domain ambient = Domain::flat_torus(1.0);
    Schedule schedule = Schedule::defaults();
    int quadrature_samples = 400;          // per map
    Quadrature::Source quadrature_source = Quadrature::Source::UniformRandom;
    std::uint64_t seed = 1;
    int threads = 1;
    double constancy_tol = 0.10;
    int distance_samples = 100000;
    int outside_control_points = 100;
};

// Disc families g_n shrink to the identity in the C0 distance while their
// integrated exponent stays put: the integrated functional jumps at the
// identity. Throws BaseMapNotChaotic when the measured mean exponent of
// the base map is <= 0.01.
ExperimentReport run_lambda_jump_experiment(const LambdaJumpOptions& opt);

struct OseledetsOptions {
    int points = 10;
    int horizon = 30;
    std::uint64_t seed = 1;
    double tol_unstable = 0.02;
    double tol_stable = 0.05;
};

// Growth trichotomy along the estimated splitting: +chi along e_u and a
// generic vector, -chi along e_s at moderate horizons.
ExperimentReport run_oseledets_experiment(const MapObject& m, const OseledetsOptions& opt);

// Sampled sup of log Delta over ball candidates at one (n, delta); used by
// the invariance experiment's subadditivity rows and by tests.
double sampled_sup_log_delta(const MapObject& m, Point2 x, int n, double delta,
                             int directions, const Ladder& ladder);

}  // namespace dynball
