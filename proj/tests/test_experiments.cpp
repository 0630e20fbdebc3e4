#include <cmath>

#include "doctest.h"
#include "dynball/experiments.hpp"

using namespace dynball;

namespace {

const CheckRow* find_check(const ExperimentReport& r, const std::string& name) {
    for (const CheckRow& c : r.checks)
        if (c.name == name) return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("example experiment reproduces the three line rates") {
    const ExperimentReport rep = run_example_experiment(Schedule::defaults());
    CHECK(rep.overall_pass());
    CHECK(rep.checks.size() >= 5);

    const CheckRow* diag = find_check(rep, "directional_diagonal");
    REQUIRE(diag != nullptr);
    CHECK(std::abs(diag->measured - std::log(2.0)) <= 0.02);

    const CheckRow* vert = find_check(rep, "directional_vertical");
    REQUIRE(vert != nullptr);
    CHECK(std::abs(vert->measured + std::log(2.0)) <= 0.02);

    const CheckRow* horiz = find_check(rep, "directional_horizontal");
    REQUIRE(horiz != nullptr);
    CHECK(std::abs(horiz->measured - std::log(3.0)) <= 0.02);

    const CheckRow* top = find_check(rep, "top");
    REQUIRE(top != nullptr);
    CHECK(std::abs(top->measured - std::log(3.0)) <= 0.02);
    CHECK(top->measured >= diag->measured - 1e-12);
    CHECK(top->measured >= vert->measured - 1e-12);

    // grid artifacts for the three lines and the top
    CHECK(rep.artifacts.size() == 4);
    for (const Table& t : rep.artifacts) {
        CHECK(t.columns.size() == 5);
        CHECK(!t.rows.empty());
    }
}

TEST_CASE("agreement experiment on a small map set") {
    AgreementOptions opt;
    opt.maps = {make_cat_map(), make_identity(Domain::flat_torus(1.0)), make_rotation(0.73)};
    opt.points_per_map = 5;
    opt.seed = 21;
    const ExperimentReport rep = run_agreement_experiment(opt);
    CHECK(rep.overall_pass());
    CHECK(find_check(rep, "top_agreement_cat") != nullptr);
    CHECK(find_check(rep, "directional_agreement_cat") != nullptr);
    CHECK(find_check(rep, "top_agreement_identity") != nullptr);
    REQUIRE(!rep.artifacts.empty());
    CHECK(rep.artifacts[0].rows.size() == 15);  // 3 maps x 5 points
}

TEST_CASE("invariance experiment: rotation at 1e-9, cat at 0.05") {
    InvarianceOptions opt;
    opt.points = 3;
    opt.m_max = 3;
    opt.seed = 5;

    opt.tolerance = 1e-9;
    const ExperimentReport rot = run_invariance_experiment(make_rotation(0.73), opt);
    CHECK(rot.overall_pass());

    opt.tolerance = 0.05;
    const ExperimentReport cat = run_invariance_experiment(make_cat_map(), opt);
    CHECK(cat.overall_pass());
    const CheckRow* sub = find_check(cat, "subadditivity_spot");
    REQUIRE(sub != nullptr);
    CHECK(sub->measured <= 0.1);
}

TEST_CASE("lambda jump experiment at reduced size") {
    LambdaJumpOptions opt;
    opt.base = make_disc_standin();
    opt.n_list = {1, 2};
    opt.quadrature_samples = 150;
    opt.distance_samples = 20000;
    opt.outside_control_points = 30;
    opt.seed = 33;
    opt.threads = 2;
    const ExperimentReport rep = run_lambda_jump_experiment(opt);
    CHECK(rep.overall_pass());
    CHECK(find_check(rep, "lambda_identity") != nullptr);
    CHECK(find_check(rep, "base_gate") != nullptr);
    CHECK(find_check(rep, "lambda_constancy_n2") != nullptr);
    CHECK(find_check(rep, "c0_distance_decreasing_2") != nullptr);

    const CheckRow* area = find_check(rep, "disc_area_n2");
    REQUIRE(area != nullptr);
    CHECK(std::abs(area->measured - M_PI / 100.0) <= 1e-12);
}

TEST_CASE("lambda jump rejects a non-chaotic base") {
    LambdaJumpOptions opt;
    opt.base = make_disc_standin(1e-3, 1e-3);  // nearly the identity
    opt.n_list = {1};
    opt.quadrature_samples = 100;
    opt.seed = 3;
    CHECK_THROWS_AS(run_lambda_jump_experiment(opt), BaseMapNotChaotic);
}

TEST_CASE("oseledets experiment on the cat map and the identity") {
    OseledetsOptions opt;
    opt.points = 4;
    opt.seed = 9;
    const ExperimentReport cat = run_oseledets_experiment(make_cat_map(), opt);
    CHECK(cat.overall_pass());
    CHECK(find_check(cat, "unstable_direction") != nullptr);
    CHECK(find_check(cat, "stable_direction") != nullptr);
    CHECK(find_check(cat, "generic_direction") != nullptr);

    const ExperimentReport id =
        run_oseledets_experiment(make_identity(Domain::flat_torus(1.0)), opt);
    CHECK(id.overall_pass());  // every point gated, no direction rows
    const CheckRow* gated = find_check(id, "gated_points");
    REQUIRE(gated != nullptr);
    CHECK(gated->measured == 4.0);
    CHECK(find_check(id, "unstable_direction") == nullptr);
}

TEST_CASE("reports serialize identically across thread counts") {
    AgreementOptions opt;
    opt.maps = {make_standard_map(1.5)};
    opt.points_per_map = 6;
    opt.seed = 77;

    opt.threads = 1;
    ExperimentReport a = run_agreement_experiment(opt);
    opt.threads = 4;
    ExperimentReport b = run_agreement_experiment(opt);

    // timing is environment noise; everything else must match bitwise
    a.wall_time_s = b.wall_time_s = 0.0;
    const ConfigEcho echo = {{"experiment", "agreement"}, {"seed", "77"}};
    CHECK(report_to_json(a, echo) == report_to_json(b, echo));
    CHECK(report_to_csv(a, echo) == report_to_csv(b, echo));
}

TEST_CASE("check rows carry their operations and pass flags are consistent") {
    const ExperimentReport rep = run_example_experiment(Schedule::defaults());
    bool all = true;
    for (const CheckRow& c : rep.checks) {
        CHECK(!c.op.empty());
        CHECK(!c.description.empty());
        all = all && c.pass;
    }
    CHECK(rep.overall_pass() == all);
}
