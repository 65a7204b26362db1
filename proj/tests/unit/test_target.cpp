#include "doctest.h"

#include "mpf/target.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace mpf;

namespace {

// closed-form pose for constant body rates v = (5,0,0), w = (0,0,1)
void circle_pose(double t, Vec3& p, Mat3& r) {
    p = Vec3(5.0 * std::sin(t), 5.0 * (1.0 - std::cos(t)), 0.0);
    r = exp_so3(Vec3(0.0, 0.0, t)).matrix();
}

TargetState roll_forward(const TargetProfile& prof, TargetState st, double T, double dt) {
    const long n = std::lround(T / dt);
    for (long i = 0; i < n; ++i) st = step_target(prof, st, dt);
    return st;
}

} // namespace

TEST_SUITE("target") {

TEST_CASE("weaving maneuver hits frozen sample values") {
    const TargetProfile prof = weaving_maneuver_profile();
    CHECK(std::abs(prof.linear(0.0)(0) - 6.708203932499369) <= 1e-12);
    CHECK(prof.linear(0.0)(1) == 0.0);
    CHECK(prof.linear(0.0)(2) == 0.0);
    CHECK(std::abs(prof.angular(0.0)(1) + 0.001) <= 1e-15);
    CHECK(std::abs(prof.angular(0.0)(2)) <= 1e-15);

    const double t = 5.0 * M_PI; // quarter period of the speed oscillation
    CHECK(std::abs(prof.linear(t)(0) - 4.242640687119285) <= 1e-12);
    CHECK(std::abs(prof.angular(t)(1) + 0.001 * 0.8910065241883679) <= 1e-15);
    CHECK(std::abs(prof.angular(t)(2) + 0.03535533905932738) <= 1e-15);
}

TEST_CASE("weaving maneuver speed stays within its band") {
    const TargetProfile prof = weaving_maneuver_profile();
    const double hi = 3.0 * std::sqrt(5.0);
    for (double t = 0.0; t < 300.0; t += 0.37) {
        const double v = prof.linear(t).norm();
        CHECK(v >= 3.0 - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("constant-rate integration matches the closed-form circle") {
    const TargetProfile prof = constant_profile(Vec3(5.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.0));
    TargetState st = make_target_state(prof, 0.0, Vec3::Zero(), Rot3());
    CHECK((st.v_body - Vec3(5.0, 0.0, 0.0)).norm() == 0.0);

    st = roll_forward(prof, st, 10.0, 0.01);
    Vec3 p_ref;
    Mat3 r_ref;
    circle_pose(10.0, p_ref, r_ref);
    CHECK((st.p - p_ref).norm() <= 1e-8);
    CHECK((st.R.matrix() - r_ref).norm() <= 1e-8);
    CHECK(orthonormality_error(st.R.matrix()) <= 1e-12);
}

TEST_CASE("pose integration is fourth order in the step size") {
    const TargetProfile prof = constant_profile(Vec3(5.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.0));
    const double T = 2.0;
    Vec3 p_ref;
    Mat3 r_ref;
    circle_pose(T, p_ref, r_ref);

    double err[3];
    const double hs[3] = {0.2, 0.1, 0.05};
    for (int i = 0; i < 3; ++i) {
        const TargetState st = roll_forward(prof, make_target_state(prof, 0.0, Vec3::Zero(), Rot3()),
                                            T, hs[i]);
        err[i] = (st.p - p_ref).norm() + (st.R.matrix() - r_ref).norm();
    }
    CHECK(std::log2(err[0] / err[1]) >= 3.9);
    CHECK(std::log2(err[1] / err[2]) >= 3.9);
}

TEST_CASE("weaving integration is step-size insensitive at working resolution") {
    const TargetProfile prof = weaving_maneuver_profile();
    const TargetState s0 = make_target_state(prof, 0.0, Vec3::Zero(), rot_zyx(0.0, 0.0, M_PI / 4));
    const TargetState a = roll_forward(prof, s0, 10.0, 0.01);
    const TargetState b = roll_forward(prof, s0, 10.0, 0.001);
    CHECK((a.p - b.p).norm() <= 1e-8);
    CHECK((a.R.matrix() - b.R.matrix()).norm() <= 1e-8);
}

TEST_CASE("negative steps integrate backwards") {
    const TargetProfile prof = weaving_maneuver_profile();
    TargetState st = make_target_state(prof, 3.0, Vec3(1.0, 2.0, 3.0), rot_zyx(0.2, -0.1, 0.7));
    const TargetState fwd = step_target(prof, st, 0.01);
    const TargetState back = step_target(prof, fwd, -0.01);
    CHECK(back.t == doctest::Approx(3.0).epsilon(1e-15));
    CHECK((back.p - st.p).norm() <= 1e-12);
    CHECK((back.R.matrix() - st.R.matrix()).norm() <= 1e-12);
}

TEST_CASE("piecewise profile holds each row until the next sample") {
    const TargetProfile prof = piecewise_profile(
        {0.0, 1.0, 2.0},
        {Vec3(1, 0, 0), Vec3(2, 0, 0), Vec3(3, 0, 0)},
        {Vec3::Zero(), Vec3::Zero(), Vec3(0, 0, 0.5)});
    CHECK(prof.linear(-0.5)(0) == 1.0); // clamped before the first sample
    CHECK(prof.linear(0.0)(0) == 1.0);
    CHECK(prof.linear(0.999)(0) == 1.0);
    CHECK(prof.linear(1.0)(0) == 2.0);
    CHECK(prof.linear(1.5)(0) == 2.0);
    CHECK(prof.linear(99.0)(0) == 3.0); // clamped after the last sample
    CHECK(prof.angular(1.5)(2) == 0.0);
    CHECK(prof.angular(2.2)(2) == 0.5);

    // integration inside one hold interval is exact
    TargetState st = make_target_state(prof, 0.2, Vec3::Zero(), Rot3());
    st = step_target(prof, st, 0.3);
    st = step_target(prof, st, 0.3);
    CHECK(std::abs(st.p(0) - 0.6) <= 1e-15);
}

TEST_CASE("piecewise profile validation rejects bad input") {
    CHECK_THROWS_AS(piecewise_profile({}, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(piecewise_profile({0.0, 0.0}, {Vec3::Zero(), Vec3::Zero()},
                                      {Vec3::Zero(), Vec3::Zero()}),
                    std::invalid_argument);
    CHECK_THROWS_AS(piecewise_profile({0.0, 1.0}, {Vec3::Zero()}, {Vec3::Zero(), Vec3::Zero()}),
                    std::invalid_argument);
}

TEST_CASE("profile CSV loads rows and rejects a bad header") {
    const char* file = "/tmp/mpf_test_profile.csv";
    {
        std::ofstream out(file);
        out << "t,vx,vy,vz,wx,wy,wz\n";
        out << "0,1,0,0,0,0,0\n";
        out << "2.5,0,2,0,0,0,0.1\n";
    }
    const TargetProfile prof = load_profile_csv(file);
    CHECK(prof.times.size() == 2);
    CHECK(prof.linear(1.0)(0) == 1.0);
    CHECK(prof.linear(3.0)(1) == 2.0);
    CHECK(prof.angular(3.0)(2) == 0.1);

    {
        std::ofstream out(file);
        out << "time,vx,vy,vz,wx,wy,wz\n0,1,0,0,0,0,0\n";
    }
    CHECK_THROWS_AS(load_profile_csv(file), std::invalid_argument);
    std::remove(file);
}

} // TEST_SUITE
