#include "doctest.h"

#include "mpf/config.hpp"

#include <cmath>
#include <fstream>
#include <string>

using namespace mpf;

namespace {

bool throws_mentioning(const std::string& text, const std::string& needle) {
    try {
        parse_scenario_json(text);
    } catch (const std::invalid_argument& ex) {
        return std::string(ex.what()).find(needle) != std::string::npos;
    }
    return false;
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("a full scenario parses field by field") {
    const std::string text = R"({
        "name": "demo",
        "path": {"kind": "circle", "radius": 60.0},
        "target": {
            "profile": {"kind": "piecewise", "rows": [
                {"t": 0.0, "v": [2, 0, 0], "w": [0, 0, 0.01]},
                {"t": 5.0, "v": [3, 0, 0]}
            ]},
            "p0": [1, 2, 3],
            "rpy0": [0, 0, 0.5]
        },
        "vehicle": {"p0": [-10, 0, 0], "rpy0": [0, 0.1, 1.0], "airspeed": 18},
        "gains": {"kp": 3.0, "kr": 1.5, "alpha": 2.0},
        "roa": {"c1": 50.0, "c2": 0.04, "cbar": 0.45},
        "autopilot": {"bandwidth": 5.0, "perfect": false},
        "wind": {
            "boxes": [{"min": [0, 0, -5], "max": [10, 10, 5], "velocity": [5, 0, 0]}],
            "gust": {"t_start": 1.0, "t_end": 2.0, "velocity": [0, 1, 0]}
        },
        "sim": {"dt": 0.02, "duration": 40.0, "s0": 3.0, "strict": true}
    })";
    const Scenario sc = parse_scenario_json(text);
    CHECK(sc.name == "demo");
    CHECK(sc.path.kind == PathSpec::Kind::Circle);
    CHECK(sc.path.radius == 60.0);
    CHECK((sc.target.linear(6.0) - Vec3(3.0, 0.0, 0.0)).norm() == 0.0);
    CHECK((sc.target.angular(1.0) - Vec3(0.0, 0.0, 0.01)).norm() == 0.0);
    CHECK((sc.target_p0 - Vec3(1.0, 2.0, 3.0)).norm() == 0.0);
    CHECK((sc.target_R0.matrix() - rot_zyx(0.0, 0.0, 0.5).matrix()).norm() == 0.0);
    CHECK((sc.vehicle_p0 - Vec3(-10.0, 0.0, 0.0)).norm() == 0.0);
    CHECK(sc.airspeed == 18.0);
    CHECK(sc.gains.kp == 3.0);
    CHECK(sc.gains.alpha == 2.0);
    CHECK(sc.roa.cbar == 0.45);
    CHECK(sc.bandwidth == 5.0);
    REQUIRE(sc.wind.boxes.size() == 1);
    CHECK((sc.wind.boxes[0].wind - Vec3(5.0, 0.0, 0.0)).norm() == 0.0);
    REQUIRE(sc.wind.gusts.size() == 1);
    CHECK(sc.wind.gusts[0].t1 == 2.0);
    CHECK(sc.sim.dt == 0.02);
    CHECK(sc.sim.duration == 40.0);
    CHECK(sc.sim.s0 == 3.0);
    CHECK(sc.sim.strict);
}

TEST_CASE("an empty object yields the reference scenario") {
    const Scenario sc = parse_scenario_json("{}");
    CHECK(sc.name == "run");
    CHECK(sc.path.kind == PathSpec::Kind::Lemniscate);
    CHECK(sc.path.scale == 50.0);
    CHECK(sc.airspeed == 15.0);
    CHECK(sc.gains.kp == 4.0);
    CHECK(sc.bandwidth == 10.0);
    CHECK(sc.sim.dt == 0.01);
    CHECK(sc.sim.duration == 500.0);
    CHECK_FALSE(sc.sim.strict);
    CHECK((sc.target_R0.matrix() - rot_zyx(0.0, 0.0, M_PI / 4).matrix()).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK((sc.vehicle_R0.matrix() - rot_zyx(0.0, 0.0, M_PI / 2).matrix()).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(sc.target.linear(0.0).norm() == doctest::Approx(6.708203932499369).epsilon(1e-14));
}

TEST_CASE("comments are allowed and unknown keys are named in errors") {
    const Scenario sc = parse_scenario_json("{\n// reference run\n\"name\": \"c\"\n}");
    CHECK(sc.name == "c");
    CHECK(throws_mentioning(R"({"paths": {}})", "paths"));
    CHECK(throws_mentioning(R"({"gains": {"kpp": 1}})", "kpp"));
    CHECK(throws_mentioning(R"({"wind": {"boxes": [{"mid": [0,0,0]}]}})", "mid"));
}

TEST_CASE("named target profiles resolve") {
    const Scenario weaving = parse_scenario_json(R"({"target": {"profile": "weaving"}})");
    CHECK(weaving.target.linear(0.0).norm() > 6.7);
    const Scenario still = parse_scenario_json(R"({"target": {"profile": "stationary"}})");
    CHECK(still.target.linear(10.0).norm() == 0.0);
    CHECK(still.target.angular(10.0).norm() == 0.0);
    CHECK_THROWS_AS(parse_scenario_json(R"({"target": {"profile": "dance"}})"),
                    std::invalid_argument);
}

TEST_CASE("relative file references resolve against the config directory") {
    {
        std::ofstream out("/tmp/mpf_cfg_path.csv");
        out << "u,x,y,z\n";
        for (int i = 0; i <= 10; ++i) out << i << "," << i << "," << 0 << "," << 0 << "\n";
    }
    {
        std::ofstream out("/tmp/mpf_cfg_profile.csv");
        out << "t,vx,vy,vz,wx,wy,wz\n0,1,0,0,0,0,0\n5,2,0,0,0,0,0\n";
    }
    const std::string text = R"({
        "path": {"kind": "sampled", "file": "mpf_cfg_path.csv"},
        "target": {"profile": {"kind": "file", "file": "mpf_cfg_profile.csv"}}
    })";
    const Scenario sc = parse_scenario_json(text, "/tmp");
    CHECK(sc.path.kind == PathSpec::Kind::Sampled);
    CHECK((sc.target.linear(6.0) - Vec3(2.0, 0.0, 0.0)).norm() == 0.0);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_scenario_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(R"({"vehicle": {"p0": [1, 2]}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(R"({"vehicle": {"airspeed": -3}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(R"({"autopilot": {"bandwidth": 0}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_scenario_json(R"({"wind": {"gust": {"t_start": 2, "t_end": 1, "velocity": [1,0,0]}}})"),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_json(R"({"path": {"kind": "sampled"}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_scenario_json(R"({"wind": {"boxes": [{"min": [1,0,0], "max": [0,9,9]}]}})"),
        std::invalid_argument);
}

} // TEST_SUITE
