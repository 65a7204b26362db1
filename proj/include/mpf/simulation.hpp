#pragma once

#include "mpf/controller.hpp"
#include "mpf/path.hpp"
#include "mpf/target.hpp"
#include "mpf/vehicle.hpp"

#include <string>
#include <vector>

namespace mpf {

/// Integration and logging cadence of one run.
struct SimConfig {
    double dt = 0.01;        // step [s]
    double duration = 500.0; // total simulated time [s]
    double s0 = 0.0;         // initial arc length of the path point [m]
    bool strict = false;     // abort when the start lies outside the certified region
};

/// Everything that determines one closed-loop run.
struct Scenario {
    std::string name = "run";
    PathSpec path = lemniscate_path(50.0, 0.01);
    TargetProfile target = weaving_maneuver_profile();
    Vec3 target_p0 = Vec3(0.0, 0.0, 5.0);
    Rot3 target_R0 = rot_zyx(0.0, 0.0, 0.7853981633974483);
    Vec3 vehicle_p0 = Vec3(-50.0, 0.0, 0.0);
    Rot3 vehicle_R0 = rot_zyx(0.0, 0.0, 1.5707963267948966);
    double airspeed = 15.0;
    Gains gains;
    RoaParams roa;
    double bandwidth = 10.0; // autopilot pole [1/s]
    bool perfect = false;    // bypass the autopilot lag
    WindField wind;
    SimConfig sim;
};

/// One row of the primary per-step log.
struct LogRow {
    double t = 0.0;
    Vec3 p = Vec3::Zero();   // vehicle position, inertial
    Vec3 p_t = Vec3::Zero(); // target position, inertial
    Vec3 ep = Vec3::Zero();  // position error, inertial
    double ep_norm = 0.0;
    double yw = 0.0, zw = 0.0; // cross-track components
    double s = 0.0, sdot = 0.0;
    double psi = 0.0, er_norm = 0.0;
    Vec2 wref = Vec2::Zero(); // commanded rates about body axes 2, 3
    Vec2 w = Vec2::Zero();    // achieved rates
    double wtil_norm = 0.0;   // rate tracking error norm
    Vec3 eta = Vec3::Zero();  // wind at the vehicle
    double V = 0.0;
    int roa = 0;
};

/// Per-step frame data backing the deeper trajectory checks.
struct FrameRow {
    double t = 0.0;
    Mat3 R_W = Mat3::Identity(); // vehicle attitude
    Mat3 R_D = Mat3::Identity(); // desired attitude
    Mat3 R_T = Mat3::Identity(); // target attitude
    Mat3 R_F = Mat3::Identity(); // transport basis, target coordinates
    double k1 = 0.0, k2 = 0.0;
    double er2 = 0.0, er3 = 0.0; // attitude error components
    Vec3 w_ft = Vec3::Zero();    // transport frame rate, frame coordinates
    Vec3 w_di = Vec3::Zero();    // desired attitude rate, desired coordinates
    Vec3 w_t_body = Vec3::Zero();
    Vec3 v_t_body = Vec3::Zero();
};

/// Run parameters a verification pass needs after a round trip through disk.
struct LogMeta {
    std::string name = "run";
    double dt = 0.01;
    double airspeed = 15.0;
    Gains gains;
    RoaParams roa;
    double bandwidth = 10.0;
    bool perfect = false;
    bool windy = false;
};

struct TrajectoryLog {
    LogMeta meta;
    GainCertificate cert;
    std::vector<LogRow> rows;
    std::vector<FrameRow> frames;
};

/// Closed-loop run: controller, autopilot lag, wind, and moving path point,
/// logged every dt. Deterministic for a fixed scenario. Throws
/// AssumptionViolated (annotated with step and time) when the path point
/// drifts faster than the airspeed; std::invalid_argument on bad scenario
/// numbers; std::runtime_error if the state stops being finite.
TrajectoryLog run_simulation(const Scenario& sc);

/// One verification outcome. worst is the largest residual seen and tol the
/// bound it was held to (already including any tolerance scale).
struct CheckResult {
    std::string name;
    bool pass = false;
    double worst = 0.0;
    double tol = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

/// Trajectory-level invariant suite. Frame-dependent checks run only when
/// the log carries frame rows; tol_scale relaxes or tightens every bound.
VerifyReport verify_invariants(const TrajectoryLog& log, double tol_scale = 1.0);

/// Mean position-error norm over the last fifth of the run.
double steady_state_residual(const TrajectoryLog& log);

struct SweepRow {
    double bandwidth = 0.0;
    bool perfect = false;
    double residual = 0.0;
};

/// Re-run the scenario once per autopilot bandwidth (in parallel) and report
/// steady-state residuals in input order, optionally ending with a
/// perfect-autopilot row.
std::vector<SweepRow> sweep_bandwidth(const Scenario& sc, const std::vector<double>& bandwidths,
                                      bool include_perfect = false);

} // namespace mpf
