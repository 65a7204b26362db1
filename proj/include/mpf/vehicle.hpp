#pragma once

#include "mpf/so3.hpp"

#include <vector>

namespace mpf {

/// First-order lag between commanded and achieved body rates,
/// w_dot = -bandwidth * (w - ref). Stepped by exact discretization, so
/// splitting a step never changes the result.
struct AutopilotState {
    double bandwidth = 10.0; // inverse lag time constant [1/s]
    bool perfect = false;    // bypass the lag entirely
    Vec3 w = Vec3::Zero();   // achieved body rate [rad/s]
};

/// Achieved rate tau seconds into an interval that holds ref fixed.
Vec3 autopilot_response_at(const AutopilotState& ap, const Vec3& ref, double tau);

/// Advance the lag by dt under the held command ref.
void step_autopilot(AutopilotState& ap, const Vec3& ref, double dt);

/// Axis-aligned box (closed) carrying a constant wind inside.
struct WindBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();
    Vec3 wind = Vec3::Zero();
};

/// Closed time window carrying a constant wind everywhere.
struct WindGust {
    double t0 = 0.0;
    double t1 = 0.0;
    Vec3 wind = Vec3::Zero();
};

/// Sum of all active wind contributions at a position and time.
struct WindField {
    std::vector<WindBox> boxes;
    std::vector<WindGust> gusts;

    Vec3 sample(const Vec3& p, double t) const;
    bool empty() const { return boxes.empty() && gusts.empty(); }
};

/// Rigid-body vehicle flying at constant airspeed along its body x-axis.
struct VehicleState {
    Vec3 p = Vec3::Zero();
    Rot3 R;
    double v = 15.0; // airspeed [m/s]

    /// Inertial velocity under wind eta.
    Vec3 velocity(const Vec3& eta) const { return v * R.col(0) + eta; }
};

/// Advance the pose by dt under constant body rate w and constant wind eta.
/// The attitude update is the exact exponential and the position update
/// integrates the rotating airspeed vector in closed form, so the step is
/// exact for the held inputs and supports negative dt.
VehicleState step_vehicle(const VehicleState& st, const Vec3& w, const Vec3& eta, double dt);

} // namespace mpf
