#pragma once

#include "mpf/so3.hpp"

#include <string>
#include <vector>

namespace mpf {

/// Body-frame velocity schedule of the moving target. Analytic kinds are
/// evaluated in closed form; Piecewise rows are held constant until the next
/// sample time (zero-order hold, clamped at both ends).
struct TargetProfile {
    enum class Kind { Maneuver, Constant, Piecewise };
    Kind kind = Kind::Maneuver;

    Vec3 v_const = Vec3::Zero();
    Vec3 w_const = Vec3::Zero();

    std::vector<double> times; // strictly increasing sample times
    std::vector<Vec3> v_rows;
    std::vector<Vec3> w_rows;

    Vec3 linear(double t) const;  // body-frame linear velocity [m/s]
    Vec3 angular(double t) const; // body-frame angular velocity [rad/s]
};

/// Weaving reference maneuver: forward speed oscillates between 3 and
/// 3*sqrt(5) m/s with a slow pitch wobble and a matched heading weave.
TargetProfile weaving_maneuver_profile();
TargetProfile constant_profile(const Vec3& v, const Vec3& w);
/// Validated zero-order-hold profile from explicit samples.
TargetProfile piecewise_profile(std::vector<double> times, std::vector<Vec3> v_rows,
                                std::vector<Vec3> w_rows);
/// Load a piecewise profile from CSV with header "t,vx,vy,vz,wx,wy,wz".
TargetProfile load_profile_csv(const std::string& file);

/// Target pose and body velocities at time t.
struct TargetState {
    double t = 0.0;
    Vec3 p = Vec3::Zero();
    Rot3 R;
    Vec3 v_body = Vec3::Zero();
    Vec3 w_body = Vec3::Zero();

    Vec3 v_inertial() const { return R * v_body; }
    Vec3 w_inertial() const { return R * w_body; }
    double speed() const { return v_body.norm(); }
};

TargetState make_target_state(const TargetProfile& prof, double t, const Vec3& p, const Rot3& R);

/// Advance the target pose by dt (negative dt integrates backwards). Fourth
/// order in dt; the returned attitude is reorthonormalized.
TargetState step_target(const TargetProfile& prof, const TargetState& st, double dt);

} // namespace mpf
