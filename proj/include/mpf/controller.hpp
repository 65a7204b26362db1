#pragma once

#include "mpf/path.hpp"
#include "mpf/so3.hpp"
#include "mpf/target.hpp"

namespace mpf {

/// Guidance gains.
struct Gains {
    double kp = 4.0;    // position error gain [1/s]
    double kr = 2.0;    // attitude error gain [1/s]
    double alpha = 1.0; // approach distance shaping the correction frame [m]
};

/// Shape of the certified region of attraction for the combined error.
struct RoaParams {
    double c1 = 60.0;   // position error radius [m]
    double c2 = 0.05;   // heading error level used by the decay estimate
    double cbar = 0.49; // certified sublevel set of the combined function

    /// Quadratic weight tying the position error into the decay estimate.
    double k1() const { return (1.0 - 2.0 * c2) / (2.0 * c1 * c1); }
};

/// Snapshot of the moving path point at arc length s: the transport frame in
/// target coordinates plus everything already rotated into inertial axes.
struct PathPointKinematics {
    TransportFrame frame;          // transport frame, target coordinates
    Rot3 R_t;                      // target attitude
    Vec3 p_t = Vec3::Zero();       // target position, inertial
    Vec3 p_offset = Vec3::Zero();  // path point relative to target, inertial
    Vec3 p_point = Vec3::Zero();   // path point, inertial
    Vec3 v_t = Vec3::Zero();       // target velocity, inertial
    Vec3 w_t = Vec3::Zero();       // target angular velocity, inertial
    Vec3 f1_i, f2_i, f3_i;         // transport frame axes, inertial
    Vec3 drift = Vec3::Zero();     // velocity of the path point at frozen s
};

PathPointKinematics path_point_kinematics(const TargetState& tgt, TransportFrameField& field,
                                          double s);

/// Vehicle position minus path point, inertial coordinates.
Vec3 position_error(const Vec3& vehicle_p, const PathPointKinematics& kin);

/// Orthonormal completion when the nominal second column degenerates:
/// projects the tangent axis out of c1 and rebuilds the triad from it.
Rot3 complete_frame_from_column(const Vec3& c1);

/// Frame whose first axis tilts the airspeed vector so the path point holds
/// station against the drift of the moving path, expressed in transport
/// coordinates. Exactly the identity for a stationary target. Throws
/// AssumptionViolated when the drift is too fast for the airspeed.
Rot3 steady_state_frame(const PathPointKinematics& kin, double airspeed);

/// Cross-track components (y, z) of the position error on axes 2 and 3 of
/// the given frame.
Vec2 projected_cross_track(const Rot3& frame_i, const Vec3& p_tilde);

/// Correction frame steering the velocity back toward the path: first axis
/// (alpha, -y, -z) normalized, second axis horizontal in the local frame.
/// Exactly the identity at zero cross-track error.
Rot3 transient_frame(double alpha, double y, double z);

/// All frames in the desired-attitude chain plus the cross-track error that
/// shaped the correction frame.
struct DesiredFrames {
    Rot3 R_f_t;            // transport frame in target coordinates
    Rot3 R_wd_f;           // station-holding frame in transport coordinates
    Rot3 R_d_wd;           // correction frame in station-holding coordinates
    Rot3 R_wd_i;           // station-holding frame, inertial
    Rot3 R_d_i;            // desired vehicle attitude, inertial
    Vec2 cross_track = Vec2::Zero(); // (y, z) seen by the correction frame
};

DesiredFrames desired_frames(const PathPointKinematics& kin, const Gains& g, double airspeed,
                             const Vec3& p_tilde);

/// Reduced attitude error between desired and actual heading axes.
/// psi is 0 when aligned and 1 when opposite; e holds the components of the
/// error that the rate command can act on, |e|^2 == psi (1 - psi).
struct AttitudeError {
    Rot3 R_err;              // desired-to-actual relative rotation
    double psi = 0.0;
    Vec2 e = Vec2::Zero();
};

AttitudeError attitude_error(const Rot3& R_d_i, const Rot3& R_w_i);

/// Progression rate of the path point: projection on the tangent of the
/// position feedback plus the station-keeping velocity mismatch.
double sdot_law(const Gains& g, const Vec3& p_tilde, double airspeed, const Vec3& heading_i,
                const PathPointKinematics& kin);

/// Body angular rate recovered from three attitude samples by a central
/// difference; second order in dt.
Vec3 frame_rates_numeric(const Rot3& prev, const Rot3& cur, const Rot3& next, double dt);

/// Angular rates of each link in the desired-attitude chain, each expressed
/// in its own frame.
struct FeedForwardRates {
    Vec3 w_t_body = Vec3::Zero();  // target frame rate, target coordinates
    Vec3 w_f_frame = Vec3::Zero(); // transport frame rate, frame coordinates
    Vec3 w_wd_wd = Vec3::Zero();   // station-holding frame rate, own coordinates
    Vec3 w_d_d = Vec3::Zero();     // correction frame rate, own coordinates
};

/// Total angular velocity of the desired attitude, desired coordinates.
Vec3 omega_desired_total(const FeedForwardRates& ff, const DesiredFrames& frames);

/// Commanded body rate: feedback on the reduced attitude error plus the
/// desired-frame rate seen from the vehicle.
Vec3 omega_ref(const AttitudeError& err, const FeedForwardRates& ff, const DesiredFrames& frames,
               const Gains& g);

/// Closed-loop decay certificate for the chosen gains over an airspeed band.
struct GainCertificate {
    bool ok = false;
    double gain_bound = 0.0;    // effective position gain after projection loss
    double lhs = 0.0;           // product side of the gain inequality
    double rhs = 0.0;           // coupling side of the gain inequality
    double w11 = 0.0, w12 = 0.0, w22 = 0.0; // decay quadratic form
    double lambda_w_min = 0.0;  // smallest eigenvalue of the decay form
    double lambda_m2_max = 0.0; // largest eigenvalue of the comparison form
    double lambda = 0.0;        // certified exponential decay rate of V
};

GainCertificate validate_gains(const Gains& g, const RoaParams& roa, double v_min, double v_max);

/// Combined error function V = |p_tilde|^2 / (4 c1^2) + psi.
double lyapunov_value(const Vec3& p_tilde, double psi, const RoaParams& roa);

/// Non-strict membership in the certified region: V <= cbar and |p| <= c1.
bool roa_membership(const Vec3& p_tilde, double psi, const RoaParams& roa);

} // namespace mpf
