#include "mpf/controller.hpp"

#include "mpf/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace mpf {

PathPointKinematics path_point_kinematics(const TargetState& tgt, TransportFrameField& field,
                                          double s) {
    PathPointKinematics k;
    k.frame = field.at(s);
    k.R_t = tgt.R;
    k.p_t = tgt.p;
    k.p_offset = tgt.R * field.table().pos(s);
    k.p_point = tgt.p + k.p_offset;
    k.v_t = tgt.v_inertial();
    k.w_t = tgt.w_inertial();
    k.f1_i = tgt.R * k.frame.f1;
    k.f2_i = tgt.R * k.frame.f2;
    k.f3_i = tgt.R * k.frame.f3;
    k.drift = k.v_t + k.w_t.cross(k.p_offset);
    return k;
}

Vec3 position_error(const Vec3& vehicle_p, const PathPointKinematics& kin) {
    return vehicle_p - kin.p_point;
}

Rot3 complete_frame_from_column(const Vec3& c1) {
    Vec3 c2 = Vec3::UnitX() - c1 * c1(0);
    if (c2.norm() < 1e-9) c2 = Vec3::UnitY() - c1 * c1(1);
    c2.normalize();
    return Rot3::from_columns(c1, c2, c1.cross(c2));
}

Rot3 steady_state_frame(const PathPointKinematics& kin, double airspeed) {
    const double w21 = kin.drift.dot(kin.f2_i) / airspeed;
    const double w31 = kin.drift.dot(kin.f3_i) / airspeed;
    const double r2 = w21 * w21 + w31 * w31;
    if (r2 >= 1.0 - 1e-9)
        throw AssumptionViolated("path point drifts across the tangent faster than the airspeed");
    const double w11 = std::sqrt(1.0 - r2);
    const Vec3 c1(w11, w21, w31);
    const double den = std::sqrt(w11 * w11 + w21 * w21);
    if (den < 1e-9) return complete_frame_from_column(c1); // unreachable past the gate
    const Vec3 c2(-w21 / den, w11 / den, 0.0);
    return Rot3::from_columns(c1, c2, c1.cross(c2));
}

Vec2 projected_cross_track(const Rot3& frame_i, const Vec3& p_tilde) {
    return Vec2(frame_i.col(1).dot(p_tilde), frame_i.col(2).dot(p_tilde));
}

Rot3 transient_frame(double alpha, double y, double z) {
    const double n1 = std::sqrt(alpha * alpha + y * y + z * z);
    const double n2 = std::sqrt(alpha * alpha + y * y);
    const Vec3 c1(alpha / n1, -y / n1, -z / n1);
    const Vec3 c2(y / n2, alpha / n2, 0.0);
    return Rot3::from_columns(c1, c2, c1.cross(c2));
}

DesiredFrames desired_frames(const PathPointKinematics& kin, const Gains& g, double airspeed,
                             const Vec3& p_tilde) {
    DesiredFrames out;
    out.R_f_t = kin.frame.basis();
    out.R_wd_f = steady_state_frame(kin, airspeed);
    out.R_wd_i = kin.R_t * out.R_f_t * out.R_wd_f;
    out.cross_track = projected_cross_track(out.R_wd_i, p_tilde);
    out.R_d_wd = transient_frame(g.alpha, out.cross_track(0), out.cross_track(1));
    out.R_d_i = out.R_wd_i * out.R_d_wd;
    return out;
}

AttitudeError attitude_error(const Rot3& R_d_i, const Rot3& R_w_i) {
    AttitudeError out;
    out.R_err = R_d_i.transposed() * R_w_i;
    const Mat3& r = out.R_err.matrix();
    out.psi = 0.5 * (1.0 - r(0, 0));
    out.e = 0.5 * Vec2(r(0, 2), -r(0, 1));
    return out;
}

double sdot_law(const Gains& g, const Vec3& p_tilde, double airspeed, const Vec3& heading_i,
                const PathPointKinematics& kin) {
    return (g.kp * p_tilde + airspeed * heading_i - kin.drift).dot(kin.f1_i);
}

Vec3 frame_rates_numeric(const Rot3& prev, const Rot3& cur, const Rot3& next, double dt) {
    return vee(skew_project(cur.matrix().transpose() * ((next.matrix() - prev.matrix()) / (2.0 * dt))));
}

Vec3 omega_desired_total(const FeedForwardRates& ff, const DesiredFrames& frames) {
    const Rot3 R_d_f = frames.R_wd_f * frames.R_d_wd;
    const Rot3 R_d_t = frames.R_f_t * R_d_f;
    return R_d_t.transposed() * ff.w_t_body + R_d_f.transposed() * ff.w_f_frame +
           frames.R_d_wd.transposed() * ff.w_wd_wd + ff.w_d_d;
}

Vec3 omega_ref(const AttitudeError& err, const FeedForwardRates& ff, const DesiredFrames& frames,
               const Gains& g) {
    const Vec3 feedback(0.0, -g.kr * err.e(0), -g.kr * err.e(1));
    return feedback + err.R_err.transposed() * omega_desired_total(ff, frames);
}

GainCertificate validate_gains(const Gains& g, const RoaParams& roa, double v_min, double v_max) {
    if (!(g.kp > 0.0) || !(g.kr > 0.0) || !(g.alpha > 0.0))
        throw std::invalid_argument("gain certificate: gains must be positive");
    if (!(v_min > 0.0) || !(v_max >= v_min))
        throw std::invalid_argument("gain certificate: need 0 < v_min <= v_max");
    if (!(roa.c1 > 0.0) || !(roa.c2 > 0.0) || !(roa.c2 < 0.5) || !(roa.cbar > 0.0) ||
        !(roa.cbar < 0.5))
        throw std::invalid_argument("gain certificate: region parameters out of range");

    GainCertificate cert;
    cert.gain_bound = std::min(g.kp, v_min / std::sqrt(g.alpha * g.alpha + roa.c1 * roa.c1));
    const double split = 1.0 - 2.0 * roa.c2;
    cert.lhs = cert.gain_bound * g.kr;
    cert.rhs = v_max * v_max / (roa.c1 * roa.c1 * split * split);

    const double k1 = roa.k1();
    cert.w11 = k1 * cert.gain_bound / split;
    cert.w12 = -k1 * v_max / (split * split);
    cert.w22 = g.kr / 2.0;
    const double mean = 0.5 * (cert.w11 + cert.w22);
    const double gap = 0.5 * (cert.w22 - cert.w11);
    cert.lambda_w_min = mean - std::sqrt(gap * gap + cert.w12 * cert.w12);
    cert.lambda_m2_max = std::max(k1, 1.0 / (1.0 - roa.c2));
    cert.lambda = cert.lambda_w_min / cert.lambda_m2_max;
    cert.ok = cert.lhs > cert.rhs && cert.lambda_w_min > 0.0;
    return cert;
}

double lyapunov_value(const Vec3& p_tilde, double psi, const RoaParams& roa) {
    return p_tilde.squaredNorm() / (4.0 * roa.c1 * roa.c1) + psi;
}

bool roa_membership(const Vec3& p_tilde, double psi, const RoaParams& roa) {
    return lyapunov_value(p_tilde, psi, roa) <= roa.cbar && p_tilde.norm() <= roa.c1;
}

} // namespace mpf
