#include "mpf/vehicle.hpp"

#include <cmath>

namespace mpf {

Vec3 autopilot_response_at(const AutopilotState& ap, const Vec3& ref, double tau) {
    if (ap.perfect) return ref;
    return ref + std::exp(-ap.bandwidth * tau) * (ap.w - ref);
}

void step_autopilot(AutopilotState& ap, const Vec3& ref, double dt) {
    ap.w = autopilot_response_at(ap, ref, dt);
}

Vec3 WindField::sample(const Vec3& p, double t) const {
    Vec3 acc = Vec3::Zero();
    for (const WindBox& b : boxes)
        if ((p.array() >= b.lo.array()).all() && (p.array() <= b.hi.array()).all()) acc += b.wind;
    for (const WindGust& g : gusts)
        if (t >= g.t0 && t <= g.t1) acc += g.wind;
    return acc;
}

VehicleState step_vehicle(const VehicleState& st, const Vec3& w, const Vec3& eta, double dt) {
    const Mat3 k = hat(w).matrix();
    const double n2 = w.squaredNorm();
    const double th = std::sqrt(n2) * std::abs(dt);
    // E = integral of exp(tau * hat(w)) over [0, dt]
    Mat3 e;
    if (th < 1e-6) {
        e = dt * Mat3::Identity() + (dt * dt / 2) * k + (dt * dt * dt / 6) * (k * k);
    } else {
        const double n = std::sqrt(n2);
        e = dt * Mat3::Identity() + ((1 - std::cos(n * dt)) / n2) * k +
            ((dt - std::sin(n * dt) / n) / n2) * (k * k);
    }
    VehicleState out = st;
    out.p = st.p + eta * dt + st.v * (st.R.matrix() * (e * Vec3::UnitX()));
    out.R = st.R * exp_so3(dt * w);
    return out;
}

} // namespace mpf
