#include "mpf/target.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpf {

namespace {

size_t zoh_row(const std::vector<double>& times, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    return size_t(std::clamp(long(it - times.begin()) - 1L, 0L, long(times.size()) - 1L));
}

} // namespace

Vec3 TargetProfile::linear(double t) const {
    switch (kind) {
    case Kind::Maneuver: {
        const double c = std::cos(0.1 * t) + 1.0;
        return Vec3(3.0 * std::sqrt(c * c + 1.0), 0.0, 0.0);
    }
    case Kind::Constant:
        return v_const;
    case Kind::Piecewise:
        return v_rows[zoh_row(times, t)];
    }
    return Vec3::Zero();
}

Vec3 TargetProfile::angular(double t) const {
    switch (kind) {
    case Kind::Maneuver: {
        const double c = std::cos(0.1 * t) + 1.0;
        const double q = c * c + 1.0;
        return Vec3(0.0, -0.001 * std::cos(0.03 * t), -std::sin(0.1 * t) / (10.0 * q * std::sqrt(q)));
    }
    case Kind::Constant:
        return w_const;
    case Kind::Piecewise:
        return w_rows[zoh_row(times, t)];
    }
    return Vec3::Zero();
}

TargetProfile weaving_maneuver_profile() {
    TargetProfile p;
    p.kind = TargetProfile::Kind::Maneuver;
    return p;
}

TargetProfile constant_profile(const Vec3& v, const Vec3& w) {
    TargetProfile p;
    p.kind = TargetProfile::Kind::Constant;
    p.v_const = v;
    p.w_const = w;
    return p;
}

TargetProfile piecewise_profile(std::vector<double> times, std::vector<Vec3> v_rows,
                                std::vector<Vec3> w_rows) {
    if (times.empty() || times.size() != v_rows.size() || times.size() != w_rows.size())
        throw std::invalid_argument("piecewise profile: need matching, nonempty samples");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("piecewise profile: times must be strictly increasing");
    TargetProfile p;
    p.kind = TargetProfile::Kind::Piecewise;
    p.times = std::move(times);
    p.v_rows = std::move(v_rows);
    p.w_rows = std::move(w_rows);
    return p;
}

TargetProfile load_profile_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("target profile: cannot open " + file);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("target profile: empty file " + file);
    std::string header = line;
    header.erase(std::remove_if(header.begin(), header.end(), [](char c) { return c == ' ' || c == '\r'; }),
                 header.end());
    if (header != "t,vx,vy,vz,wx,wy,wz")
        throw std::invalid_argument("target profile: expected header t,vx,vy,vz,wx,wy,wz in " + file);
    std::vector<double> times;
    std::vector<Vec3> vs, ws;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double vals[7];
        std::string cell;
        for (int i = 0; i < 7; ++i) {
            if (!std::getline(ls, cell, ','))
                throw std::invalid_argument("target profile: short row in " + file);
            vals[i] = std::stod(cell);
        }
        times.push_back(vals[0]);
        vs.emplace_back(vals[1], vals[2], vals[3]);
        ws.emplace_back(vals[4], vals[5], vals[6]);
    }
    return piecewise_profile(std::move(times), std::move(vs), std::move(ws));
}

TargetState make_target_state(const TargetProfile& prof, double t, const Vec3& p, const Rot3& R) {
    TargetState st;
    st.t = t;
    st.p = p;
    st.R = R;
    st.v_body = prof.linear(t);
    st.w_body = prof.angular(t);
    return st;
}

TargetState step_target(const TargetProfile& prof, const TargetState& st, double dt) {
    // classic RK4 on the coupled pose (p, R); fourth order as long as the
    // profile is smooth across the step
    const Mat3 r0 = st.R.matrix();
    const auto dp = [&](double t, const Mat3& r) { return Vec3(r * prof.linear(t)); };
    const auto dr = [&](double t, const Mat3& r) { return Mat3(r * hat(prof.angular(t)).matrix()); };

    const double t0 = st.t, tm = st.t + dt / 2, t1 = st.t + dt;
    const Vec3 pk1 = dp(t0, r0);
    const Mat3 rk1 = dr(t0, r0);
    const Vec3 pk2 = dp(tm, r0 + dt / 2 * rk1);
    const Mat3 rk2 = dr(tm, r0 + dt / 2 * rk1);
    const Vec3 pk3 = dp(tm, r0 + dt / 2 * rk2);
    const Mat3 rk3 = dr(tm, r0 + dt / 2 * rk2);
    const Vec3 pk4 = dp(t1, r0 + dt * rk3);
    const Mat3 rk4 = dr(t1, r0 + dt * rk3);

    TargetState out;
    out.t = t1;
    out.p = st.p + dt / 6 * (pk1 + 2 * pk2 + 2 * pk3 + pk4);
    out.R = reorthonormalize(r0 + dt / 6 * (rk1 + 2 * rk2 + 2 * rk3 + rk4));
    out.v_body = prof.linear(t1);
    out.w_body = prof.angular(t1);
    return out;
}

} // namespace mpf
