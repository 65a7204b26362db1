// End-to-end acceptance gate. Each criterion prints one [PASS]/[FAIL] line;
// the exit code is the number of failures. Run with the fixtures directory
// as the only argument.

#include "mpf/config.hpp"
#include "mpf/controller.hpp"
#include "mpf/log_io.hpp"
#include "mpf/path.hpp"
#include "mpf/simulation.hpp"
#include "mpf/so3.hpp"
#include "mpf/target.hpp"
#include "mpf/vehicle.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace mpf;

namespace {

int failures = 0;

// Runs one criterion body; the body returns an empty string on success or a
// short reason on failure. Exceptions count as failures too.
void criterion(int n, const char* what, const std::function<std::string()>& body) {
    std::string reason;
    try {
        reason = body();
    } catch (const std::exception& e) {
        reason = e.what();
    }
    if (reason.empty()) {
        std::printf("[PASS] criterion %d: %s\n", n, what);
    } else {
        std::printf("[FAIL] criterion %d: %s (%s)\n", n, what, reason.c_str());
        ++failures;
    }
    std::fflush(stdout);
}

std::string reltext(const char* name, double got, double want) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: got %.17g want %.17g", name, got, want);
    return buf;
}

bool rel_close(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return std::abs(a - b) <= tol * std::max(scale, 1e-300);
}

double wall_seconds(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

double check_worst(const VerifyReport& rep, const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return c.worst;
    throw std::runtime_error("missing check " + name);
}

} // namespace

int main(int argc, char** argv) {
    const std::string fx = argc > 1 ? argv[1] : "fixtures";

    criterion(1, "attitude error identity holds for 1e4 random rotation pairs", [] {
        std::mt19937_64 rng(20260818);
        std::normal_distribution<double> N(0.0, 1.0);
        std::uniform_real_distribution<double> A(0.0, 3.14159);
        auto draw = [&] {
            Vec3 axis(N(rng), N(rng), N(rng));
            axis.normalize();
            return exp_so3(Vec3(axis * A(rng)));
        };
        double worst = 0.0;
        const double secs = wall_seconds([&] {
            for (int i = 0; i < 10000; ++i) {
                const AttitudeError err = attitude_error(draw(), draw());
                const double resid =
                    std::abs(err.e.squaredNorm() - err.psi * (1.0 - err.psi));
                worst = std::max(worst, resid);
            }
        });
        if (worst > 1e-12) return reltext("identity residual", worst, 1e-12);
        if (secs >= 1.0) return reltext("wall seconds", secs, 1.0);
        return std::string();
    });

    criterion(2, "transport frame is orthonormal, twist-free, and continuous over a full period", [] {
        TransportFrameField field(lemniscate_path(50.0, 0.01));
        const double len = field.table().length();
        const int n = 20000;
        const double h = len / n;

        std::vector<TransportFrame> fr(n + 1);
        for (int i = 0; i <= n; ++i) fr[i] = field.at(i * h);

        double worst_orth = 0.0, worst_twist = 0.0, kmax = 0.0;
        int sign_changes = 0;
        for (int i = 0; i <= n; ++i) {
            worst_orth = std::max(worst_orth, orthonormality_error(fr[i].basis().matrix()));
            worst_twist = std::max(worst_twist,
                                   std::abs(frame_angular_velocity(fr[i], 1.0)(0)));
            kmax = std::max(kmax, std::hypot(fr[i].k1, fr[i].k2));
            if (i < n && fr[i].k2 * fr[i + 1].k2 < 0.0) ++sign_changes;
        }
        if (worst_orth > 1e-9) return reltext("orthonormality", worst_orth, 1e-9);
        if (worst_twist > 1e-12) return reltext("tangent twist rate", worst_twist, 1e-12);
        if (sign_changes < 2)
            return reltext("curvature sign changes", sign_changes, 2.0);

        // The normal rotates at most at the local curvature rate, so steps of
        // the march (which crosses every sign change) bound the jump size.
        double worst_jump = 0.0;
        for (int i = 0; i < n; ++i)
            worst_jump = std::max(worst_jump, (fr[i + 1].f2 - fr[i].f2).norm());
        const double jump_tol = 2.0 * kmax * h + 1e-9;
        if (worst_jump > jump_tol) return reltext("frame jump", worst_jump, jump_tol);

        double worst_fd = 0.0;
        for (int i = 1; i < n; ++i) {
            const Vec3 d = (fr[i + 1].f2 - fr[i - 1].f2) / (2.0 * h);
            worst_fd = std::max(worst_fd, std::abs(d.dot(fr[i].f3)));
        }
        if (worst_fd > 1e-6) return reltext("numeric twist", worst_fd, 1e-6);
        return std::string();
    });

    criterion(3, "stationary target collapses both correction frames to exact identity", [] {
        TransportFrameField field(lemniscate_path(50.0, 0.01));
        const TargetProfile prof = constant_profile(Vec3::Zero(), Vec3::Zero());
        const TargetState tgt =
            make_target_state(prof, 0.0, Vec3(3.0, -4.0, 2.0), rot_zyx(0.1, 0.2, 0.3));
        const PathPointKinematics kin = path_point_kinematics(tgt, field, 12.5);
        const Rot3 wd = steady_state_frame(kin, 15.0);
        const double dev_wd = (wd.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (dev_wd != 0.0) return reltext("steady-state frame deviation", dev_wd, 0.0);
        const Rot3 d = transient_frame(1.0, 0.0, 0.0);
        const double dev_d = (d.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff();
        if (dev_d != 0.0) return reltext("correction frame deviation", dev_d, 0.0);
        return std::string();
    });

    criterion(4, "gain certificate matches independent arithmetic and certifies decay", [] {
        const Gains g;
        const RoaParams roa;
        const double v = 15.0;
        const GainCertificate cert = validate_gains(g, roa, v, v);
        if (!cert.ok) return std::string("certificate rejected the reference gains");
        if (!(cert.lambda > 0.0)) return reltext("decay rate", cert.lambda, 0.0);

        // Same quantities assembled along a different algebraic route.
        const double k = std::min(g.kp, v / std::hypot(g.alpha, roa.c1));
        const double split = 1.0 - 2.0 * roa.c2;
        const double lhs = k * g.kr;
        const double rhs = (v / (roa.c1 * split)) * (v / (roa.c1 * split));
        const double w11 = k / (2.0 * roa.c1 * roa.c1);
        const double w12 = -v / (2.0 * roa.c1 * roa.c1 * split);
        const double w22 = g.kr / 2.0;
        Eigen::Matrix2d w;
        w << w11, w12, w12, w22;
        const double eig_min = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(w)
                                   .eigenvalues()(0);
        const double m2 = std::max(split / (2.0 * roa.c1 * roa.c1), 1.0 / (1.0 - roa.c2));
        const double lambda = eig_min / m2;

        if (!rel_close(cert.gain_bound, k, 1e-12))
            return reltext("gain bound", cert.gain_bound, k);
        if (!rel_close(cert.lhs, lhs, 1e-12)) return reltext("lhs", cert.lhs, lhs);
        if (!rel_close(cert.rhs, rhs, 1e-12)) return reltext("rhs", cert.rhs, rhs);
        if (!rel_close(cert.w11, w11, 1e-12)) return reltext("w11", cert.w11, w11);
        if (!rel_close(cert.w12, w12, 1e-12)) return reltext("w12", cert.w12, w12);
        if (!rel_close(cert.w22, w22, 1e-12)) return reltext("w22", cert.w22, w22);
        if (!rel_close(cert.lambda_w_min, eig_min, 1e-12))
            return reltext("smallest decay eigenvalue", cert.lambda_w_min, eig_min);
        if (!rel_close(cert.lambda, lambda, 1e-12))
            return reltext("decay rate", cert.lambda, lambda);
        if (!(cert.lhs > cert.rhs)) return reltext("gain inequality lhs", cert.lhs, cert.rhs);
        return std::string();
    });

    criterion(5, "ideal-autopilot run stays under the certified decay envelope and settles", [&] {
        Scenario sc = load_scenario_file(fx + "/lemniscate.cfg");
        sc.perfect = true;
        sc.sim.duration = 200.0;
        TrajectoryLog log;
        const double secs = wall_seconds([&] { log = run_simulation(sc); });

        const double v0 = log.rows.front().V;
        const double lam = log.cert.lambda;
        double worst_ratio = 0.0;
        for (const auto& r : log.rows) {
            const double bound = v0 * std::exp(-lam * r.t) * 1.01;
            if (r.V > bound) worst_ratio = std::max(worst_ratio, r.V / bound);
        }
        if (worst_ratio > 0.0)
            return reltext("envelope exceedance ratio", worst_ratio, 1.0);

        double settle = -1.0;
        for (const auto& r : log.rows)
            if (r.ep_norm < 1e-3 && r.psi < 1e-3) {
                settle = r.t;
                break;
            }
        if (settle < 0.0) return std::string("never settled below 1e-3");
        if (secs >= 10.0) return reltext("wall seconds", secs, 10.0);
        return std::string();
    });

    criterion(6, "logged error dynamics converge at second order under step halving", [&] {
        Scenario warm = load_scenario_file(fx + "/lemniscate.cfg");
        warm.perfect = true;
        warm.sim.duration = 60.0;
        const TrajectoryLog wlog = run_simulation(warm);

        // Restart from the settled state so the measurement window is smooth
        // and shared exactly between the two step sizes.
        Scenario base = warm;
        base.vehicle_p0 = wlog.rows.back().p;
        base.vehicle_R0 = Rot3::from_matrix(wlog.frames.back().R_W);
        base.target_p0 = wlog.rows.back().p_t;
        base.target_R0 = Rot3::from_matrix(wlog.frames.back().R_T);
        base.sim.s0 = wlog.rows.back().s;
        base.sim.duration = 20.0;

        double res_p[2], res_a[2];
        const double dts[2] = {0.01, 0.005};
        for (int i = 0; i < 2; ++i) {
            base.sim.dt = dts[i];
            const VerifyReport rep = verify_invariants(run_simulation(base));
            res_p[i] = check_worst(rep, "error-dynamics.position");
            res_a[i] = check_worst(rep, "error-dynamics.attitude");
        }
        const double order_p = std::log2(res_p[0] / res_p[1]);
        const double order_a = std::log2(res_a[0] / res_a[1]);
        if (!(order_p >= 1.9)) return reltext("position order", order_p, 1.9);
        if (!(order_a >= 1.9)) return reltext("attitude order", order_a, 1.9);
        return std::string();
    });

    criterion(7, "steady-state residual falls monotonically with autopilot bandwidth", [&] {
        const Scenario sc = load_scenario_file(fx + "/sweep.cfg");
        const std::vector<SweepRow> rows = sweep_bandwidth(sc, {2.5, 3.0, 10.0});
        for (size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].residual < rows[i - 1].residual))
                return reltext("residual not decreasing at", rows[i].residual,
                               rows[i - 1].residual);
        for (const auto& r : rows)
            if (!(r.residual < 10.0)) return reltext("residual", r.residual, 10.0);
        if (!(rows.back().residual < 2.0))
            return reltext("residual at bandwidth 10", rows.back().residual, 2.0);
        return std::string();
    });

    criterion(8, "gust deviation stays bounded and the error recovers after the wind box", [&] {
        const Scenario windy = load_scenario_file(fx + "/wind.cfg");
        Scenario calm = windy;
        calm.wind = WindField();
        const TrajectoryLog lw = run_simulation(windy);
        const TrajectoryLog lb = run_simulation(calm);

        double peak_calm = 0.0;
        for (const auto& r : lb.rows) peak_calm = std::max(peak_calm, r.ep_norm);

        size_t i0 = lw.rows.size(), i1 = 0;
        for (size_t i = 0; i < lw.rows.size(); ++i)
            if (lw.rows[i].eta.norm() != 0.0) {
                i0 = std::min(i0, i);
                i1 = i;
            }
        if (i0 >= lw.rows.size()) return std::string("the run never met the wind box");

        double sup_gust = 0.0;
        for (size_t i = i0; i <= i1; ++i)
            sup_gust = std::max(sup_gust, lw.rows[i].ep_norm);
        if (!(sup_gust <= 4.0 * peak_calm))
            return reltext("gust-window error", sup_gust, 4.0 * peak_calm);

        const double t_exit = lw.rows[i1].t;
        double t_rec = -1.0;
        for (size_t i = i1 + 1; i < lw.rows.size(); ++i)
            if (lw.rows[i].ep_norm < 2.0) {
                t_rec = lw.rows[i].t;
                break;
            }
        if (t_rec < 0.0 || t_rec > t_exit + 60.0)
            return reltext("recovery time", t_rec, t_exit + 60.0);
        return std::string();
    });

    criterion(9, "circular-orbit fixture passes the full trajectory invariant suite", [&] {
        const Scenario sc = load_scenario_file(fx + "/circle.cfg");
        const TrajectoryLog log = run_simulation(sc);
        if (log.rows.front().roa != 1)
            return std::string("start state left the certified region");
        const VerifyReport rep = verify_invariants(log);
        for (const auto& c : rep.checks)
            if (!c.pass) return "check " + c.name + " failed";
        return std::string();
    });

    criterion(10, "repeated runs of every fixture emit byte-identical logs", [&] {
        for (const char* name : {"lemniscate", "circle", "wind", "sweep"}) {
            const Scenario sc = load_scenario_file(fx + "/" + std::string(name) + ".cfg");
            const TrajectoryLog a = run_simulation(sc);
            const TrajectoryLog b = run_simulation(sc);
            if (emit_log_csv(a) != emit_log_csv(b))
                return std::string(name) + ": primary log differs between runs";
            if (emit_frames_csv(a) != emit_frames_csv(b))
                return std::string(name) + ": frame log differs between runs";
            if (emit_meta_json(a) != emit_meta_json(b))
                return std::string(name) + ": metadata differs between runs";
        }
        return std::string();
    });

    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
