#include "mpf/path.hpp"

#include "mpf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpf {

PathSpec lemniscate_path(double scale, double freq) {
    PathSpec p;
    p.kind = PathSpec::Kind::Lemniscate;
    p.scale = scale;
    p.freq = freq;
    return p;
}

PathSpec circle_path(double radius) {
    PathSpec p;
    p.kind = PathSpec::Kind::Circle;
    p.radius = radius;
    return p;
}

PathSpec sampled_path(std::vector<double> knots, std::vector<Vec3> points) {
    PathSpec p;
    p.kind = PathSpec::Kind::Sampled;
    p.knots = std::move(knots);
    p.points = std::move(points);
    return p;
}

PathSpec load_sampled_path_csv(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::invalid_argument("sampled path: cannot open " + file);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("sampled path: empty file " + file);
    std::string header = line;
    header.erase(std::remove_if(header.begin(), header.end(), [](char c) { return c == ' ' || c == '\r'; }),
                 header.end());
    if (header != "u,x,y,z")
        throw std::invalid_argument("sampled path: expected header u,x,y,z in " + file);
    std::vector<double> knots;
    std::vector<Vec3> pts;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double vals[4];
        std::string cell;
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ls, cell, ','))
                throw std::invalid_argument("sampled path: short row in " + file);
            vals[i] = std::stod(cell);
        }
        knots.push_back(vals[0]);
        pts.emplace_back(vals[1], vals[2], vals[3]);
    }
    return sampled_path(std::move(knots), std::move(pts));
}

// ---------------------------------------------------------------------------
// PathGeometry

PathGeometry::PathGeometry(PathSpec spec) : spec_(std::move(spec)) {
    switch (spec_.kind) {
    case PathSpec::Kind::Lemniscate:
        if (!(spec_.scale > 0.0) || !(spec_.freq > 0.0))
            throw std::invalid_argument("lemniscate path: scale and freq must be positive");
        break;
    case PathSpec::Kind::Circle:
        if (!(spec_.radius > 0.0)) throw std::invalid_argument("circle path: radius must be positive");
        break;
    case PathSpec::Kind::Sampled: {
        const size_t n = spec_.points.size();
        if (n < 4) throw std::invalid_argument("sampled path: need at least 4 points");
        if (spec_.knots.size() != n)
            throw std::invalid_argument("sampled path: knot/point count mismatch");
        for (size_t i = 1; i < n; ++i)
            if (!(spec_.knots[i] > spec_.knots[i - 1]))
                throw std::invalid_argument("sampled path: knots must be strictly increasing");
        // natural cubic spline second derivatives, Thomas solve for all axes
        m2_.assign(n, Vec3::Zero());
        std::vector<double> diag(n, 0.0), upper(n, 0.0);
        std::vector<Vec3> rhs(n, Vec3::Zero());
        diag[0] = diag[n - 1] = 1.0;
        for (size_t i = 1; i + 1 < n; ++i) {
            const double hl = spec_.knots[i] - spec_.knots[i - 1];
            const double hr = spec_.knots[i + 1] - spec_.knots[i];
            diag[i] = 2.0 * (hl + hr);
            upper[i] = hr;
            rhs[i] = 6.0 * ((spec_.points[i + 1] - spec_.points[i]) / hr -
                            (spec_.points[i] - spec_.points[i - 1]) / hl);
        }
        for (size_t i = 2; i + 1 < n; ++i) {
            const double hl = spec_.knots[i] - spec_.knots[i - 1];
            const double w = hl / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (size_t i = n - 1; i-- > 1;)
            m2_[i] = (rhs[i] - upper[i] * m2_[i + 1]) / diag[i];
        break;
    }
    }
}

double PathGeometry::raw_period() const {
    if (spec_.kind == PathSpec::Kind::Lemniscate) return 2.0 * M_PI / spec_.freq;
    if (spec_.kind == PathSpec::Kind::Circle) return 2.0 * M_PI * spec_.radius;
    throw std::logic_error("raw_period: path is not periodic");
}

double PathGeometry::u_begin() const {
    return periodic() ? 0.0 : spec_.knots.front();
}

double PathGeometry::u_end() const {
    return periodic() ? raw_period() : spec_.knots.back();
}

int PathGeometry::locate(double u) const {
    const auto& k = spec_.knots;
    int i = int(std::upper_bound(k.begin(), k.end(), u) - k.begin()) - 1;
    return std::clamp(i, 0, int(k.size()) - 2);
}

Vec3 PathGeometry::pos(double u) const {
    switch (spec_.kind) {
    case PathSpec::Kind::Lemniscate: {
        const double w = spec_.freq * u, s = std::sin(w), c = std::cos(w), d = 1.0 + s * s;
        return Vec3(spec_.scale * s * c / d, spec_.scale * c / d, 0.0);
    }
    case PathSpec::Kind::Circle: {
        const double w = u / spec_.radius;
        return Vec3(spec_.radius * std::sin(w), spec_.radius * std::cos(w), 0.0);
    }
    case PathSpec::Kind::Sampled: {
        const auto& k = spec_.knots;
        if (u <= k.front()) return spec_.points.front() + d1(k.front()) * (u - k.front());
        if (u >= k.back()) return spec_.points.back() + d1(k.back()) * (u - k.back());
        const int i = locate(u);
        const double h = k[i + 1] - k[i], t = u - k[i], tt = k[i + 1] - u;
        return m2_[i] * (tt * tt * tt) / (6.0 * h) + m2_[i + 1] * (t * t * t) / (6.0 * h) +
               (spec_.points[i] - m2_[i] * (h * h) / 6.0) * (tt / h) +
               (spec_.points[i + 1] - m2_[i + 1] * (h * h) / 6.0) * (t / h);
    }
    }
    return Vec3::Zero();
}

Vec3 PathGeometry::d1(double u) const {
    switch (spec_.kind) {
    case PathSpec::Kind::Lemniscate: {
        const double w = spec_.freq * u, s = std::sin(w), c = std::cos(w), d = 1.0 + s * s;
        const double nx = c * c * c * c - s * s - s * s * s * s;
        return spec_.freq * Vec3(spec_.scale * nx / (d * d),
                                 -spec_.scale * s * (3.0 - s * s) / (d * d), 0.0);
    }
    case PathSpec::Kind::Circle: {
        const double w = u / spec_.radius;
        return Vec3(std::cos(w), -std::sin(w), 0.0);
    }
    case PathSpec::Kind::Sampled: {
        const auto& k = spec_.knots;
        const double uc = std::clamp(u, k.front(), k.back());
        const int i = locate(uc);
        const double h = k[i + 1] - k[i], t = uc - k[i], tt = k[i + 1] - uc;
        return -m2_[i] * (tt * tt) / (2.0 * h) + m2_[i + 1] * (t * t) / (2.0 * h) +
               (spec_.points[i + 1] - spec_.points[i]) / h - (m2_[i + 1] - m2_[i]) * h / 6.0;
    }
    }
    return Vec3::Zero();
}

Vec3 PathGeometry::d2(double u) const {
    switch (spec_.kind) {
    case PathSpec::Kind::Lemniscate: {
        const double w = spec_.freq * u, s = std::sin(w), c = std::cos(w), d = 1.0 + s * s;
        const double nx = c * c * c * c - s * s - s * s * s * s;
        const double f2 = spec_.freq * spec_.freq, d3 = d * d * d;
        return f2 * Vec3(-2.0 * spec_.scale * s * c * (3.0 * d + 2.0 * nx) / d3,
                         -spec_.scale * c * (3.0 - 12.0 * s * s + s * s * s * s) / d3, 0.0);
    }
    case PathSpec::Kind::Circle: {
        const double w = u / spec_.radius;
        return Vec3(-std::sin(w) / spec_.radius, -std::cos(w) / spec_.radius, 0.0);
    }
    case PathSpec::Kind::Sampled: {
        const auto& k = spec_.knots;
        if (u < k.front() || u > k.back()) return Vec3::Zero(); // linear extension
        const int i = locate(u);
        const double h = k[i + 1] - k[i];
        return m2_[i] * ((k[i + 1] - u) / h) + m2_[i + 1] * ((u - k[i]) / h);
    }
    }
    return Vec3::Zero();
}

// ---------------------------------------------------------------------------
// ArcLengthTable

namespace {

double hermite(double t, double h, double y0, double y1, double m0, double m1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * m1;
}

} // namespace

ArcLengthTable::ArcLengthTable(const PathGeometry& geom, double tol) : geom_(&geom) {
    const double ua = geom.u_begin(), ub = geom.u_end();
    const auto speed = [&](double u) {
        const double g = geom.d1(u).norm();
        if (g < 1e-9)
            throw RegularityViolation("path parameterization is singular near u = " + std::to_string(u));
        return g;
    };

    const int n0 = 1024;
    const double w0 = (ub - ua) / n0;

    // coarse length estimate sets the absolute error budget
    double rough = 0.0;
    for (int i = 0; i < n0; ++i) {
        const double a = ua + i * w0, b = a + w0;
        rough += (b - a) / 6.0 * (speed(a) + 4.0 * speed(0.5 * (a + b)) + speed(b));
    }
    const double budget = std::max(tol, 1e-12) * rough;

    u_.clear();
    s_.clear();
    g_.clear();
    u_.push_back(ua);
    g_.push_back(speed(ua));
    s_.push_back(0.0);

    // depth-first adaptive Simpson; emits accepted panels left to right
    struct Seg {
        double a, b, ga, gm, gb, integral, eps;
        int depth;
    };
    const auto simpson = [](double a, double b, double ga, double gm, double gb) {
        return (b - a) / 6.0 * (ga + 4.0 * gm + gb);
    };
    std::vector<Seg> stack;
    for (int i = n0; i-- > 0;) {
        const double a = ua + i * w0, b = (i == n0 - 1) ? ub : a + w0;
        const double ga = speed(a), gm = speed(0.5 * (a + b)), gb = speed(b);
        stack.push_back({a, b, ga, gm, gb, simpson(a, b, ga, gm, gb), budget / n0, 0});
    }
    while (!stack.empty()) {
        Seg sg = stack.back();
        stack.pop_back();
        const double m = 0.5 * (sg.a + sg.b);
        const double gl = speed(0.5 * (sg.a + m)), gr = speed(0.5 * (m + sg.b));
        const double sl = simpson(sg.a, m, sg.ga, gl, sg.gm);
        const double sr = simpson(m, sg.b, sg.gm, gr, sg.gb);
        const double err = sl + sr - sg.integral;
        if (std::abs(err) <= 15.0 * sg.eps || sg.depth >= 30) {
            // accept with Richardson correction, node at panel midpoint and end
            s_.push_back(s_.back() + sl + err / 30.0);
            u_.push_back(m);
            g_.push_back(sg.gm);
            s_.push_back(s_.back() + sr + err / 30.0);
            u_.push_back(sg.b);
            g_.push_back(sg.gb);
        } else {
            stack.push_back({m, sg.b, sg.gm, gr, sg.gb, sr, sg.eps / 2.0, sg.depth + 1});
            stack.push_back({sg.a, m, sg.ga, gl, sg.gm, sl, sg.eps / 2.0, sg.depth + 1});
        }
    }
    total_ = s_.back();
}

double ArcLengthTable::u_of_s(double s) const {
    double shift = 0.0, r = s;
    if (geom_->periodic()) {
        const double k = std::floor(s / total_);
        r = s - k * total_;
        shift = k * geom_->raw_period();
        r = std::clamp(r, 0.0, total_);
    } else {
        if (s <= 0.0) return u_.front() + s / g_.front();
        if (s >= total_) return u_.back() + (s - total_) / g_.back();
    }
    const auto it = std::upper_bound(s_.begin(), s_.end(), r);
    const int i = std::clamp(int(it - s_.begin()) - 1, 0, int(s_.size()) - 2);
    const double h = s_[i + 1] - s_[i];
    const double t = (r - s_[i]) / h;
    return hermite(t, h, u_[i], u_[i + 1], 1.0 / g_[i], 1.0 / g_[i + 1]) + shift;
}

double ArcLengthTable::s_of_u(double u) const {
    double shift = 0.0, r = u;
    if (geom_->periodic()) {
        const double period = geom_->raw_period();
        const double k = std::floor(u / period);
        r = u - k * period;
        shift = k * total_;
        r = std::clamp(r, u_.front(), u_.back());
    } else {
        if (u <= u_.front()) return (u - u_.front()) * g_.front();
        if (u >= u_.back()) return total_ + (u - u_.back()) * g_.back();
    }
    const auto it = std::upper_bound(u_.begin(), u_.end(), r);
    const int i = std::clamp(int(it - u_.begin()) - 1, 0, int(u_.size()) - 2);
    const double h = u_[i + 1] - u_[i];
    const double t = (r - u_[i]) / h;
    return hermite(t, h, s_[i], s_[i + 1], g_[i], g_[i + 1]) + shift;
}

double ArcLengthTable::eval(double s, Vec3* tangent, Vec3* curvature) const {
    const double u = u_of_s(s);
    const Vec3 p1 = geom_->d1(u);
    const double g2 = p1.squaredNorm();
    if (tangent) *tangent = p1 / std::sqrt(g2);
    if (curvature) {
        const Vec3 p2 = geom_->d2(u);
        *curvature = p2 / g2 - p1 * (p1.dot(p2) / (g2 * g2));
    }
    return u;
}

Vec3 ArcLengthTable::pos(double s) const { return geom_->pos(u_of_s(s)); }

Vec3 ArcLengthTable::tangent(double s) const {
    Vec3 t;
    eval(s, &t, nullptr);
    return t;
}

Vec3 ArcLengthTable::curvature(double s) const {
    Vec3 c;
    eval(s, nullptr, &c);
    return c;
}

double ArcLengthTable::raw_speed(double u) const { return geom_->d1(u).norm(); }

// ---------------------------------------------------------------------------
// TransportFrameField

Vec3 frame_angular_velocity(const TransportFrame& fr, double sdot) {
    return Vec3(0.0, -sdot * fr.k2, sdot * fr.k1);
}

TransportFrameField::TransportFrameField(PathSpec spec, double quad_tol, double node_spacing)
    : geom_(std::move(spec)), table_(geom_, quad_tol), h_(node_spacing) {
    if (!(h_ > 0.0)) throw std::invalid_argument("transport frame: node spacing must be positive");
    const Vec3 t0 = table_.tangent(0.0);
    Vec3 up = Vec3::UnitZ();
    if (std::abs(t0.dot(up)) > 1.0 - 1e-6) up = Vec3::UnitY(); // nearly vertical tangent
    fwd_.push_back({(up - t0 * t0.dot(up)).normalized()});
}

Vec3 TransportFrameField::transport_f2(double s0, const Vec3& n0, double s1) const {
    // double-reflection transport of the normal from s0 to s1
    const Vec3 x0 = table_.pos(s0), x1 = table_.pos(s1);
    const Vec3 t0 = table_.tangent(s0), t1 = table_.tangent(s1);
    const Vec3 v1 = x1 - x0;
    const double c1 = v1.squaredNorm();
    Vec3 nl = n0, tl = t0;
    if (c1 > 0.0) {
        nl -= v1 * (2.0 * v1.dot(n0) / c1);
        tl -= v1 * (2.0 * v1.dot(t0) / c1);
    }
    const Vec3 v2 = t1 - tl;
    const double c2 = v2.squaredNorm();
    Vec3 n1 = (c2 > 0.0) ? Vec3(nl - v2 * (2.0 * v2.dot(nl) / c2)) : nl;
    n1 -= t1 * t1.dot(n1);
    return n1.normalized();
}

void TransportFrameField::ensure(long lo, long hi) {
    while (long(fwd_.size()) <= hi) {
        const long i = long(fwd_.size());
        fwd_.push_back({transport_f2((i - 1) * h_, fwd_[i - 1].f2, i * h_)});
    }
    while (-long(bwd_.size()) > lo) {
        const long j = long(bwd_.size()); // creating node -(j+1)
        const Vec3& prev = (j == 0) ? fwd_[0].f2 : bwd_[j - 1].f2;
        bwd_.push_back({transport_f2(-double(j) * h_, prev, -double(j + 1) * h_)});
    }
}

const Vec3& TransportFrameField::node_f2(long i) const {
    return i >= 0 ? fwd_[size_t(i)].f2 : bwd_[size_t(-i - 1)].f2;
}

TransportFrame TransportFrameField::at(double s) {
    const double q = s / h_;
    const long i = long(std::floor(q));
    ensure(i, i + 1);
    const double lam = q - double(i);

    TransportFrame fr;
    fr.s = s;
    Vec3 curv;
    table_.eval(s, &fr.f1, &curv);
    const Vec3 blend = (1.0 - lam) * node_f2(i) + lam * node_f2(i + 1);
    fr.f2 = (blend - fr.f1 * fr.f1.dot(blend)).normalized();
    fr.f3 = fr.f1.cross(fr.f2);
    fr.k1 = fr.f2.dot(curv);
    fr.k2 = fr.f3.dot(curv);
    return fr;
}

} // namespace mpf
