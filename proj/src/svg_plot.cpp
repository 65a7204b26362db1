#include "mpf/svg_plot.hpp"

#include "mpf/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace mpf {

namespace {

constexpr int kMaxPoints = 2000; // decimation cap per polyline

struct Series {
    std::vector<double> x, y;
    const char* color = "#1f6fb2";
    const char* label = nullptr;
};

struct Extent {
    double lo = 0.0, hi = 1.0;

    void grow(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    void pad() {
        if (hi - lo < 1e-12) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

Extent extent_of(const std::vector<const Series*>& ss, bool y_axis) {
    Extent e;
    e.lo = 1e300;
    e.hi = -1e300;
    for (const Series* s : ss)
        for (double v : (y_axis ? s->y : s->x)) e.grow(v);
    if (e.lo > e.hi) {
        e.lo = 0.0;
        e.hi = 1.0;
    }
    e.pad();
    return e;
}

void fmt(std::string& out, const char* f, double a, double b = 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a, b);
    out += buf;
}

// tick spacing of 1, 2, or 5 times a power of ten giving 4..8 divisions
double tick_step(const Extent& e) {
    const double span = e.hi - e.lo;
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * m) <= 8.0) return step * m;
    }
    return step * 10.0;
}

struct Mapper {
    Extent ex, ey;
    double x0, y0, w, h; // plot rectangle in svg coordinates

    double mx(double x) const { return x0 + (x - ex.lo) / (ex.hi - ex.lo) * w; }
    double my(double y) const { return y0 + h - (y - ey.lo) / (ey.hi - ey.lo) * h; }
};

void draw_axes(std::string& s, const Mapper& m, const char* xl, const char* yl) {
    fmt(s, "<rect x='%.6g' y='%.6g' ", m.x0, m.y0);
    fmt(s, "width='%.6g' height='%.6g' fill='none' stroke='#888' stroke-width='1'/>\n", m.w, m.h);
    const double sx = tick_step(m.ex);
    for (double v = std::ceil(m.ex.lo / sx) * sx; v <= m.ex.hi + 1e-9 * sx; v += sx) {
        const double px = m.mx(v);
        fmt(s, "<line x1='%.6g' y1='%.6g' ", px, m.y0 + m.h);
        fmt(s, "x2='%.6g' y2='%.6g' stroke='#888' stroke-width='1'/>\n", px, m.y0 + m.h + 4.0);
        fmt(s, "<text x='%.6g' y='%.6g' font-size='11' text-anchor='middle' fill='#444'>",
            px, m.y0 + m.h + 16.0);
        fmt(s, "%.6g</text>\n", v);
    }
    const double sy = tick_step(m.ey);
    for (double v = std::ceil(m.ey.lo / sy) * sy; v <= m.ey.hi + 1e-9 * sy; v += sy) {
        const double py = m.my(v);
        fmt(s, "<line x1='%.6g' y1='%.6g' ", m.x0 - 4.0, py);
        fmt(s, "x2='%.6g' y2='%.6g' stroke='#888' stroke-width='1'/>\n", m.x0, py);
        fmt(s, "<text x='%.6g' y='%.6g' font-size='11' text-anchor='end' fill='#444'>",
            m.x0 - 6.0, py + 4.0);
        fmt(s, "%.6g</text>\n", v);
    }
    fmt(s, "<text x='%.6g' y='%.6g' font-size='12' text-anchor='middle' fill='#222'>",
        m.x0 + m.w / 2.0, m.y0 + m.h + 32.0);
    s += xl;
    s += "</text>\n";
    fmt(s, "<text x='%.6g' y='%.6g' font-size='12' text-anchor='middle' fill='#222' ",
        m.x0 - 44.0, m.y0 + m.h / 2.0);
    fmt(s, "transform='rotate(-90 %.6g %.6g)'>", m.x0 - 44.0, m.y0 + m.h / 2.0);
    s += yl;
    s += "</text>\n";
}

void draw_series(std::string& s, const Mapper& m, const Series& ser) {
    const size_t n = ser.x.size();
    if (n == 0) return;
    const size_t stride = (n + kMaxPoints - 1) / kMaxPoints;
    s += "<polyline fill='none' stroke='";
    s += ser.color;
    s += "' stroke-width='1.2' points='";
    for (size_t i = 0; i < n; i += stride) {
        fmt(s, "%.6g,%.6g ", m.mx(ser.x[i]), m.my(ser.y[i]));
    }
    if ((n - 1) % stride != 0) fmt(s, "%.6g,%.6g", m.mx(ser.x[n - 1]), m.my(ser.y[n - 1]));
    s += "'/>\n";
}

void draw_panel(std::string& s, double x0, double y0, double w, double h, const char* title,
                const char* xl, const char* yl, const std::vector<const Series*>& ss) {
    Mapper m{extent_of(ss, false), extent_of(ss, true), x0, y0, w, h};
    fmt(s, "<text x='%.6g' y='%.6g' font-size='13' text-anchor='middle' fill='#000'>",
        x0 + w / 2.0, y0 - 8.0);
    s += title;
    s += "</text>\n";
    draw_axes(s, m, xl, yl);
    for (const Series* p : ss) draw_series(s, m, *p);
    double ly = y0 + 14.0;
    for (const Series* p : ss) {
        if (!p->label) continue;
        fmt(s, "<line x1='%.6g' y1='%.6g' ", x0 + w - 92.0, ly - 4.0);
        s += "x2='";
        fmt(s, "%.6g' y2='%.6g' stroke='", x0 + w - 72.0, ly - 4.0);
        s += p->color;
        s += "' stroke-width='2'/>\n";
        fmt(s, "<text x='%.6g' y='%.6g' font-size='11' fill='#222'>", x0 + w - 66.0, ly);
        s += p->label;
        s += "</text>\n";
        ly += 14.0;
    }
}

std::string svg_open(double w, double h) {
    std::string s;
    fmt(s, "<svg xmlns='http://www.w3.org/2000/svg' viewBox='0 0 %.6g %.6g' ", w, h);
    fmt(s, "width='%.6g' height='%.6g' font-family='sans-serif'>\n", w, h);
    s += "<rect width='100%' height='100%' fill='white'/>\n";
    return s;
}

std::string time_chart(const TrajectoryLog& log, const char* title, const char* yl,
                       double (*pick)(const LogRow&)) {
    Series ser;
    ser.x.reserve(log.rows.size());
    ser.y.reserve(log.rows.size());
    for (const auto& r : log.rows) {
        ser.x.push_back(r.t);
        ser.y.push_back(pick(r));
    }
    std::string s = svg_open(760.0, 480.0);
    draw_panel(s, 70.0, 40.0, 650.0, 380.0, title, "t [s]", yl, {&ser});
    s += "</svg>\n";
    return s;
}

std::string trajectory_chart(const TrajectoryLog& log) {
    Series veh[4], tgt[4];
    for (int i = 0; i < 4; ++i) {
        veh[i].color = "#1f6fb2";
        veh[i].label = "vehicle";
        tgt[i].color = "#c44e52";
        tgt[i].label = "target";
    }
    const double c30 = std::cos(M_PI / 6.0), s30 = std::sin(M_PI / 6.0);
    for (const auto& r : log.rows) {
        const Vec3 ps[2] = {r.p, r.p_t};
        Series* dst[2] = {veh, tgt};
        for (int j = 0; j < 2; ++j) {
            const Vec3& p = ps[j];
            dst[j][0].x.push_back((p(0) - p(1)) * c30);
            dst[j][0].y.push_back(-(p(0) + p(1)) * s30 + p(2));
            dst[j][1].x.push_back(p(0));
            dst[j][1].y.push_back(p(1));
            dst[j][2].x.push_back(p(0));
            dst[j][2].y.push_back(p(2));
            dst[j][3].x.push_back(p(1));
            dst[j][3].y.push_back(p(2));
        }
    }
    std::string s = svg_open(1060.0, 820.0);
    const char* titles[4] = {"isometric view", "top view", "side view (x-z)", "side view (y-z)"};
    const char* xls[4] = {"east-north mix", "x [m]", "x [m]", "y [m]"};
    const char* yls[4] = {"height mix", "y [m]", "z [m]", "z [m]"};
    for (int i = 0; i < 4; ++i) {
        const double px = 70.0 + (i % 2) * 520.0;
        const double py = 50.0 + (i / 2) * 400.0;
        draw_panel(s, px, py, 420.0, 310.0, titles[i], xls[i], yls[i], {&veh[i], &tgt[i]});
    }
    s += "</svg>\n";
    return s;
}

std::string relative_chart(const TrajectoryLog& log) {
    Series xy, xz;
    xy.label = "horizontal";
    xz.label = "vertical";
    xz.color = "#c44e52";
    const bool framed = log.frames.size() == log.rows.size();
    for (size_t k = 0; k < log.rows.size(); ++k) {
        const Vec3 d = log.rows[k].p - log.rows[k].p_t;
        const Vec3 rel = framed ? Vec3(log.frames[k].R_T.transpose() * d) : d;
        xy.x.push_back(rel(0));
        xy.y.push_back(rel(1));
        xz.x.push_back(rel(0));
        xz.y.push_back(rel(2));
    }
    std::string s = svg_open(760.0, 480.0);
    const char* title = framed ? "path seen from the target frame" : "path relative to the target";
    draw_panel(s, 70.0, 40.0, 650.0, 380.0, title, "ahead [m]", "across / below [m]", {&xy, &xz});
    s += "</svg>\n";
    return s;
}

} // namespace

std::vector<std::string> write_plots(const TrajectoryLog& log, const std::string& dir) {
    if (log.rows.empty()) throw std::invalid_argument("write_plots: empty log");
    std::filesystem::create_directories(dir);
    const std::string base = dir + "/";
    std::vector<std::string> out;

    auto put = [&](const char* name, const std::string& body) {
        const std::string path = base + name;
        write_text_file(path, body);
        out.push_back(path);
    };

    put("trajectory.svg", trajectory_chart(log));
    put("relative_path.svg", relative_chart(log));
    put("error_norm.svg", time_chart(log, "position error norm", "[m]",
                                     [](const LogRow& r) { return r.ep_norm; }));
    put("psi.svg", time_chart(log, "attitude error", "psi",
                              [](const LogRow& r) { return r.psi; }));
    put("sdot.svg", time_chart(log, "path point speed", "[m/s]",
                               [](const LogRow& r) { return r.sdot; }));
    put("wref2.svg", time_chart(log, "rate reference, second axis", "[rad/s]",
                                [](const LogRow& r) { return r.wref(0); }));
    put("wref3.svg", time_chart(log, "rate reference, third axis", "[rad/s]",
                                [](const LogRow& r) { return r.wref(1); }));
    return out;
}

} // namespace mpf
