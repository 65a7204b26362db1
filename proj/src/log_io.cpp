#include "mpf/log_io.hpp"

#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpf {

const char* const kLogHeader =
    "t,px,py,pz,ptx,pty,ptz,ep1,ep2,ep3,ep_norm,yw,zw,s,sdot,psi,er_norm,"
    "wref2,wref3,w2,w3,wtil_norm,etax,etay,etaz,V,roa";

namespace {

const char* const kFramesHeader =
    "t,"
    "rw11,rw12,rw13,rw21,rw22,rw23,rw31,rw32,rw33,"
    "rd11,rd12,rd13,rd21,rd22,rd23,rd31,rd32,rd33,"
    "rt11,rt12,rt13,rt21,rt22,rt23,rt31,rt32,rt33,"
    "rf11,rf12,rf13,rf21,rf22,rf23,rf31,rf32,rf33,"
    "k1,k2,er2,er3,wft1,wft2,wft3,wdi1,wdi2,wdi3,"
    "wtbx,wtby,wtbz,vtbx,vtby,vtbz";

void append_num(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_mat(std::string& out, const Mat3& m) {
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            out += ',';
            append_num(out, m(r, c));
        }
}

// Splits one CSV line and converts every cell with strtod; the caller knows
// how many cells to expect.
std::vector<double> parse_cells(const std::string& line, size_t expected, size_t lineno) {
    std::vector<double> cells;
    cells.reserve(expected);
    const char* p = line.c_str();
    while (true) {
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p) break;
        cells.push_back(v);
        p = end;
        if (*p != ',') break;
        ++p;
    }
    if (cells.size() != expected || *p != '\0') {
        throw std::runtime_error("malformed log line " + std::to_string(lineno) + ": expected " +
                                 std::to_string(expected) + " cells");
    }
    return cells;
}

} // namespace

std::string emit_log_csv(const TrajectoryLog& log) {
    std::string out;
    out.reserve(64 + log.rows.size() * 420);
    out += kLogHeader;
    out += '\n';
    for (const auto& r : log.rows) {
        const double cells[26] = {r.t,       r.p(0),     r.p(1),       r.p(2),    r.p_t(0),
                                  r.p_t(1),  r.p_t(2),   r.ep(0),      r.ep(1),   r.ep(2),
                                  r.ep_norm, r.yw,       r.zw,         r.s,       r.sdot,
                                  r.psi,     r.er_norm,  r.wref(0),    r.wref(1), r.w(0),
                                  r.w(1),    r.wtil_norm, r.eta(0),    r.eta(1),  r.eta(2),
                                  r.V};
        for (int i = 0; i < 26; ++i) {
            if (i) out += ',';
            append_num(out, cells[i]);
        }
        out += ',';
        out += r.roa ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string emit_frames_csv(const TrajectoryLog& log) {
    std::string out;
    out.reserve(64 + log.frames.size() * 1100);
    out += kFramesHeader;
    out += '\n';
    for (const auto& f : log.frames) {
        append_num(out, f.t);
        append_mat(out, f.R_W);
        append_mat(out, f.R_D);
        append_mat(out, f.R_T);
        append_mat(out, f.R_F);
        const double tail[16] = {f.k1,        f.k2,        f.er2,       f.er3,
                                 f.w_ft(0),   f.w_ft(1),   f.w_ft(2),   f.w_di(0),
                                 f.w_di(1),   f.w_di(2),   f.w_t_body(0), f.w_t_body(1),
                                 f.w_t_body(2), f.v_t_body(0), f.v_t_body(1), f.v_t_body(2)};
        for (double v : tail) {
            out += ',';
            append_num(out, v);
        }
        out += '\n';
    }
    return out;
}

std::string emit_meta_json(const TrajectoryLog& log) {
    nlohmann::json j;
    j["name"] = log.meta.name;
    j["dt"] = log.meta.dt;
    j["airspeed"] = log.meta.airspeed;
    j["gains"] = {{"kp", log.meta.gains.kp}, {"kr", log.meta.gains.kr},
                  {"alpha", log.meta.gains.alpha}};
    j["roa"] = {{"c1", log.meta.roa.c1}, {"c2", log.meta.roa.c2}, {"cbar", log.meta.roa.cbar}};
    j["bandwidth"] = log.meta.bandwidth;
    j["perfect"] = log.meta.perfect;
    j["windy"] = log.meta.windy;
    j["certificate"] = {{"ok", log.cert.ok},
                        {"gain_bound", log.cert.gain_bound},
                        {"lhs", log.cert.lhs},
                        {"rhs", log.cert.rhs},
                        {"lambda_w_min", log.cert.lambda_w_min},
                        {"lambda", log.cert.lambda}};
    return j.dump(2) + "\n";
}

TrajectoryLog parse_log_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kLogHeader)
        throw std::runtime_error("log header mismatch");
    TrajectoryLog log;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<double> c = parse_cells(line, 27, lineno);
        LogRow r;
        r.t = c[0];
        r.p = Vec3(c[1], c[2], c[3]);
        r.p_t = Vec3(c[4], c[5], c[6]);
        r.ep = Vec3(c[7], c[8], c[9]);
        r.ep_norm = c[10];
        r.yw = c[11];
        r.zw = c[12];
        r.s = c[13];
        r.sdot = c[14];
        r.psi = c[15];
        r.er_norm = c[16];
        r.wref = Vec2(c[17], c[18]);
        r.w = Vec2(c[19], c[20]);
        r.wtil_norm = c[21];
        r.eta = Vec3(c[22], c[23], c[24]);
        r.V = c[25];
        r.roa = c[26] != 0.0 ? 1 : 0;
        log.rows.push_back(r);
    }
    if (log.rows.size() >= 2) log.meta.dt = log.rows[1].t - log.rows[0].t;
    return log;
}

void parse_frames_csv(const std::string& text, TrajectoryLog& log) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kFramesHeader)
        throw std::runtime_error("frame log header mismatch");
    log.frames.clear();
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<double> c = parse_cells(line, 53, lineno);
        FrameRow f;
        f.t = c[0];
        size_t i = 1;
        Mat3* mats[4] = {&f.R_W, &f.R_D, &f.R_T, &f.R_F};
        for (Mat3* m : mats)
            for (int r = 0; r < 3; ++r)
                for (int cc = 0; cc < 3; ++cc) (*m)(r, cc) = c[i++];
        f.k1 = c[i++];
        f.k2 = c[i++];
        f.er2 = c[i++];
        f.er3 = c[i++];
        f.w_ft = Vec3(c[i], c[i + 1], c[i + 2]);
        i += 3;
        f.w_di = Vec3(c[i], c[i + 1], c[i + 2]);
        i += 3;
        f.w_t_body = Vec3(c[i], c[i + 1], c[i + 2]);
        i += 3;
        f.v_t_body = Vec3(c[i], c[i + 1], c[i + 2]);
        log.frames.push_back(f);
    }
    if (!log.frames.empty() && log.frames.size() != log.rows.size())
        throw std::runtime_error("frame log row count does not match the primary log");
}

void parse_meta_json(const std::string& text, TrajectoryLog& log) {
    const nlohmann::json j = nlohmann::json::parse(text);
    log.meta.name = j.value("name", log.meta.name);
    log.meta.dt = j.value("dt", log.meta.dt);
    log.meta.airspeed = j.value("airspeed", log.meta.airspeed);
    if (j.contains("gains")) {
        log.meta.gains.kp = j["gains"].value("kp", log.meta.gains.kp);
        log.meta.gains.kr = j["gains"].value("kr", log.meta.gains.kr);
        log.meta.gains.alpha = j["gains"].value("alpha", log.meta.gains.alpha);
    }
    if (j.contains("roa")) {
        log.meta.roa.c1 = j["roa"].value("c1", log.meta.roa.c1);
        log.meta.roa.c2 = j["roa"].value("c2", log.meta.roa.c2);
        log.meta.roa.cbar = j["roa"].value("cbar", log.meta.roa.cbar);
    }
    log.meta.bandwidth = j.value("bandwidth", log.meta.bandwidth);
    log.meta.perfect = j.value("perfect", log.meta.perfect);
    log.meta.windy = j.value("windy", log.meta.windy);
    if (j.contains("certificate")) {
        const auto& c = j["certificate"];
        log.cert.ok = c.value("ok", false);
        log.cert.gain_bound = c.value("gain_bound", 0.0);
        log.cert.lhs = c.value("lhs", 0.0);
        log.cert.rhs = c.value("rhs", 0.0);
        log.cert.lambda_w_min = c.value("lambda_w_min", 0.0);
        log.cert.lambda = c.value("lambda", 0.0);
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return in.good();
}

} // namespace mpf
