#include "mpf/config.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mpf {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) fail("unknown key '" + item.key() + "' in " + where);
    }
}

Vec3 get_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) fail(where + " must be an array of three numbers");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Rot3 get_attitude(const json& sec, const std::string& where, const Rot3& fallback) {
    if (!sec.contains("rpy0")) return fallback;
    const Vec3 rpy = get_vec3(sec["rpy0"], where + ".rpy0");
    return rot_zyx(rpy(0), rpy(1), rpy(2));
}

std::string resolve(const std::string& base_dir, const std::string& file) {
    if (file.empty() || file[0] == '/') return file;
    return base_dir + "/" + file;
}

PathSpec parse_path(const json& j, const std::string& base_dir) {
    require_keys(j, "path", {"kind", "scale", "freq", "radius", "file"});
    const std::string kind = j.value("kind", std::string("lemniscate"));
    if (kind == "lemniscate") {
        return lemniscate_path(j.value("scale", 50.0), j.value("freq", 0.01));
    }
    if (kind == "circle") {
        return circle_path(j.value("radius", 50.0));
    }
    if (kind == "sampled") {
        if (!j.contains("file")) fail("sampled path needs a 'file'");
        return load_sampled_path_csv(resolve(base_dir, j["file"].get<std::string>()));
    }
    fail("unknown path kind '" + kind + "'");
}

TargetProfile parse_profile(const json& j, const std::string& base_dir) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "weaving") return weaving_maneuver_profile();
        if (name == "stationary") return constant_profile(Vec3::Zero(), Vec3::Zero());
        fail("unknown target profile '" + name + "'");
    }
    require_keys(j, "target.profile", {"kind", "v", "w", "rows", "file"});
    const std::string kind = j.value("kind", std::string(""));
    if (kind == "constant") {
        return constant_profile(get_vec3(j.value("v", json::array({0, 0, 0})), "profile.v"),
                                get_vec3(j.value("w", json::array({0, 0, 0})), "profile.w"));
    }
    if (kind == "piecewise") {
        if (!j.contains("rows") || !j["rows"].is_array() || j["rows"].empty())
            fail("piecewise profile needs a nonempty 'rows' array");
        std::vector<double> times;
        std::vector<Vec3> vs, ws;
        for (const auto& row : j["rows"]) {
            require_keys(row, "profile row", {"t", "v", "w"});
            if (!row.contains("t")) fail("profile row needs 't'");
            times.push_back(row["t"].get<double>());
            vs.push_back(get_vec3(row.value("v", json::array({0, 0, 0})), "profile row v"));
            ws.push_back(get_vec3(row.value("w", json::array({0, 0, 0})), "profile row w"));
        }
        return piecewise_profile(times, vs, ws);
    }
    if (kind == "file") {
        if (!j.contains("file")) fail("file profile needs a 'file'");
        return load_profile_csv(resolve(base_dir, j["file"].get<std::string>()));
    }
    fail("unknown target profile kind '" + kind + "'");
}

} // namespace

Scenario parse_scenario_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& ex) {
        fail(std::string("not valid JSON: ") + ex.what());
    }
    if (!j.is_object()) fail("top level must be an object");
    require_keys(j, "top level",
                 {"name", "path", "target", "vehicle", "gains", "roa", "autopilot", "wind", "sim"});

    Scenario sc;
    sc.name = j.value("name", sc.name);
    if (j.contains("path")) sc.path = parse_path(j["path"], base_dir);
    if (j.contains("target")) {
        const json& t = j["target"];
        require_keys(t, "target", {"profile", "p0", "rpy0"});
        if (t.contains("profile")) sc.target = parse_profile(t["profile"], base_dir);
        if (t.contains("p0")) sc.target_p0 = get_vec3(t["p0"], "target.p0");
        sc.target_R0 = get_attitude(t, "target", sc.target_R0);
    }
    if (j.contains("vehicle")) {
        const json& v = j["vehicle"];
        require_keys(v, "vehicle", {"p0", "rpy0", "airspeed"});
        if (v.contains("p0")) sc.vehicle_p0 = get_vec3(v["p0"], "vehicle.p0");
        sc.vehicle_R0 = get_attitude(v, "vehicle", sc.vehicle_R0);
        sc.airspeed = v.value("airspeed", sc.airspeed);
        if (!(sc.airspeed > 0.0)) fail("vehicle.airspeed must be positive");
    }
    if (j.contains("gains")) {
        const json& g = j["gains"];
        require_keys(g, "gains", {"kp", "kr", "alpha"});
        sc.gains.kp = g.value("kp", sc.gains.kp);
        sc.gains.kr = g.value("kr", sc.gains.kr);
        sc.gains.alpha = g.value("alpha", sc.gains.alpha);
    }
    if (j.contains("roa")) {
        const json& r = j["roa"];
        require_keys(r, "roa", {"c1", "c2", "cbar"});
        sc.roa.c1 = r.value("c1", sc.roa.c1);
        sc.roa.c2 = r.value("c2", sc.roa.c2);
        sc.roa.cbar = r.value("cbar", sc.roa.cbar);
    }
    if (j.contains("autopilot")) {
        const json& a = j["autopilot"];
        require_keys(a, "autopilot", {"bandwidth", "perfect"});
        sc.bandwidth = a.value("bandwidth", sc.bandwidth);
        sc.perfect = a.value("perfect", sc.perfect);
        if (!(sc.bandwidth > 0.0)) fail("autopilot.bandwidth must be positive");
    }
    if (j.contains("wind")) {
        const json& w = j["wind"];
        require_keys(w, "wind", {"boxes", "gust", "gusts"});
        if (w.contains("boxes")) {
            for (const auto& b : w["boxes"]) {
                require_keys(b, "wind box", {"min", "max", "velocity"});
                WindBox box;
                box.lo = get_vec3(b.value("min", json::array({0, 0, 0})), "box.min");
                box.hi = get_vec3(b.value("max", json::array({0, 0, 0})), "box.max");
                box.wind = get_vec3(b.value("velocity", json::array({0, 0, 0})), "box.velocity");
                for (int i = 0; i < 3; ++i)
                    if (box.lo(i) > box.hi(i)) fail("wind box has min above max");
                sc.wind.boxes.push_back(box);
            }
        }
        auto parse_gust = [&](const json& g) {
            require_keys(g, "gust", {"t_start", "t_end", "velocity"});
            WindGust gust;
            gust.t0 = g.value("t_start", 0.0);
            gust.t1 = g.value("t_end", 0.0);
            gust.wind = get_vec3(g.value("velocity", json::array({0, 0, 0})), "gust.velocity");
            if (gust.t1 < gust.t0) fail("gust ends before it starts");
            sc.wind.gusts.push_back(gust);
        };
        if (w.contains("gust")) parse_gust(w["gust"]);
        if (w.contains("gusts"))
            for (const auto& g : w["gusts"]) parse_gust(g);
    }
    if (j.contains("sim")) {
        const json& s = j["sim"];
        require_keys(s, "sim", {"dt", "duration", "s0", "strict"});
        sc.sim.dt = s.value("dt", sc.sim.dt);
        sc.sim.duration = s.value("duration", sc.sim.duration);
        sc.sim.s0 = s.value("s0", sc.sim.s0);
        sc.sim.strict = s.value("strict", sc.sim.strict);
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::string dir = ".";
    const size_t slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str(), dir);
}

} // namespace mpf
