#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "errors.hpp"
#include "profile_ode.hpp"
#include "stability.hpp"
#include "sweep.hpp"

namespace shrinker::io {

using json = nlohmann::json;

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw precondition_error("not a number: '" + s + "'");
    }
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw precondition_error("not a number: '" + s + "'");
    return v;
}

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

// ---- CSV tables -----------------------------------------------------------------------------

inline std::vector<std::vector<double>> read_csv(std::istream& in, const std::vector<std::string>& header) {
    std::string line;
    if (!std::getline(in, line)) throw precondition_error("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
    if (line != expected) throw precondition_error("CSV header must be '" + expected + "', got '" + line + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell));
        if (row.size() != header.size()) throw precondition_error("CSV row has the wrong number of fields: " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_profile_csv(std::ostream& out, const ProfileCurve& p) {
    out << "t,u,u_prime\n";
    for (const ProfileSample& s : p.samples) out << fmt17(s.t) << ',' << fmt17(s.u) << ',' << fmt17(s.u_prime) << '\n';
}

inline std::vector<ProfileSample> read_profile_csv(std::istream& in) {
    std::vector<ProfileSample> out;
    for (const auto& r : read_csv(in, {"t", "u", "u_prime"})) out.push_back({r[0], r[1], r[2]});
    return out;
}

inline void write_polyline_csv(std::ostream& out, const Polyline& p) {
    out << "r,z\n";
    for (const CurvePoint& q : p) out << fmt17(q.r) << ',' << fmt17(q.z) << '\n';
}

inline Polyline read_polyline_csv(std::istream& in) {
    Polyline out;
    for (const auto& r : read_csv(in, {"r", "z"})) out.push_back({r[0], r[1]});
    return out;
}

inline void write_history_csv(std::ostream& out, const std::vector<SeparationSample>& h) {
    out << "param,min_separation\n";
    for (const auto& s : h) out << fmt17(s.param) << ',' << fmt17(s.separation) << '\n';
}

inline std::vector<SeparationSample> read_history_csv(std::istream& in) {
    std::vector<SeparationSample> out;
    for (const auto& r : read_csv(in, {"param", "min_separation"})) out.push_back({r[0], r[1]});
    return out;
}

// ---- profile sidecar ------------------------------------------------------------------------

inline json to_json(const ShooterConfig& c) {
    return {{"dim_n", c.dim_n},         {"initial_radius", c.initial_radius}, {"initial_slope", opt_json(c.initial_slope)},
            {"horizon", c.horizon},     {"abs_tol", c.abs_tol},               {"rel_tol", c.rel_tol},
            {"max_steps", c.max_steps}, {"auto_horizon", c.auto_horizon}};
}

inline ShooterConfig shooter_config_from_json(const json& j) {
    ShooterConfig c;
    c.dim_n = j.at("dim_n").get<int>();
    c.initial_radius = j.at("initial_radius").get<double>();
    c.initial_slope = opt_from<double>(j, "initial_slope");
    c.horizon = j.at("horizon").get<double>();
    c.abs_tol = j.at("abs_tol").get<double>();
    c.rel_tol = j.at("rel_tol").get<double>();
    c.max_steps = j.at("max_steps").get<std::size_t>();
    c.auto_horizon = j.at("auto_horizon").get<bool>();
    return c;
}

inline json profile_sidecar(const ProfileCurve& p) {
    return {{"dim_n", p.dim_n},
            {"theta_hat", opt_json(p.theta_hat)},
            {"theta_error", opt_json(p.theta_error)},
            {"cone_slope", opt_json(p.cone_slope)},
            {"termination", std::string(to_string(p.termination))},
            {"direction", p.direction == SweepDirection::forward ? "forward" : "backward"},
            {"samples", p.samples.size()},
            {"config", to_json(p.config)}};
}

inline ProfileCurve profile_from(const json& sidecar, std::vector<ProfileSample> samples) {
    ProfileCurve p;
    p.dim_n = sidecar.at("dim_n").get<int>();
    p.theta_hat = opt_from<double>(sidecar, "theta_hat");
    p.theta_error = opt_from<double>(sidecar, "theta_error");
    p.cone_slope = opt_from<double>(sidecar, "cone_slope");
    p.termination = termination_from_string(sidecar.at("termination").get<std::string>());
    const std::string dir = sidecar.at("direction").get<std::string>();
    if (dir != "forward" && dir != "backward") throw precondition_error("unknown direction '" + dir + "'");
    p.direction = dir == "forward" ? SweepDirection::forward : SweepDirection::backward;
    p.config = shooter_config_from_json(sidecar.at("config"));
    if (sidecar.at("samples").get<std::size_t>() != samples.size())
        throw precondition_error("sidecar sample count does not match the CSV");
    p.samples = std::move(samples);
    return p;
}

// ---- surfaces and certificates -------------------------------------------------------------

inline json to_json(const ModelSurface& s) {
    json j{{"ambient_dim", s.ambient_dim}};
    std::visit(
        [&](const auto& v) {
            using S = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<S, Sphere>) {
                j["kind"] = "sphere";
                j["R"] = v.radius;
            } else if constexpr (std::is_same_v<S, Hyperplane>) {
                j["kind"] = "hyperplane";
                j["t"] = v.height;
            } else if constexpr (std::is_same_v<S, Cylinder>) {
                j["kind"] = "cylinder";
                j["k"] = v.k;
                j["R"] = v.radius;
            } else {
                throw precondition_error("only sphere, hyperplane and cylinder surfaces serialise");
            }
        },
        s.shape);
    return j;
}

inline ModelSurface model_surface_from_json(const json& j) {
    const int dim = j.at("ambient_dim").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sphere") return {dim, Sphere{j.at("R").get<double>()}};
    if (kind == "hyperplane") return {dim, Hyperplane{j.at("t").get<double>()}};
    if (kind == "cylinder") return {dim, Cylinder{j.at("k").get<int>(), j.at("R").get<double>()}};
    throw precondition_error("unknown surface kind '" + kind + "'");
}

inline json to_json(const TestFunction& u) {
    return {{"kind", u.kind == TestFunction::Kind::cylinder_cosine ? "cylinder_cosine" : "hyperplane_cosine"},
            {"n", u.n}, {"k", u.k}, {"R", u.R}, {"r", u.r}, {"amplitude", u.amplitude}};
}

inline TestFunction test_function_from_json(const json& j) {
    TestFunction u;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind != "cylinder_cosine" && kind != "hyperplane_cosine") throw precondition_error("unknown test function");
    u.kind = kind == "cylinder_cosine" ? TestFunction::Kind::cylinder_cosine : TestFunction::Kind::hyperplane_cosine;
    u.n = j.at("n").get<int>();
    u.k = j.at("k").get<int>();
    u.R = j.at("R").get<double>();
    u.r = j.at("r").get<double>();
    u.amplitude = j.at("amplitude").get<double>();
    return u;
}

inline json to_json(const InstabilityCertificate& c) {
    return {{"surface", to_json(c.surface)},
            {"test", to_json(c.test)},
            {"r", c.r},
            {"c_bound", c.c_bound},
            {"rayleigh_value", c.rayleigh_value},
            {"rayleigh_by_parts", c.rayleigh_by_parts},
            {"pointwise_margin", c.pointwise_margin},
            {"min_drift", c.min_drift},
            {"positive_interior", c.positive_interior},
            {"valid", c.valid()},
            {"grid", {{"points_per_axis", c.grid_points}, {"dimension", c.test.m()}, {"pointwise_tolerance", c.pointwise_tolerance}}},
            {"quadrature", {{"rule", "gauss_legendre"}, {"nodes_per_axis", c.quadrature_nodes}}}};
}

inline InstabilityCertificate certificate_from_json(const json& j) {
    InstabilityCertificate c;
    c.surface = model_surface_from_json(j.at("surface"));
    c.test = test_function_from_json(j.at("test"));
    c.r = j.at("r").get<double>();
    c.c_bound = j.at("c_bound").get<double>();
    c.rayleigh_value = j.at("rayleigh_value").get<double>();
    c.rayleigh_by_parts = j.at("rayleigh_by_parts").get<double>();
    c.pointwise_margin = j.at("pointwise_margin").get<double>();
    c.min_drift = j.at("min_drift").get<double>();
    c.positive_interior = j.at("positive_interior").get<bool>();
    c.grid_points = j.at("grid").at("points_per_axis").get<int>();
    c.pointwise_tolerance = j.at("grid").at("pointwise_tolerance").get<double>();
    c.quadrature_nodes = j.at("quadrature").at("nodes_per_axis").get<int>();
    return c;
}

// ---- contact reports ------------------------------------------------------------------------

inline json to_json(const ContactReport& r) {
    json hist = json::array();
    for (const auto& h : r.history) hist.push_back({h.param, h.separation});
    json contact = r.contact ? json{{"r", r.contact->r}, {"z", r.contact->z}} : json(nullptr);
    return {{"sweep", r.sweep},
            {"barrier", r.barrier},
            {"parameter", opt_json(r.parameter)},
            {"bracket", r.bracket_lo ? json{*r.bracket_lo, *r.bracket_hi} : json(nullptr)},
            {"contact", contact},
            {"history", hist},
            {"barrier_hphi", opt_json(r.barrier_hphi)},
            {"barrier_hphi_printed", opt_json(r.barrier_hphi_printed)},
            {"test_hphi", opt_json(r.test_hphi)},
            {"test_hphi_measured", opt_json(r.test_hphi_measured)},
            {"normal_alignment", r.normal_alignment},
            {"verdict", std::string(to_string(r.verdict))},
            {"boundary_clearance", opt_json(r.boundary_clearance)},
            {"note", r.note}};
}

inline ContactReport report_from_json(const json& j) {
    ContactReport r;
    r.sweep = j.at("sweep").get<std::string>();
    r.barrier = j.at("barrier").get<std::string>();
    r.parameter = opt_from<double>(j, "parameter");
    if (!j.at("bracket").is_null()) {
        r.bracket_lo = j.at("bracket").at(0).get<double>();
        r.bracket_hi = j.at("bracket").at(1).get<double>();
    }
    if (!j.at("contact").is_null()) r.contact = CurvePoint{j.at("contact").at("r").get<double>(), j.at("contact").at("z").get<double>()};
    for (const auto& h : j.at("history")) r.history.push_back({h.at(0).get<double>(), h.at(1).get<double>()});
    r.barrier_hphi = opt_from<double>(j, "barrier_hphi");
    r.barrier_hphi_printed = opt_from<double>(j, "barrier_hphi_printed");
    r.test_hphi = opt_from<double>(j, "test_hphi");
    r.test_hphi_measured = opt_from<double>(j, "test_hphi_measured");
    r.normal_alignment = j.at("normal_alignment").get<int>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    r.boundary_clearance = opt_from<double>(j, "boundary_clearance");
    r.note = j.at("note").get<std::string>();
    return r;
}

// ---- files ----------------------------------------------------------------------------------

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw precondition_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw precondition_error("failed writing '" + path + "'");
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw precondition_error("cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void save_profile(const std::string& prefix, const ProfileCurve& p) {
    std::ostringstream csv;
    write_profile_csv(csv, p);
    write_text(prefix + ".csv", csv.str());
    write_text(prefix + ".json", dump(profile_sidecar(p)));
}

inline ProfileCurve load_profile(const std::string& prefix) {
    std::istringstream csv(read_text(prefix + ".csv"));
    return profile_from(json::parse(read_text(prefix + ".json")), read_profile_csv(csv));
}

inline TestSurface load_test_surface(const std::string& path, int ambient_dim, Claim claim) {
    std::istringstream in(read_text(path));
    TestSurface s;
    s.ambient_dim = ambient_dim;
    s.profile = read_polyline_csv(in);
    s.claim = claim;
    s.validate();
    return s;
}

}  // namespace shrinker::io
