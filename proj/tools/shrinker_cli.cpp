// Command-line front end: quantities, shoot, catenoid, certify, sweep.

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shrinker/shrinker.hpp"

namespace {

using namespace shrinker;
using json = nlohmann::json;

enum Exit { ok = 0, precondition = 2, contradiction = 3, numerical = 4, vanished = 5, blew_up = 6 };

// ---- key=value surface specs ----------------------------------------------------------------

struct KeyValues {
    std::map<std::string, std::vector<double>> values;

    static KeyValues parse(const std::vector<std::string>& tokens, const std::vector<std::string>& allowed) {
        KeyValues kv;
        for (const std::string& tok : tokens) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw precondition_error("expected key=value, got '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                throw precondition_error("unknown key '" + key + "'");
            if (kv.values.count(key)) throw precondition_error("key '" + key + "' given twice");
            std::stringstream ss(tok.substr(eq + 1));
            std::string item;
            auto& list = kv.values[key];
            while (std::getline(ss, item, ',')) list.push_back(io::parse_double(item));
            if (list.empty()) throw precondition_error("key '" + key + "' has no value");
        }
        return kv;
    }

    std::vector<double> list(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        auto it = values.find(key);
        if (it != values.end()) return it->second;
        if (fallback) return {*fallback};
        throw precondition_error("missing key '" + key + "'");
    }

    double one(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        const auto l = list(key, fallback);
        if (l.size() != 1) throw precondition_error("key '" + key + "' takes a single value");
        return l.front();
    }
};

int as_int(double v, const char* what) {
    if (v != std::floor(v) || std::abs(v) > 1e6) throw precondition_error(std::string(what) + " must be an integer");
    return static_cast<int>(v);
}

struct SurfaceFlags {
    std::vector<std::string> sphere, cylinder, plane;

    void add(CLI::App* app) {
        auto* s = app->add_option("--sphere", sphere, "sphere: n=<dim> R=<radius>")->expected(1, -1);
        auto* c = app->add_option("--cylinder", cylinder, "cylinder S^k x R^(n-k): k= R= n=")->expected(1, -1);
        auto* p = app->add_option("--plane", plane, "hyperplane: n=<dim> t=<height>")->expected(1, -1);
        s->excludes(c)->excludes(p);
        c->excludes(p);
    }

    // Every surface named by the flags; comma lists expand into a grid.
    std::vector<ModelSurface> surfaces() const {
        std::vector<ModelSurface> out;
        if (!sphere.empty()) {
            const auto kv = KeyValues::parse(sphere, {"n", "R"});
            for (double n : kv.list("n", 2.0))
                for (double R : kv.list("R")) out.push_back(make_sphere(as_int(n, "n"), R));
        } else if (!cylinder.empty()) {
            const auto kv = KeyValues::parse(cylinder, {"n", "k", "R"});
            for (double k : kv.list("k"))
                for (double n : kv.list("n", k + 1))
                    for (double R : kv.list("R")) out.push_back(make_cylinder(as_int(n, "n"), as_int(k, "k"), R));
        } else if (!plane.empty()) {
            const auto kv = KeyValues::parse(plane, {"n", "t"});
            for (double n : kv.list("n", 2.0))
                for (double t : kv.list("t", 0.0)) out.push_back(make_hyperplane(as_int(n, "n"), t));
        } else {
            throw precondition_error("one of --sphere, --cylinder, --plane is required");
        }
        for (const auto& s : out) s.validate();
        return out;
    }
};

// ---- output ---------------------------------------------------------------------------------

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_text(path, text);
}

json surface_row(const ModelSurface& s, const WeightedScalars& w) {
    json row = io::to_json(s);
    row["H"] = w.H;
    row["support"] = w.support;
    row["H_phi"] = w.H_phi;
    row["A_norm_sq"] = w.A_norm_sq;
    row["ric_phi"] = w.ric_phi;
    return row;
}

// ---- subcommands ----------------------------------------------------------------------------

struct QuantitiesArgs {
    SurfaceFlags surface;
    std::string format = "csv";
    std::string out;
};

int run_quantities(const QuantitiesArgs& a) {
    std::ostringstream os;
    json rows = json::array();
    if (a.format == "csv") os << "surface,n,k,R,t,H,support,H_phi,A_norm_sq,ric_phi\n";
    for (const ModelSurface& s : a.surface.surfaces()) {
        const WeightedScalars w = weighted_quantities(s);
        const json row = surface_row(s, w);
        if (a.format == "json") {
            rows.push_back(row);
            continue;
        }
        auto field = [&](const char* key) { return row.contains(key) ? io::fmt17(row[key].get<double>()) : std::string(); };
        os << row["kind"].get<std::string>() << ',' << s.n() << ',' << field("k") << ',' << field("R") << ','
           << field("t") << ',' << io::fmt17(w.H) << ',' << io::fmt17(w.support) << ',' << io::fmt17(w.H_phi) << ','
           << io::fmt17(w.A_norm_sq) << ',' << io::fmt17(w.ric_phi) << '\n';
    }
    emit(a.out, a.format == "json" ? io::dump(rows) : os.str());
    return ok;
}

struct ShootArgs {
    int n = 2;
    double a = 1.0;
    std::optional<double> slope;
    std::optional<double> theta;
    std::optional<double> a_lo, a_hi;
    double T = 50.0;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_steps = 20'000'000;
    bool fixed_horizon = false;
    bool check = false;
    std::string out = "profile";
};

ShooterConfig shooter_config(const ShootArgs& a) {
    ShooterConfig c;
    c.dim_n = a.n;
    c.initial_radius = a.a;
    c.initial_slope = a.slope;
    c.horizon = a.T;
    c.abs_tol = a.abs_tol;
    c.rel_tol = a.rel_tol;
    c.max_steps = a.max_steps;
    c.auto_horizon = !a.fixed_horizon;
    return c;
}

int finish_profile(const ShootArgs& a, const ProfileCurve& p) {
    io::save_profile(a.out, p);
    json summary = io::profile_sidecar(p);
    summary.erase("config");
    summary["u0"] = p.samples.empty() ? 0.0 : p.at(p.t_min()).u;
    summary["t_max"] = p.samples.empty() ? 0.0 : p.t_max();
    summary["files"] = {a.out + ".csv", a.out + ".json"};
    int code = ok;
    switch (p.termination) {
        case Termination::reached_horizon: break;
        case Termination::radius_vanished: code = vanished; break;
        case Termination::blow_up: code = blew_up; break;
        case Termination::step_underflow: code = numerical; break;
    }
    if (a.check) {
        if (code != ok) throw precondition_error("--check needs a profile that reached the horizon");
        if (!p.theta_hat) throw numerical_error("no asymptotic slope estimate for the profile");
        const KmReport km = km_property_check(p);
        summary["check"] = {{"passed", km.all()},
                            {"above_cone", km.above_cone},
                            {"below_cylinder", km.below_cylinder},
                            {"slope_agreement", km.slope_agreement},
                            {"convex", km.convex},
                            {"slope_positive", km.slope_positive},
                            {"slope_below_theta", km.slope_below_theta},
                            {"ratio_above_slope", km.ratio_above_slope},
                            {"support_decreasing", km.support_decreasing}};
        if (!km.all()) code = numerical;
    }
    std::cout << io::dump(summary);
    return code;
}

int run_shoot(const ShootArgs& a) {
    const ShooterConfig cfg = shooter_config(a);
    cfg.validate();
    return finish_profile(a, shoot(cfg));
}

int run_catenoid(const ShootArgs& a) {
    ShooterConfig cfg = shooter_config(a);
    cfg.initial_slope.reset();
    if (!a.theta) throw precondition_error("--theta is required");
    if (a.a_lo.has_value() != a.a_hi.has_value()) throw precondition_error("--a-lo and --a-hi go together");
    if (a.a_lo) return finish_profile(a, find_catenoid(a.n, *a.theta, *a.a_lo, *a.a_hi, cfg));
    return finish_profile(a, catenoid_from_theta(a.n, *a.theta, cfg));
}

struct CertifyArgs {
    SurfaceFlags surface;
    std::string r = "auto";
    int grid = 101;
    int nodes = 64;
    std::string out;
};

int run_certify(const CertifyArgs& a) {
    const auto list = a.surface.surfaces();
    if (list.size() != 1) throw precondition_error("certify takes a single surface");
    const ModelSurface& s = list.front();
    const double r = a.r == "auto" ? 2.0 * min_r(s) : io::parse_double(a.r);
    CertifyOptions opt;
    opt.grid_points = a.grid;
    opt.quadrature_nodes = a.nodes;
    const InstabilityCertificate c = certify_instability(s, r, opt);
    emit(a.out, io::dump(io::to_json(c)));
    return c.valid() ? ok : numerical;
}

struct SweepArgs {
    std::string kind;
    std::string test;
    int n = 2;
    double s = 0.5;
    double R = 2.0;
    int k = 1;
    double lambda = 0.0;
    std::string claim = "shrinker";
    int theta_points = 60;
    std::string out;
    std::string history;
};

Claim parse_claim(const std::string& text) {
    if (text == "shrinker") return {};
    if (text == "none") return {Claim::Kind::none, 0.0};
    if (text.rfind("lambda=", 0) == 0) return {Claim::Kind::lambda, io::parse_double(text.substr(7))};
    throw precondition_error("--claim must be shrinker, none or lambda=<value>");
}

int run_sweep(const SweepArgs& a) {
    const TestSurface test = io::load_test_surface(a.test, a.n + 1, parse_claim(a.claim));
    SweepOptions opt;
    opt.theta_points = a.theta_points;
    ContactReport rep;
    if (a.kind == "halfspace")
        rep = sweep_halfspace(test, a.s, opt);
    else if (a.kind == "ball")
        rep = sweep_ball(test, a.R, opt);
    else if (a.kind == "cylinder")
        rep = sweep_cylinder(test, a.k, a.R, opt);
    else
        rep = lambda_offset(test, a.lambda, opt);
    emit(a.out, io::dump(io::to_json(rep)));
    if (!a.history.empty()) {
        std::ostringstream csv;
        io::write_history_csv(csv, rep.history);
        io::write_text(a.history, csv.str());
    }
    return rep.verdict == Verdict::contradiction ? contradiction : ok;
}

// ---- --config -------------------------------------------------------------------------------

std::string scalar_token(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return io::fmt17(v.get<double>());
    throw precondition_error("config values must be strings, numbers, booleans, arrays or objects");
}

// Expands a JSON config into command-line tokens so CLI11 validates it like flags.
std::vector<std::string> config_tokens(const json& cfg) {
    if (!cfg.is_object()) throw precondition_error("config must be a JSON object");
    if (!cfg.contains("subcommand") || !cfg["subcommand"].is_string())
        throw precondition_error("config needs a string 'subcommand'");
    std::vector<std::string> out;
    std::stringstream words(cfg["subcommand"].get<std::string>());
    for (std::string w; words >> w;) out.push_back(w);
    for (const auto& [key, v] : cfg.items()) {
        if (key == "subcommand") continue;
        const std::string flag = "--" + key;
        if (v.is_boolean()) {
            if (v.get<bool>()) out.push_back(flag);
        } else if (v.is_object()) {
            out.push_back(flag);
            for (const auto& [k2, v2] : v.items()) {
                std::string joined;
                if (v2.is_array())
                    for (const auto& x : v2) joined += (joined.empty() ? "" : ",") + scalar_token(x);
                else
                    joined = scalar_token(v2);
                out.push_back(k2 + "=" + joined);
            }
        } else if (v.is_array()) {
            out.push_back(flag);
            for (const auto& x : v) out.push_back(scalar_token(x));
        } else {
            out.push_back(flag);
            out.push_back(scalar_token(v));
        }
    }
    return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] != "--config" && args[i].rfind("--config=", 0) != 0) continue;
        std::string path;
        std::size_t consumed = 1;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw precondition_error("--config needs a file");
            path = args[i + 1];
            consumed = 2;
        } else {
            path = args[i].substr(9);
        }
        json cfg;
        try {
            cfg = json::parse(io::read_text(path));
        } catch (const json::exception& e) {
            throw precondition_error("cannot parse config '" + path + "': " + e.what());
        }
        std::vector<std::string> rest(args.begin(), args.begin() + static_cast<long>(i));
        rest.insert(rest.end(), args.begin() + static_cast<long>(i + consumed), args.end());
        std::vector<std::string> tokens = config_tokens(cfg);
        // Explicit flags after the config override it.
        tokens.insert(tokens.end(), rest.begin(), rest.end());
        return tokens;
    }
    return args;
}

void add_shoot_options(CLI::App* app, ShootArgs& a) {
    app->add_option("--n", a.n, "dimension of the hypersurface")->check(CLI::Range(2, 64));
    app->add_option("--T", a.T, "horizon (initial horizon when auto-extending)");
    app->add_option("--abs-tol", a.abs_tol, "absolute tolerance");
    app->add_option("--rel-tol", a.rel_tol, "relative tolerance");
    app->add_option("--max-steps", a.max_steps, "integrator step budget");
    app->add_flag("--fixed-horizon", a.fixed_horizon, "do not extend the horizon until the slope settles");
    app->add_flag("--check", a.check, "run the convexity/cone checks; exit 4 on failure");
    app->add_option("--out", a.out, "output prefix for <prefix>.csv and <prefix>.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted geometry of Gaussian space: model surfaces, half-catenoids, instability and sweeps"};
    app.require_subcommand(1);

    QuantitiesArgs qa;
    auto* quantities = app.add_subcommand("quantities", "H, <x,N>, H_phi, |A|^2 and Ric_phi of model surfaces");
    qa.surface.add(quantities);
    quantities->add_option("--format", qa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    quantities->add_option("--out", qa.out, "output file (default stdout)");

    ShootArgs sa;
    auto* shoot_cmd = app.add_subcommand("shoot", "integrate the rotational profile equation from u(0) = a");
    add_shoot_options(shoot_cmd, sa);
    shoot_cmd->add_option("--a", sa.a, "initial radius u(0)")->required();
    shoot_cmd->add_option("--slope", sa.slope, "initial slope u'(0); omitted: resolve the half-catenoid");

    ShootArgs ca;
    auto* catenoid_cmd = app.add_subcommand("catenoid", "half-catenoid with a prescribed cone slope");
    add_shoot_options(catenoid_cmd, ca);
    catenoid_cmd->add_option("--theta", ca.theta, "cone slope")->required();
    catenoid_cmd->add_option("--a-lo", ca.a_lo, "lower initial radius of the bracket");
    catenoid_cmd->add_option("--a-hi", ca.a_hi, "upper initial radius of the bracket");

    CertifyArgs cert;
    auto* certify = app.add_subcommand("certify", "instability certificate for a cylinder or hyperplane");
    cert.surface.add(certify);
    certify->add_option("--r", cert.r, "box side, or auto for twice the minimum");
    certify->add_option("--grid", cert.grid, "pointwise grid points per axis")->check(CLI::Range(2, 100000));
    certify->add_option("--nodes", cert.nodes, "Gauss-Legendre nodes per axis")->check(CLI::Range(1, 4096));
    certify->add_option("--out", cert.out, "certificate JSON (default stdout)");

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "first-contact sweeps against a rotational test surface");
    sweep->require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--test", wa.test, "test profile CSV with header r,z")->required();
        sub->add_option("--n", wa.n, "dimension of the hypersurface")->check(CLI::Range(2, 64));
        sub->add_option("--claim", wa.claim, "shrinker, none or lambda=<value>");
        sub->add_option("--out", wa.out, "report JSON (default stdout)");
        sub->add_option("--history", wa.history, "separation history CSV");
        sub->callback([&wa, sub] { wa.kind = sub->get_name(); });
    };
    auto* halfspace = sweep->add_subcommand("halfspace", "lifted half-catenoids in the upper halfspace");
    add_common(halfspace);
    halfspace->add_option("--s", wa.s, "lift height")->required();
    halfspace->add_option("--theta-points", wa.theta_points, "grid size over the cone slopes")->check(CLI::Range(2, 100000));
    auto* ball = sweep->add_subcommand("ball", "shrinking spheres inside a ball");
    add_common(ball);
    ball->add_option("--R", wa.R, "ball radius")->required();
    auto* cyl = sweep->add_subcommand("cylinder", "shrinking cylinders inside a solid cylinder");
    add_common(cyl);
    cyl->add_option("--k", wa.k, "sphere factor dimension")->required();
    cyl->add_option("--R", wa.R, "cylinder radius")->required();
    auto* lam = sweep->add_subcommand("lambda", "hyperplane barrier for lambda-hypersurfaces");
    add_common(lam);
    lam->add_option("--lambda", wa.lambda, "claimed lambda")->required();

    int code = ok;
    try {
        std::vector<std::string> tokens = expand_config(argc, argv);
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);
        if (*quantities)
            code = run_quantities(qa);
        else if (*shoot_cmd)
            code = run_shoot(sa);
        else if (*catenoid_cmd)
            code = run_catenoid(ca);
        else if (*certify)
            code = run_certify(cert);
        else
            code = run_sweep(wa);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : precondition;
    } catch (const precondition_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return precondition;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical;
    }
    return code;
}
