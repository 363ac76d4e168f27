#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_difference.hpp"
#include "polyline.hpp"
#include "profile_ode.hpp"

namespace shrinker {

struct Claim {
    enum class Kind { shrinker, lambda, none };
    Kind kind = Kind::shrinker;
    double lambda = 0.0;

    // Claimed weighted mean curvature, if any.
    std::optional<double> hphi() const {
        if (kind == Kind::shrinker) return 0.0;
        if (kind == Kind::lambda) return lambda;
        return std::nullopt;
    }

    friend bool operator==(const Claim&, const Claim&) = default;
};

/// Profile (r, z) of a rotationally symmetric test hypersurface. The unit normal is the
/// tangent rotated by +90 degrees, so the sample order fixes the orientation: graphs over the
/// hyperplane run outwards, closed surfaces run from the top pole to the bottom pole.
struct TestSurface {
    int ambient_dim = 3;
    Polyline profile;
    Claim claim;
    // Optional exact parameterisation gamma(params[i]) = profile[i], used to measure H_phi.
    std::function<CurvePoint(double)> curve;
    std::vector<double> params;

    int n() const { return ambient_dim - 1; }

    void validate() const {
        if (ambient_dim < 2) throw precondition_error("ambient dimension must be at least 2");
        if (profile.size() < 2) throw precondition_error("test profile needs at least two samples");
        for (const CurvePoint& p : profile)
            if (!std::isfinite(p.r) || !std::isfinite(p.z) || p.r < 0.0)
                throw precondition_error("test profile samples must be finite with r >= 0");
        if (curve && params.size() != profile.size()) throw precondition_error("parameter grid does not match profile");
    }
};

enum class Verdict { contradiction, consistent, no_contact };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::contradiction: return "contradiction";
        case Verdict::consistent: return "consistent";
        case Verdict::no_contact: return "no_contact";
    }
    return "unknown";
}

inline Verdict verdict_from_string(std::string_view s) {
    if (s == "contradiction") return Verdict::contradiction;
    if (s == "consistent") return Verdict::consistent;
    if (s == "no_contact") return Verdict::no_contact;
    throw precondition_error("unknown verdict '" + std::string(s) + "'");
}

struct SeparationSample {
    double param;
    double separation;

    friend bool operator==(const SeparationSample&, const SeparationSample&) = default;
};

struct ContactReport {
    std::string sweep;    // halfspace, ball, cylinder, lambda
    std::string barrier;  // catenoid, hyperplane, sphere, cylinder
    std::optional<double> parameter;
    std::optional<double> bracket_lo;
    std::optional<double> bracket_hi;
    std::optional<CurvePoint> contact;
    std::vector<SeparationSample> history;
    std::optional<double> barrier_hphi;
    std::optional<double> barrier_hphi_printed;
    std::optional<double> test_hphi;
    std::optional<double> test_hphi_measured;
    int normal_alignment = 0;
    Verdict verdict = Verdict::no_contact;
    std::optional<double> boundary_clearance;
    std::string note;

    friend bool operator==(const ContactReport& a, const ContactReport& b) {
        auto same_point = [](const std::optional<CurvePoint>& x, const std::optional<CurvePoint>& y) {
            return x.has_value() == y.has_value() && (!x || (x->r == y->r && x->z == y->z));
        };
        return a.sweep == b.sweep && a.barrier == b.barrier && a.parameter == b.parameter &&
               a.bracket_lo == b.bracket_lo && a.bracket_hi == b.bracket_hi && same_point(a.contact, b.contact) &&
               a.history == b.history && a.barrier_hphi == b.barrier_hphi &&
               a.barrier_hphi_printed == b.barrier_hphi_printed && a.test_hphi == b.test_hphi &&
               a.test_hphi_measured == b.test_hphi_measured && a.normal_alignment == b.normal_alignment &&
               a.verdict == b.verdict && a.boundary_clearance == b.boundary_clearance && a.note == b.note;
    }
};

struct SweepOptions {
    double contact_tolerance = 1e-6;
    // Relative slack for containment and radius caps, so radii typed to ~9 digits are accepted.
    double containment_tolerance = 1e-8;
    double hphi_tolerance = 1e-9;
    // Catenoid sweep: geometric theta grid.
    double theta_min = kThetaMin;
    double theta_max = kThetaMax;
    int theta_points = 60;
    int catenoid_resolution = 2000;
    double clearance_epsilon = 1e-6;
    // Fraction of the samples at the far end used to check asymptotic behaviour.
    double tail_window = 0.2;
    int history_points = 20;
    ShooterConfig shooter{};
};

namespace detail {

inline int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// Measured H_phi of the test at sample i, when an exact parameterisation is available.
inline std::optional<double> measured_hphi(const TestSurface& test, std::size_t i, int sphere_dim) {
    if (!test.curve || test.profile[i].r <= 0.0) return std::nullopt;
    try {
        return curve_weighted_scalars(sphere_dim, test.curve, test.params[i]).H_phi;
    } catch (const precondition_error&) {
        return std::nullopt;
    }
}

// Verdict when `upper` lies on the side the common normal points to: the maximum principle
// requires H_phi(upper) >= H_phi(lower) at the tangency.
inline Verdict compare(double upper, double lower, double tol) {
    return upper < lower - tol ? Verdict::contradiction : Verdict::consistent;
}

struct ExtremeInfo {
    std::size_t index;
    bool at_end;  // extremum only reached at the last (or first) sample, approached monotonically
};

// Minimum of z over the profile and whether it is only approached at the far end.
inline ExtremeInfo lowest_point(const TestSurface& test, double window) {
    const auto& P = test.profile;
    const std::size_t N = P.size();
    std::size_t imin = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (P[i].z < P[imin].z) imin = i;
    const double zmin = P[imin].z;
    bool only_last = imin == N - 1;
    for (std::size_t i = 0; i + 1 < N && only_last; ++i)
        if (P[i].z <= zmin + 1e-12 * std::max(1.0, std::abs(zmin))) only_last = false;
    if (!only_last) return {imin, false};
    const std::size_t start = N - std::max<std::size_t>(2, static_cast<std::size_t>(window * N));
    for (std::size_t i = start; i + 1 < N; ++i)
        if (!(P[i + 1].z < P[i].z) || !(P[i + 1].r > P[i].r)) return {imin, false};
    return {imin, true};
}

inline ContactReport hyperplane_barrier(const TestSurface& test, std::size_t imin, std::optional<double> claimed,
                                        const SweepOptions& opt) {
    const auto& P = test.profile;
    std::size_t i = imin;
    // Prefer an off-axis sample at the same height for the normal and the measurement.
    for (std::size_t j = imin; j < P.size() && P[i].r == 0.0; ++j)
        if (P[j].z == P[imin].z) i = j;
    const double h0 = P[i].z;
    ContactReport rep;
    rep.barrier = "hyperplane";
    rep.parameter = h0;
    rep.contact = P[i];
    rep.barrier_hphi = 0.5 * h0;
    rep.test_hphi = claimed;
    rep.test_hphi_measured = measured_hphi(test, i, test.n() - 1);
    const CurvePoint nt = geom::vertex_normal(P, i);
    rep.normal_alignment = sign_of(nt.z);
    const int hp = std::max(2, opt.history_points);
    const double h_start = std::min(0.0, h0);
    for (int k = 0; k < hp; ++k) {
        const double h = h_start + (h0 - h_start) * k / (hp - 1);
        rep.history.push_back({h, h0 - h});
    }
    if (!rep.test_hphi) {
        rep.verdict = Verdict::consistent;
        rep.note = "no claimed weighted mean curvature; nothing to compare";
        return rep;
    }
    // The test lies above the barrier; an opposite normal flips the sign of its H_phi.
    const double test_value = rep.normal_alignment < 0 ? -*rep.test_hphi : *rep.test_hphi;
    rep.verdict = compare(test_value, *rep.barrier_hphi, opt.hphi_tolerance);
    rep.note = "minimum height attained at a finite point; barrier is the tangent hyperplane";
    return rep;
}

// Lifted half-catenoid {(u(tau) w, s - tau): 0 <= tau <= s} as an (r, z) polyline.
inline Polyline lifted_catenoid(const ProfileCurve& p, double s, int resolution) {
    Polyline out;
    out.reserve(resolution + 1);
    for (int i = 0; i <= resolution; ++i) {
        const double tau = s * i / resolution;
        out.push_back({p.at(tau).u, s - tau});
    }
    return out;
}

// Signed separation of the test from the lifted catenoid: distance when disjoint, minus the
// largest penetration below the catenoid otherwise.
inline double signed_separation(const Polyline& test, const Polyline& cat, geom::SegmentContact* contact) {
    const geom::SegmentContact c = geom::polyline_distance(test, cat);
    if (contact) *contact = c;
    if (!c.crossing) return c.distance;
    double depth = 0.0;
    for (const CurvePoint& q : test) {
        if (q.r < cat.front().r || q.r > cat.back().r) continue;
        // z of the catenoid above radius q.r (r increases along the polyline).
        auto it = std::lower_bound(cat.begin(), cat.end(), q.r, [](const CurvePoint& a, double r) { return a.r < r; });
        if (it == cat.begin() || it == cat.end()) continue;
        const CurvePoint& b = *it;
        const CurvePoint& a = *(it - 1);
        const double zc = a.z + (b.z - a.z) * (q.r - a.r) / (b.r - a.r);
        depth = std::max(depth, zc - q.z);
    }
    return -std::max(depth, std::numeric_limits<double>::min());
}

}  // namespace detail

/// First-contact sweep of lifted half-catenoids C_theta + s e_{n+1} against a test surface in
/// the upper halfspace. When the lowest point of the test is attained, the tangent hyperplane
/// at that height is the barrier instead.
inline ContactReport sweep_halfspace(const TestSurface& test, double s, const SweepOptions& opt = {}) {
    test.validate();
    const int n = test.n();
    if (n < 2) throw precondition_error("halfspace sweep needs n >= 2");
    for (const CurvePoint& p : test.profile)
        if (p.z < -1e-12) throw precondition_error("test surface leaves the halfspace {x_{n+1} >= 0}");
    if (!(s > 0.0)) throw precondition_error("lift s must be positive");

    const auto low = detail::lowest_point(test, opt.tail_window);
    if (!low.at_end) {
        ContactReport rep = detail::hyperplane_barrier(test, low.index, test.claim.hphi(), opt);
        rep.sweep = "halfspace";
        return rep;
    }

    const double t_inf = test.profile.back().z;
    if (!(s > t_inf)) throw precondition_error("lift s must exceed the asymptotic height of the test surface");
    const double c = cylinder_profile_radius(n);
    const double box_gap = geom::polyline_rectangle_distance(test.profile, 0.0, c, 0.0, s);
    if (!(box_gap > opt.clearance_epsilon)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "boundary clearance violated: test surface meets D(%.6g) x [0, %.6g] (distance %.3g)", c, s,
                      box_gap);
        throw precondition_error(buf);
    }

    ContactReport rep;
    rep.sweep = "halfspace";
    rep.barrier = "catenoid";
    rep.test_hphi = test.claim.hphi();
    double min_clearance = std::numeric_limits<double>::infinity();

    ShooterConfig cfg = opt.shooter;
    cfg.dim_n = n;
    struct Eval {
        double sep;
        geom::SegmentContact contact;
        ProfileCurve profile;
        Polyline polyline;
    };
    auto evaluate = [&](double theta) {
        Eval e;
        e.profile = integrate_from_cone(n, theta, s, cfg);
        e.polyline = detail::lifted_catenoid(e.profile, s, opt.catenoid_resolution);
        e.sep = detail::signed_separation(test.profile, e.polyline, &e.contact);
        const double clearance = geom::point_polyline_distance({e.profile.samples.front().u, s}, test.profile);
        min_clearance = std::min(min_clearance, clearance);
        if (!(clearance > opt.clearance_epsilon)) throw numerical_error("boundary of the lifted catenoid touches the test surface");
        return e;
    };

    const int G = std::max(2, opt.theta_points);
    const double l0 = std::log(opt.theta_min), l1 = std::log(opt.theta_max);
    std::optional<double> lo, hi;
    double lo_theta = 0.0;
    for (int i = 0; i < G; ++i) {
        const double theta = std::exp(l0 + (l1 - l0) * i / (G - 1));
        const Eval e = evaluate(theta);
        rep.history.push_back({theta, e.sep});
        if (e.sep <= opt.contact_tolerance) {
            if (i == 0)
                throw numerical_error("contact already at the first theta of the grid; lower theta_min or refine the grid");
            hi = theta;
            lo = lo_theta;
            break;
        }
        lo_theta = theta;
    }
    rep.boundary_clearance = min_clearance;
    if (!hi) {
        rep.verdict = Verdict::no_contact;
        rep.note = "separation stays positive over the theta grid";
        return rep;
    }

    double a = std::log(*lo), b = std::log(*hi);
    std::optional<Eval> found;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        Eval e = evaluate(std::exp(mid));
        rep.history.push_back({std::exp(mid), e.sep});
        if (e.sep > 0.0 && e.sep <= opt.contact_tolerance) {
            found = std::move(e);
            a = mid;
            break;
        }
        if (e.sep > opt.contact_tolerance) a = mid;
        else b = mid;
        if (b - a < 1e-15) break;
    }
    if (!found) {
        found = evaluate(std::exp(a));
        if (!(found->sep > 0.0)) throw numerical_error("could not refine the first contact");
    }
    std::sort(rep.history.begin(), rep.history.end(),
              [](const SeparationSample& x, const SeparationSample& y) { return x.param < y.param; });
    rep.boundary_clearance = min_clearance;

    const double theta_star = std::exp(a);
    rep.parameter = theta_star;
    rep.bracket_lo = theta_star;
    rep.bracket_hi = std::exp(b);
    const auto& ct = found->contact;
    rep.contact = CurvePoint{0.5 * (ct.on_a.r + ct.on_b.r), 0.5 * (ct.on_a.z + ct.on_b.z)};

    // Barrier geometry at the contact: tau from the catenoid segment.
    const Polyline& cat = found->polyline;
    const std::size_t j = ct.seg_b;
    const double seg_len = std::hypot(cat[j + 1].r - cat[j].r, cat[j + 1].z - cat[j].z);
    const double frac = seg_len > 0 ? std::hypot(ct.on_b.r - cat[j].r, ct.on_b.z - cat[j].z) / seg_len : 0.0;
    const double tau = std::clamp(s * (j + frac) / opt.catenoid_resolution, 0.0, s);
    const TranslatedHphi bh = translated_catenoid_hphi(found->profile, s, tau);
    rep.barrier_hphi = bh.value;
    rep.barrier_hphi_printed = bh.printed;
    const double up = found->profile.at(tau).u_prime;
    const double W = std::sqrt(1 + up * up);
    const CurvePoint nb{1.0 / W, up / W};
    const CurvePoint nt = geom::segment_normal(test.profile, ct.seg_a);
    rep.normal_alignment = detail::sign_of(nb.r * nt.r + nb.z * nt.z);
    const std::size_t ia =
        std::hypot(ct.on_a.r - test.profile[ct.seg_a].r, ct.on_a.z - test.profile[ct.seg_a].z) <=
                std::hypot(ct.on_a.r - test.profile[ct.seg_a + 1].r, ct.on_a.z - test.profile[ct.seg_a + 1].z)
            ? ct.seg_a
            : ct.seg_a + 1;
    rep.test_hphi_measured = detail::measured_hphi(test, ia, n - 1);

    if (!rep.test_hphi) {
        rep.verdict = Verdict::consistent;
        rep.note = "first contact found; no claimed weighted mean curvature to compare";
    } else if (rep.normal_alignment <= 0) {
        rep.verdict = Verdict::consistent;
        rep.note = "first contact found with opposite normals; no comparison available";
    } else {
        rep.verdict = detail::compare(*rep.test_hphi, *rep.barrier_hphi, opt.hphi_tolerance);
        rep.note = "first interior contact with the lifted half-catenoid";
    }
    return rep;
}

/// Shrinks the sphere S^n(R') from R' = R until it touches a compact test surface inside.
inline ContactReport sweep_ball(const TestSurface& test, double R, const SweepOptions& opt = {}) {
    test.validate();
    const int n = test.n();
    if (!(R > 0.0)) throw precondition_error("ball radius must be positive");
    if (R > shrinker_radius(n) * (1 + opt.containment_tolerance)) throw precondition_error("ball radius must not exceed sqrt(2n)");
    const auto& P = test.profile;
    if (P.front().r > 1e-9 || P.back().r > 1e-9)
        throw precondition_error("test surface is not compact: profile must start and end on the axis");
    std::size_t imax = 0;
    double Rp = 0.0;
    for (std::size_t i = 0; i < P.size(); ++i) {
        const double d = std::hypot(P[i].r, P[i].z);
        if (d > Rp) {
            Rp = d;
            imax = i;
        }
    }
    if (Rp > R * (1 + opt.containment_tolerance)) throw precondition_error("test surface is not contained in the ball");
    // Among tangency points prefer the one farthest from the axis.
    for (std::size_t i = 0; i < P.size(); ++i)
        if (std::hypot(P[i].r, P[i].z) >= Rp * (1 - 1e-12) && P[i].r > P[imax].r) imax = i;

    ContactReport rep;
    rep.sweep = "ball";
    rep.barrier = "sphere";
    rep.parameter = Rp;
    rep.contact = P[imax];
    rep.barrier_hphi = 0.5 * Rp - n / Rp;
    rep.test_hphi = test.claim.hphi();
    rep.test_hphi_measured = detail::measured_hphi(test, imax, n - 1);
    const CurvePoint nt = geom::vertex_normal(P, imax);
    rep.normal_alignment = detail::sign_of(nt.r * P[imax].r + nt.z * P[imax].z);
    const int hp = std::max(2, opt.history_points);
    for (int k = 0; k < hp; ++k) {
        const double Rk = R - (R - Rp) * k / (hp - 1);
        rep.history.push_back({Rk, Rk - Rp});
    }
    if (!rep.test_hphi) {
        rep.verdict = Verdict::consistent;
        rep.note = "no claimed weighted mean curvature; nothing to compare";
        return rep;
    }
    // The sphere lies outside the test surface at the tangency.
    const double test_value = rep.normal_alignment < 0 ? -*rep.test_hphi : *rep.test_hphi;
    rep.verdict = detail::compare(*rep.barrier_hphi, test_value, opt.hphi_tolerance);
    rep.note = "tangency with the largest enclosed sphere";
    return rep;
}

/// Shrinks the cylinder C^k_{R'} from R' = R until it touches a test surface inside. The
/// profile is (r, z) with r the radius in the R^{k+1} factor.
inline ContactReport sweep_cylinder(const TestSurface& test, int k, double R, const SweepOptions& opt = {}) {
    test.validate();
    const int n = test.n();
    if (k < 1 || k > n) throw precondition_error("cylinder requires 1 <= k <= n");
    if (!(R > 0.0)) throw precondition_error("cylinder radius must be positive");
    if (R > shrinker_radius(k) * (1 + opt.containment_tolerance)) throw precondition_error("cylinder radius must not exceed sqrt(2k)");
    const auto& P = test.profile;
    const std::size_t N = P.size();
    std::size_t imax = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (P[i].r > P[imax].r) imax = i;
    const double Rp = P[imax].r;
    if (Rp > R * (1 + opt.containment_tolerance))
        throw precondition_error("test surface is not contained in the solid cylinder");

    bool interior_max = false;
    for (std::size_t i = 1; i + 1 < N; ++i)
        if (P[i].r >= Rp - 1e-12 * std::max(1.0, Rp)) interior_max = true;
    if (!interior_max) {
        const std::size_t w = std::max<std::size_t>(2, static_cast<std::size_t>(opt.tail_window * N));
        bool monotone = true;
        if (imax == N - 1) {
            for (std::size_t i = N - w; i + 1 < N; ++i) monotone = monotone && P[i + 1].r > P[i].r;
        } else {
            for (std::size_t i = 0; i + 1 < w; ++i) monotone = monotone && P[i].r > P[i + 1].r;
        }
        if (monotone) {
            char buf[200];
            std::snprintf(buf, sizeof buf,
                          "infimum at infinity: distance to the boundary cylinder decreases to %.6g at the end of the "
                          "sampled range without being attained; defer to the translated-variation certificate",
                          R - Rp);
            throw infimum_at_infinity(buf);
        }
    }

    ContactReport rep;
    rep.sweep = "cylinder";
    rep.barrier = "cylinder";
    rep.parameter = Rp;
    rep.contact = P[imax];
    rep.barrier_hphi = 0.5 * Rp - k / Rp;
    rep.test_hphi = test.claim.hphi();
    rep.test_hphi_measured = detail::measured_hphi(test, imax, k);
    const CurvePoint nt = geom::vertex_normal(P, imax);
    rep.normal_alignment = detail::sign_of(nt.r);
    const int hp = std::max(2, opt.history_points);
    for (int j = 0; j < hp; ++j) {
        const double Rk = R - (R - Rp) * j / (hp - 1);
        rep.history.push_back({Rk, Rk - Rp});
    }
    if (!rep.test_hphi) {
        rep.verdict = Verdict::consistent;
        rep.note = "no claimed weighted mean curvature; nothing to compare";
        return rep;
    }
    const double test_value = rep.normal_alignment < 0 ? -*rep.test_hphi : *rep.test_hphi;
    rep.verdict = detail::compare(*rep.barrier_hphi, test_value, opt.hphi_tolerance);
    rep.note = "tangency with the largest enclosed cylinder";
    return rep;
}

/// Hyperplane tangency test for a claimed lambda-hypersurface in {x_{n+1} >= lambda}.
inline ContactReport lambda_offset(const TestSurface& test, double lambda, const SweepOptions& opt = {}) {
    test.validate();
    for (const CurvePoint& p : test.profile)
        if (p.z < lambda - 1e-12 * std::max(1.0, std::abs(lambda)))
            throw precondition_error("test surface is not contained in {x_{n+1} >= lambda}");
    const auto low = detail::lowest_point(test, opt.tail_window);
    if (low.at_end)
        throw infimum_at_infinity(
            "infimum at infinity: lowest height is only approached at the end of the sampled range; defer to the "
            "hyperplane instability certificate");
    ContactReport rep = detail::hyperplane_barrier(test, low.index, lambda, opt);
    rep.sweep = "lambda";
    return rep;
}

}  // namespace shrinker
