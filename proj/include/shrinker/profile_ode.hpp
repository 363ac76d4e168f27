#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "errors.hpp"
#include "finite_difference.hpp"
#include "model_surface.hpp"
#include "ode.hpp"
#include "profile_curve.hpp"

namespace shrinker {

inline constexpr double kRadiusFloor = 1e-8;
inline constexpr double kBlowUpSlope = 1e6;
inline constexpr double kSampleSpacing = 1e-3;
// Cone slopes the catenoid shooter can resolve.
inline constexpr double kThetaMin = 1e-2;
inline constexpr double kThetaMax = 1e2;
inline constexpr double kMaxHorizon = 1e4;

namespace detail {

inline ode::StepControl step_control(const ShooterConfig& cfg) {
    ode::StepControl ctl;
    ctl.abs_tol = cfg.abs_tol;
    ctl.rel_tol = cfg.rel_tol;
    ctl.max_steps = cfg.max_steps;
    return ctl;
}

// w = u - t u' decays like 2(n-1)/(theta t), so the absolute tolerance is tightened for it.
inline ode::StepControl cone_step_control(const ShooterConfig& cfg) {
    ode::StepControl ctl = step_control(cfg);
    ctl.abs_tol = cfg.abs_tol * 1e-4;
    return ctl;
}

inline Termination termination_of(ode::Status s) {
    return (s == ode::Status::step_underflow || s == ode::Status::max_steps) ? Termination::step_underflow
                                                                             : Termination::reached_horizon;
}

// (u, u') system; returns NaN instead of throwing so the step controller can back off.
inline ode::State<2> forward_rhs(int n, double t, const ode::State<2>& y) {
    if (!(y[0] > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    return {y[1], profile_rhs(n, t, y[0], y[1])};
}

// (w, p) = (u - t u', u') system used from the conical end; w is small and accurate at large t.
inline ode::State<2> cone_rhs(int n, double t, const ode::State<2>& y) {
    const double u = y[0] + t * y[1];
    if (!(u > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    const double upp = (1.0 + y[1] * y[1]) * ((n - 1) / u - 0.5 * y[0]);
    return {-t * upp, upp};
}

// Coefficients of u ~ theta t + c1/t + c3/t^3 + c5/t^5 + c7/t^7 at the conical end.
struct ConeSeries {
    double theta, c1, c3, c5, c7;

    ConeSeries(int n, double th) : theta(th) {
        const double N = n, q = th * th, q1 = q + 1.0;
        c1 = (N - 1) / th;
        c3 = -(N - 1) * (N * q + N + q - 1) / (2 * q * th * q1);
        c5 = (N - 1) * (3 * N * N * q * q + 6 * N * N * q + 3 * N * N + 2 * N * q - 6 * N + 21 * q * q - 8 * q + 3) /
             (6 * q * q * th * q1 * q1);
        c7 = -(N - 1) *
             (15 * N * N * N * q * q * q + 45 * N * N * N * q * q + 45 * N * N * N * q + 15 * N * N * N -
              9 * N * N * q * q * q - 31 * N * N * q * q - 19 * N * N * q - 45 * N * N - 39 * N * q * q * q +
              371 * N * q * q - 97 * N * q + 45 * N + 753 * q * q * q - 385 * q * q + 71 * q - 15) /
             (24 * q * q * q * th * q1 * q1 * q1);
    }

    // (w, p) at time t; w = u - t u' = 2 c1/t + 4 c3/t^3 + 6 c5/t^5 + 8 c7/t^7.
    ode::State<2> state(double t) const {
        const double i1 = 1.0 / t, i2 = i1 * i1;
        const double w = i1 * (2 * c1 + i2 * (4 * c3 + i2 * (6 * c5 + i2 * 8 * c7)));
        const double p = theta - i2 * (c1 + i2 * (3 * c3 + i2 * (5 * c5 + i2 * 7 * c7)));
        return {w, p};
    }
};

// Start time for the backward integration: far enough that the series is accurate.
inline double cone_start(int n, double theta, double at_least) {
    return std::max({at_least, 20.0 * std::sqrt(static_cast<double>(n)) / theta, 1.0});
}

inline void check_theta(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw precondition_error("cone slope must be positive");
}

}  // namespace detail

/// Raw initial value problem from (a, b) at t = 0, b defaulting to 0.
inline ProfileCurve integrate_profile(const ShooterConfig& cfg) {
    cfg.validate();
    const int n = cfg.dim_n;
    ProfileCurve out;
    out.dim_n = n;
    out.config = cfg;
    out.direction = SweepDirection::forward;
    const double b = cfg.initial_slope.value_or(0.0);
    out.samples.push_back({0.0, cfg.initial_radius, b});

    std::optional<Termination> event;
    auto observer = [&](double t, const ode::State<2>& y) {
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || std::abs(y[1]) > kBlowUpSlope) {
            event = Termination::blow_up;
            return false;
        }
        if (y[0] < kRadiusFloor) {
            event = Termination::radius_vanished;
            return false;
        }
        if (t - out.samples.back().t >= kSampleSpacing) out.samples.push_back({t, y[0], y[1]});
        return true;
    };
    auto rhs = [n](double t, const ode::State<2>& y) { return detail::forward_rhs(n, t, y); };
    const auto res = ode::dormand_prince<2>(rhs, 0.0, {cfg.initial_radius, b}, cfg.horizon, detail::step_control(cfg),
                                            observer);
    if (!event && out.samples.back().t < res.t) {
        if (out.samples.size() > 1 && res.t - out.samples.back().t < kSampleSpacing) out.samples.pop_back();
        out.samples.push_back({res.t, res.y[0], res.y[1]});
    }
    out.termination = event ? *event : detail::termination_of(res.status);
    if (out.termination == Termination::step_underflow && res.y[1] > 1e3) out.termination = Termination::blow_up;
    return out;
}

struct BoundaryValues {
    double a;  // u(0)
    double b;  // u'(0)
};

/// (u, u') of the catenoid with cone slope theta at time t, integrating back from the conical end.
inline ode::State<2> cone_state_at(int n, double theta, double t, const ShooterConfig& cfg = {}) {
    detail::check_theta(theta);
    const double T0 = detail::cone_start(n, theta, t);
    const detail::ConeSeries series(n, theta);
    auto rhs = [n](double s, const ode::State<2>& y) { return detail::cone_rhs(n, s, y); };
    const auto res = ode::dormand_prince<2>(rhs, T0, series.state(T0), t, detail::cone_step_control(cfg));
    if (res.status != ode::Status::completed || !std::isfinite(res.y[0]) || !std::isfinite(res.y[1]))
        throw numerical_error("backward integration from the cone failed");
    return {res.y[0] + t * res.y[1], res.y[1]};
}

inline BoundaryValues boundary_values(int n, double theta, const ShooterConfig& cfg = {}) {
    const auto y = cone_state_at(n, theta, 0.0, cfg);
    return {y[0], y[1]};
}

/// Samples on [0, horizon] of the half-catenoid asymptotic to the cone of slope theta.
inline ProfileCurve integrate_from_cone(int n, double theta, double horizon, const ShooterConfig& cfg = {}) {
    detail::check_theta(theta);
    if (n < 2) throw precondition_error("dim_n must be at least 2");
    if (!(horizon > 0.0)) throw precondition_error("horizon must be positive");
    const double T0 = detail::cone_start(n, theta, horizon + 1.0);
    const detail::ConeSeries series(n, theta);
    auto rhs = [n](double s, const ode::State<2>& y) { return detail::cone_rhs(n, s, y); };
    const auto ctl = detail::cone_step_control(cfg);

    ProfileCurve out;
    out.dim_n = n;
    out.cone_slope = theta;
    out.direction = SweepDirection::backward;
    out.config = cfg;
    out.config.dim_n = n;
    out.config.horizon = horizon;

    const auto far = ode::dormand_prince<2>(rhs, T0, series.state(T0), horizon, ctl);
    if (far.status != ode::Status::completed) throw numerical_error("backward integration from the cone failed");

    std::vector<ProfileSample> rev;
    rev.push_back({horizon, far.y[0] + horizon * far.y[1], far.y[1]});
    std::optional<Termination> event;
    auto observer = [&](double t, const ode::State<2>& y) {
        const double u = y[0] + t * y[1];
        if (!std::isfinite(u) || !std::isfinite(y[1]) || std::abs(y[1]) > kBlowUpSlope) {
            event = Termination::blow_up;
            return false;
        }
        if (u < kRadiusFloor) {
            event = Termination::radius_vanished;
            return false;
        }
        if (rev.back().t - t >= kSampleSpacing) rev.push_back({t, u, y[1]});
        return true;
    };
    const auto res = ode::dormand_prince<2>(rhs, horizon, far.y, 0.0, ctl, observer);
    if (event) throw numerical_error(std::string("backward integration from the cone ended with ") +
                                     std::string(to_string(*event)));
    if (res.status != ode::Status::completed) throw numerical_error("backward integration from the cone: step underflow");
    if (rev.back().t > 0.0) {
        if (rev.size() > 1 && rev.back().t < kSampleSpacing) rev.pop_back();
        rev.push_back({0.0, res.y[0], res.y[1]});
    }
    out.samples.assign(rev.rbegin(), rev.rend());
    out.termination = Termination::reached_horizon;
    out.config.initial_radius = out.samples.front().u;
    out.config.initial_slope = out.samples.front().u_prime;
    return out;
}

struct ThetaEstimate {
    double theta_hat;
    double disagreement;  // |u(T)/T - u'(T)|
};

/// theta_hat = u'(T) with the disagreement |u(T)/T - u'(T)| as error bar.
/// Fails when the disagreement exceeds threshold * max(theta_hat, 1).
inline ThetaEstimate estimate_theta(const ProfileCurve& p, double threshold = 0.05) {
    if (p.termination != Termination::reached_horizon || p.samples.size() < 2)
        throw precondition_error("profile did not reach its horizon");
    const ProfileSample& last = p.samples.back();
    if (!(last.t > 0.0)) throw precondition_error("profile horizon must be positive");
    const double disagreement = std::abs(last.u / last.t - last.u_prime);
    if (disagreement > threshold * std::max(std::abs(last.u_prime), 1.0))
        throw numerical_error("slope estimates disagree at the horizon; increase the horizon");
    return {last.u_prime, disagreement};
}

inline ProfileCurve with_theta(ProfileCurve p, double threshold = 0.05) {
    const ThetaEstimate e = estimate_theta(p, threshold);
    p.theta_hat = e.theta_hat;
    p.theta_error = e.disagreement;
    return p;
}

/// Half-catenoid with cone slope theta; with cfg.auto_horizon the horizon is doubled from
/// cfg.horizon until u'(T) and u'(2T) agree within 1%.
inline ProfileCurve catenoid_from_theta(int n, double theta, const ShooterConfig& cfg = {}) {
    detail::check_theta(theta);
    double T = cfg.horizon;
    if (cfg.auto_horizon) {
        double slope = cone_state_at(n, theta, T, cfg)[1];
        for (;;) {
            const double next = cone_state_at(n, theta, 2 * T, cfg)[1];
            if (std::abs(next - slope) <= 0.01 * std::abs(next)) break;
            T *= 2;
            slope = next;
            if (T > kMaxHorizon) throw numerical_error("slope estimate did not stabilise before the maximum horizon");
        }
    }
    return with_theta(integrate_from_cone(n, theta, T, cfg));
}

/// Cone slope of the half-catenoid with u(0) = a (bisection in log theta over the resolvable window).
inline double theta_for_radius(int n, double a, const ShooterConfig& cfg = {}) {
    const double c = cylinder_profile_radius(n);
    if (!(a > 0.0 && a < c)) throw precondition_error("initial radius must lie in (0, sqrt(2(n-1)))");
    double lo = std::log(kThetaMin), hi = std::log(kThetaMax);
    double a_lo = boundary_values(n, kThetaMin, cfg).a;
    double a_hi = boundary_values(n, kThetaMax, cfg).a;
    if (!(a_lo > a_hi)) throw numerical_error("non-monotone shooting map at the ends of the theta window");
    if (a > a_lo || a < a_hi) {
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "no resolvable half-catenoid with u(0)=%.10g for n=%d: attainable radii are [%.10g, %.10g] "
                      "(theta in [%g, %g])",
                      a, n, a_hi, a_lo, kThetaMin, kThetaMax);
        throw precondition_error(buf);
    }
    // Radii closer than the integration noise are not ordered reliably.
    const double noise = 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * c);
    for (int it = 0; it < 200 && hi - lo > 1e-14 && a_lo - a_hi > 1e-3 * noise; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double a_mid = boundary_values(n, std::exp(mid), cfg).a;
        if (!(a_mid <= a_lo + noise && a_mid >= a_hi - noise)) throw numerical_error("non-monotone shooting map detected");
        if (a_mid == a) return std::exp(mid);
        if (a_mid > a) {
            lo = mid;
            a_lo = a_mid;
        } else {
            hi = mid;
            a_hi = a_mid;
        }
    }
    return std::exp(0.5 * (lo + hi));
}

/// Half-catenoid with u(0) = a; a = sqrt(2(n-1)) returns the shrinking cylinder.
inline ProfileCurve shoot_catenoid(const ShooterConfig& cfg) {
    cfg.validate();
    const int n = cfg.dim_n;
    if (cfg.initial_radius == cylinder_profile_radius(n)) {
        ShooterConfig cyl = cfg;
        cyl.initial_slope = 0.0;
        ProfileCurve p = integrate_profile(cyl);
        p.config = cfg;
        p.cone_slope = 0.0;
        return with_theta(p);
    }
    const double theta = theta_for_radius(n, cfg.initial_radius, cfg);
    ProfileCurve p = catenoid_from_theta(n, theta, cfg);
    p.config.initial_radius = cfg.initial_radius;
    return p;
}

/// Raw IVP when an initial slope is given, half-catenoid otherwise.
inline ProfileCurve shoot(const ShooterConfig& cfg) {
    if (!cfg.initial_slope) return shoot_catenoid(cfg);
    ProfileCurve p = integrate_profile(cfg);
    if (p.termination == Termination::reached_horizon) {
        try {
            p = with_theta(p);
        } catch (const numerical_error&) {
        }
    }
    return p;
}

/// Half-catenoid with cone slope theta_target, after checking that the radii in
/// [a_lo, a_hi] bracket it and that the shooting map is decreasing across the bracket.
inline ProfileCurve find_catenoid(int n, double theta_target, double a_lo, double a_hi, const ShooterConfig& cfg = {});

struct KmReport {
    bool above_cone = false;       // u(t) > theta_hat t on (0, T]
    bool below_cylinder = false;   // u(0) < sqrt(2(n-1))
    bool slope_agreement = false;  // |u(T)/T - u'(T)| < 0.05 theta_hat
    bool convex = false;           // u'' > 0
    bool slope_positive = false;   // u' > 0 on (0, T]
    bool slope_below_theta = false;  // u' < theta_hat on (0, T)
    bool ratio_above_slope = false;  // u/t > u' on (0, T]
    bool support_decreasing = false;  // u - t u' strictly decreasing

    double above_cone_margin = 0.0;
    double below_cylinder_margin = 0.0;
    double slope_disagreement = 0.0;
    double convex_margin = 0.0;
    double slope_positive_margin = 0.0;
    double slope_below_theta_margin = 0.0;
    double ratio_margin = 0.0;
    double theta_hat = 0.0;

    bool property1() const { return above_cone && below_cylinder; }
    bool property2() const { return slope_agreement; }
    bool property3() const { return convex && slope_positive && slope_below_theta; }
    bool all() const { return property1() && property2() && property3() && ratio_above_slope && support_decreasing; }
};

inline KmReport km_property_check(const ProfileCurve& p) {
    KmReport r;
    if (p.samples.size() < 2 || p.termination != Termination::reached_horizon) return r;
    const ProfileSample& last = p.samples.back();
    const double theta = p.theta_hat.value_or(last.u_prime);
    r.theta_hat = theta;
    const int n = p.dim_n;
    const double inf = std::numeric_limits<double>::infinity();
    r.below_cylinder_margin = cylinder_profile_radius(n) - p.samples.front().u;
    r.slope_disagreement = std::abs(last.u / last.t - last.u_prime);
    r.above_cone_margin = inf;
    r.convex_margin = inf;
    r.slope_positive_margin = inf;
    r.slope_below_theta_margin = inf;
    r.ratio_margin = inf;
    bool decreasing = true;
    double prev_w = inf;
    for (const ProfileSample& s : p.samples) {
        const double w = s.u - s.t * s.u_prime;
        if (!(w < prev_w)) decreasing = false;
        prev_w = w;
        r.convex_margin = std::min(r.convex_margin, profile_rhs(n, s.t, s.u, s.u_prime));
        if (s.t <= 0.0) continue;
        r.above_cone_margin = std::min(r.above_cone_margin, s.u - theta * s.t);
        r.slope_positive_margin = std::min(r.slope_positive_margin, s.u_prime);
        r.ratio_margin = std::min(r.ratio_margin, s.u / s.t - s.u_prime);
        if (s.t < last.t) r.slope_below_theta_margin = std::min(r.slope_below_theta_margin, theta - s.u_prime);
    }
    r.above_cone = r.above_cone_margin > 0.0;
    r.below_cylinder = r.below_cylinder_margin > 0.0;
    r.slope_agreement = r.slope_disagreement < 0.05 * theta;
    r.convex = r.convex_margin > 0.0;
    r.slope_positive = r.slope_positive_margin > 0.0;
    r.slope_below_theta = r.slope_below_theta_margin > 0.0;
    r.ratio_above_slope = r.ratio_margin > 0.0;
    r.support_decreasing = decreasing;
    return r;
}

inline ProfileCurve find_catenoid(int n, double theta_target, double a_lo, double a_hi, const ShooterConfig& cfg) {
    detail::check_theta(theta_target);
    if (!(a_lo > 0.0 && a_lo < a_hi && a_hi < cylinder_profile_radius(n)))
        throw precondition_error("bracket must satisfy 0 < a_lo < a_hi < sqrt(2(n-1))");
    const double th_lo = theta_for_radius(n, a_lo, cfg);
    const double th_hi = theta_for_radius(n, a_hi, cfg);
    if (!(th_lo > th_hi)) throw numerical_error("non-monotone shooting map across the bracket");
    if (!(theta_target <= th_lo && theta_target >= th_hi))
        throw precondition_error("bracket does not straddle the target slope");
    ProfileCurve p = catenoid_from_theta(n, theta_target, cfg);
    const double a = p.samples.front().u;
    if (!(a >= a_lo && a <= a_hi)) throw numerical_error("non-monotone shooting map inside the bracket");
    if (!km_property_check(p).all()) throw numerical_error("constructed profile fails the half-catenoid properties");
    return p;
}

/// Radius and slope at t from a fixed-step re-solve of the profile ODE started at sample `anchor`.
inline ProfileSample solve_from_sample(const ProfileCurve& p, std::size_t anchor, double t) {
    const ProfileSample& s = p.samples.at(anchor);
    if (s.t == t) return s;
    const int n = p.dim_n;
    const double stiff = (1.0 + s.u_prime * s.u_prime) * 0.5 * std::max(std::abs(t), std::abs(s.t)) + 1.0;
    const double span = std::abs(t - s.t);
    const int steps = std::max(4, static_cast<int>(std::ceil(span * stiff / 0.5)) + static_cast<int>(span / 2.5e-4));
    auto rhs = [n](double x, const ode::State<2>& y) { return detail::forward_rhs(n, x, y); };
    const auto y = ode::rk4<2>(rhs, s.t, {s.u, s.u_prime}, t, steps);
    return {t, y[0], y[1]};
}

/// Sample from which a re-solve covering [lo, hi] starts: the upstream end in the direction
/// the profile was generated, where the re-solve is stable.
inline std::size_t upstream_anchor(const ProfileCurve& p, double lo, double hi) {
    if (p.direction == SweepDirection::backward) return p.interval_of(hi) + 1;
    return p.interval_of(lo);
}

inline ProfileSample local_solution(const ProfileCurve& p, double t) {
    return solve_from_sample(p, upstream_anchor(p, t, t), t);
}

/// H_phi of the profile surface at t by central differences of re-solved radii. The whole
/// stencil is re-solved from one sample so that integrator error between samples cancels.
inline double h_phi_numeric(const ProfileCurve& p, double t, double h = 1e-3) {
    check_fd_step(t, h);
    if (!(t - h >= p.t_min() && t + h <= p.t_max())) throw precondition_error("t +- h outside the profile range");
    const std::size_t anchor = upstream_anchor(p, t - h, t + h);
    return h_phi_numeric(p.dim_n, [&](double x) { return solve_from_sample(p, anchor, x).u; }, t, h);
}

inline double h_phi_numeric_extrapolated(const ProfileCurve& p, double t, double h = 1e-2) {
    check_fd_step(t, h);
    if (!(t - h >= p.t_min() && t + h <= p.t_max())) throw precondition_error("t +- h outside the profile range");
    const std::size_t anchor = upstream_anchor(p, t - h, t + h);
    return h_phi_numeric_extrapolated(p.dim_n, [&](double x) { return solve_from_sample(p, anchor, x).u; }, t, h);
}

/// Largest |H_phi| over interior samples (every `stride`-th sample) using the extrapolated
/// oracle. The step grows like sqrt(t) to keep rounding in the second differences flat.
inline double max_shrinker_residual(const ProfileCurve& p, std::size_t stride = 1, double h0 = 1e-2) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < p.samples.size(); i += std::max<std::size_t>(stride, 1)) {
        const double t = p.samples[i].t;
        const double h = h0 * std::sqrt(std::max(1.0, t));
        if (t - h < p.t_min() || t + h > p.t_max()) continue;
        worst = std::max(worst, std::abs(h_phi_numeric_extrapolated(p, t, h)));
    }
    return worst;
}

/// Largest mismatch between each sample and the solution re-solved from its upstream
/// neighbour; small values mean the samples lie on a single solution of the profile equation.
inline double max_sample_defect(const ProfileCurve& p) {
    if (p.samples.size() < 2) throw precondition_error("profile has fewer than two samples");
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i) {
        const std::size_t from = p.direction == SweepDirection::backward ? i + 1 : i;
        const std::size_t to = p.direction == SweepDirection::backward ? i : i + 1;
        const ProfileSample q = solve_from_sample(p, from, p.samples[to].t);
        worst = std::max({worst, std::abs(q.u - p.samples[to].u), std::abs(q.u_prime - p.samples[to].u_prime)});
    }
    return worst;
}

struct TranslatedHphi {
    double value;    // s u' / (2 W), from H_phi = H + <x, N>/2 under x -> x + s e_{n+1}
    double printed;  // s u' / W
};

/// H_phi of C_theta + s e_{n+1} at profile parameter t.
inline TranslatedHphi translated_catenoid_hphi(const ProfileCurve& p, double s, double t) {
    const ProfileSample q = p.at(t);
    const double W = std::sqrt(1.0 + q.u_prime * q.u_prime);
    return {0.5 * s * q.u_prime / W, s * q.u_prime / W};
}

}  // namespace shrinker
