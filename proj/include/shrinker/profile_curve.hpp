#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace shrinker {

enum class Termination { reached_horizon, radius_vanished, blow_up, step_underflow };

inline std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::reached_horizon: return "reached_horizon";
        case Termination::radius_vanished: return "radius_vanished";
        case Termination::blow_up: return "blow_up";
        case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

inline Termination termination_from_string(std::string_view s) {
    if (s == "reached_horizon") return Termination::reached_horizon;
    if (s == "radius_vanished") return Termination::radius_vanished;
    if (s == "blow_up") return Termination::blow_up;
    if (s == "step_underflow") return Termination::step_underflow;
    throw precondition_error("unknown termination '" + std::string(s) + "'");
}

// Radius of the shrinking cylinder S^{n-1}(sqrt(2(n-1))) x R.
inline double cylinder_profile_radius(int dim_n) { return std::sqrt(2.0 * (dim_n - 1)); }

struct ShooterConfig {
    int dim_n = 2;
    double initial_radius = 1.0;
    // Unset: resolve u'(0) so the solution is a half-catenoid. Set: raw initial value problem.
    std::optional<double> initial_slope;
    double horizon = 50.0;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    std::size_t max_steps = 20'000'000;
    bool auto_horizon = true;

    void validate() const {
        if (dim_n < 2) throw precondition_error("dim_n must be at least 2");
        const double c = cylinder_profile_radius(dim_n);
        if (!(initial_radius > 0.0) || !(initial_radius <= c))
            throw precondition_error("initial radius must lie in (0, sqrt(2(n-1))]");
        if (initial_slope && !(*initial_slope >= 0.0 && std::isfinite(*initial_slope)))
            throw precondition_error("initial slope must be finite and >= 0");
        if (!(horizon > 0.0) || !std::isfinite(horizon)) throw precondition_error("horizon must be positive");
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw precondition_error("tolerances must be positive");
        if (max_steps == 0) throw precondition_error("max_steps must be positive");
    }
};

struct ProfileSample {
    double t = 0.0;
    double u = 0.0;
    double u_prime = 0.0;

    friend bool operator==(const ProfileSample&, const ProfileSample&) = default;
};

// Which way the samples were generated; local re-solves integrate from the upstream side.
enum class SweepDirection { forward, backward };

struct ProfileCurve {
    int dim_n = 2;
    std::vector<ProfileSample> samples;
    std::optional<double> theta_hat;
    std::optional<double> theta_error;
    // Slope of the asymptotic cone the solution was started from, if built from the conical end.
    std::optional<double> cone_slope;
    Termination termination = Termination::reached_horizon;
    SweepDirection direction = SweepDirection::forward;
    ShooterConfig config;

    double t_min() const { return samples.front().t; }
    double t_max() const { return samples.back().t; }
    bool empty() const { return samples.empty(); }

    std::size_t interval_of(double t) const {
        if (samples.size() < 2) throw precondition_error("profile has fewer than two samples");
        if (!(t >= t_min() && t <= t_max()))
            throw precondition_error("parameter " + std::to_string(t) + " outside profile range");
        auto it = std::upper_bound(samples.begin(), samples.end(), t,
                                   [](double v, const ProfileSample& s) { return v < s.t; });
        std::size_t i = static_cast<std::size_t>(it - samples.begin());
        if (i == 0) i = 1;
        if (i >= samples.size()) i = samples.size() - 1;
        return i - 1;
    }

    // Cubic Hermite interpolation of (u, u') on the sample grid.
    ProfileSample at(double t) const {
        const std::size_t i = interval_of(t);
        const ProfileSample& p = samples[i];
        const ProfileSample& q = samples[i + 1];
        const double dt = q.t - p.t;
        const double s = (t - p.t) / dt;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        const double u = h00 * p.u + h10 * dt * p.u_prime + h01 * q.u + h11 * dt * q.u_prime;
        const double d00 = 6 * s * (s - 1), d10 = (1 - s) * (1 - 3 * s);
        const double d01 = -6 * s * (s - 1), d11 = s * (3 * s - 2);
        const double up = (d00 * p.u + d01 * q.u) / dt + d10 * p.u_prime + d11 * q.u_prime;
        return {t, u, up};
    }

    friend bool operator==(const ProfileCurve& a, const ProfileCurve& b) {
        return a.dim_n == b.dim_n && a.samples == b.samples && a.theta_hat == b.theta_hat &&
               a.theta_error == b.theta_error && a.cone_slope == b.cone_slope && a.termination == b.termination &&
               a.direction == b.direction && a.config.dim_n == b.config.dim_n &&
               a.config.initial_radius == b.config.initial_radius && a.config.initial_slope == b.config.initial_slope &&
               a.config.horizon == b.config.horizon && a.config.abs_tol == b.config.abs_tol &&
               a.config.rel_tol == b.config.rel_tol && a.config.max_steps == b.config.max_steps &&
               a.config.auto_horizon == b.config.auto_horizon;
    }
};

/// u'' for a rotational shrinker with profile (u(t) w, -t) in R^{n+1}.
/// The bracket is (n-1)/u + (t u' - u)/2 written so that u = sqrt(2(n-1)), u' = 0
/// is an exact floating point fixed point.
inline double profile_rhs(int dim_n, double t, double u, double u_prime) {
    if (!(u > 0.0)) throw precondition_error("profile radius must be positive");
    const double c = cylinder_profile_radius(dim_n);
    const double bracket = (c - u) * (c + u) / (2.0 * u) + 0.5 * t * u_prime;
    return (1.0 + u_prime * u_prime) * bracket;
}

}  // namespace shrinker
