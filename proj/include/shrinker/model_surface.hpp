#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <variant>

#include "errors.hpp"
#include "gaussian_space.hpp"
#include "profile_curve.hpp"

namespace shrinker {

struct WeightedScalars {
    double H = 0.0;
    double support = 0.0;
    double H_phi = 0.0;
    double A_norm_sq = 0.0;
    double ric_phi = 0.5;
};

inline WeightedScalars make_scalars(double H, double support, double A_norm_sq) {
    return {H, support, H + 0.5 * support, A_norm_sq, GaussianSpace::bakry_emery_ricci()};
}

struct Sphere {
    double radius;
};
struct Hyperplane {
    double height;
};
struct Cylinder {
    int k;
    double radius;
};
struct Catenoid {
    std::shared_ptr<const ProfileCurve> profile;
    double theta;
};
struct RotationalGraph {
    std::shared_ptr<const ProfileCurve> profile;
};

using SurfaceShape = std::variant<Sphere, Hyperplane, Cylinder, Catenoid, RotationalGraph>;

struct ModelSurface {
    int ambient_dim = 3;
    SurfaceShape shape;

    int n() const { return ambient_dim - 1; }

    void validate() const {
        if (ambient_dim < 2) throw precondition_error("ambient dimension must be at least 2");
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Sphere>) {
                    if (!(s.radius > 0.0)) throw precondition_error("sphere radius must be positive");
                } else if constexpr (std::is_same_v<S, Cylinder>) {
                    if (!(s.radius > 0.0)) throw precondition_error("cylinder radius must be positive");
                    if (s.k < 1 || s.k > n()) throw precondition_error("cylinder requires 1 <= k <= n");
                } else if constexpr (std::is_same_v<S, Catenoid> || std::is_same_v<S, RotationalGraph>) {
                    if (!s.profile || s.profile->samples.size() < 2)
                        throw precondition_error("rotational surface needs a sampled profile");
                    if (s.profile->dim_n != n()) throw precondition_error("profile dimension does not match ambient");
                }
            },
            shape);
    }
};

inline ModelSurface make_sphere(int n, double R) { return {n + 1, Sphere{R}}; }
inline ModelSurface make_hyperplane(int n, double t) { return {n + 1, Hyperplane{t}}; }
inline ModelSurface make_cylinder(int n, int k, double R) { return {n + 1, Cylinder{k, R}}; }

inline std::string describe(const ModelSurface& s) {
    char buf[128];
    std::visit(
        [&](const auto& v) {
            using S = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<S, Sphere>)
                std::snprintf(buf, sizeof buf, "sphere(n=%d,R=%.17g)", s.n(), v.radius);
            else if constexpr (std::is_same_v<S, Hyperplane>)
                std::snprintf(buf, sizeof buf, "hyperplane(n=%d,t=%.17g)", s.n(), v.height);
            else if constexpr (std::is_same_v<S, Cylinder>)
                std::snprintf(buf, sizeof buf, "cylinder(n=%d,k=%d,R=%.17g)", s.n(), v.k, v.radius);
            else if constexpr (std::is_same_v<S, Catenoid>)
                std::snprintf(buf, sizeof buf, "catenoid(n=%d,theta=%.17g)", s.n(), v.theta);
            else
                std::snprintf(buf, sizeof buf, "rotational_graph(n=%d)", s.n());
        },
        s.shape);
    return buf;
}

/// Weighted scalars of a rotational hypersurface (u(t) w, -t) in R^{n+1} given u, u', u''.
inline WeightedScalars rotational_scalars(int dim_n, double t, double u, double up, double upp) {
    if (!(u > 0.0)) throw precondition_error("profile radius must be positive");
    const double W = std::sqrt(1.0 + up * up);
    const double kappa = upp / (W * W * W);
    const double par = (dim_n - 1) / (u * W);
    const double support = (u - t * up) / W;
    return make_scalars(kappa - par, support, kappa * kappa + (dim_n - 1) * (1.0 / (u * u * W * W)));
}

namespace detail {

// u'' of a sampled profile from the slope samples (non-uniform central difference).
inline double sampled_second_derivative(const ProfileCurve& p, double t) {
    const std::size_t i = p.interval_of(t);
    const auto& s = p.samples;
    const ProfileSample& a = s[i];
    const ProfileSample& b = s[i + 1];
    return (b.u_prime - a.u_prime) / (b.t - a.t);
}

}  // namespace detail

/// Closed-form weighted quantities. `param` is the profile parameter t for rotational
/// surfaces and is ignored for the homogeneous models.
inline WeightedScalars weighted_quantities(const ModelSurface& surface, double param = 0.0) {
    surface.validate();
    const int n = surface.n();
    return std::visit(
        [&](const auto& s) -> WeightedScalars {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Sphere>) {
                const double R = s.radius;
                return make_scalars(-n / R, R, n / (R * R));
            } else if constexpr (std::is_same_v<S, Hyperplane>) {
                return make_scalars(0.0, s.height, 0.0);
            } else if constexpr (std::is_same_v<S, Cylinder>) {
                const double R = s.radius;
                return make_scalars(-s.k / R, R, s.k / (R * R));
            } else if constexpr (std::is_same_v<S, Catenoid>) {
                const ProfileSample q = s.profile->at(param);
                return rotational_scalars(n, q.t, q.u, q.u_prime, profile_rhs(n, q.t, q.u, q.u_prime));
            } else {
                const ProfileSample q = s.profile->at(param);
                return rotational_scalars(n, q.t, q.u, q.u_prime,
                                          detail::sampled_second_derivative(*s.profile, param));
            }
        },
        surface.shape);
}

inline double shrinker_radius(int k) {
    if (k < 1) throw precondition_error("k must be at least 1");
    return std::sqrt(2.0 * k);
}

/// Positive root of R/2 - k/R = lambda.
inline double lambda_cylinder_radius(double lambda, int k) {
    if (k < 1) throw precondition_error("k must be at least 1");
    const double disc = std::sqrt(lambda * lambda + 2.0 * k);
    // The two roots multiply to -2k; use the cancellation-free form on each side.
    return lambda >= 0.0 ? lambda + disc : 2.0 * k / (disc - lambda);
}

}  // namespace shrinker
