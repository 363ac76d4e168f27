#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "finite_difference.hpp"
#include "model_surface.hpp"
#include "quadrature.hpp"

namespace shrinker {

/// u(t) = amplitude * prod_i cos(pi t_i / r) on the box (-r/2, r/2)^m, where t are the flat
/// coordinates of the surface (m = n - k for C^k_R, m = n for a hyperplane).
struct TestFunction {
    enum class Kind { cylinder_cosine, hyperplane_cosine };

    Kind kind = Kind::hyperplane_cosine;
    int n = 2;
    int k = 0;
    double R = 0.0;
    double r = 1.0;
    double amplitude = 1.0;

    int m() const { return kind == Kind::cylinder_cosine ? n - k : n; }
    double half_width() const { return 0.5 * r; }

    void check_point(std::span<const double> t) const {
        if (static_cast<int>(t.size()) != m()) throw precondition_error("point has the wrong number of coordinates");
        for (double ti : t)
            if (!(std::abs(ti) <= half_width() * (1 + 1e-15))) throw precondition_error("point outside the test box");
    }

    double value(std::span<const double> t) const {
        double u = amplitude;
        for (double ti : t) u *= std::cos(std::numbers::pi * ti / r);
        return u;
    }

    std::vector<double> gradient(std::span<const double> t) const {
        const double w = std::numbers::pi / r;
        std::vector<double> g(t.size(), amplitude);
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j)
                g[i] *= (i == j) ? -w * std::sin(w * t[j]) : std::cos(w * t[j]);
        return g;
    }

    double laplacian(std::span<const double> t) const {
        const double w = std::numbers::pi / r;
        return -m() * w * w * value(t);
    }
};

inline TestFunction cylinder_cosine(int n, int k, double R, double r) {
    if (k < 1 || k >= n) throw precondition_error("cylinder test function needs 1 <= k < n");
    if (!(R > 0.0) || !(r > 0.0)) throw precondition_error("radius and box scale must be positive");
    return {TestFunction::Kind::cylinder_cosine, n, k, R, r, 1.0};
}

inline TestFunction hyperplane_cosine(int n, double r) {
    if (n < 1 || !(r > 0.0)) throw precondition_error("invalid hyperplane test function");
    return {TestFunction::Kind::hyperplane_cosine, n, 0, 0.0, r, 1.0};
}

namespace detail {

// |A|^2 and the number of flat directions m for the surfaces the stability module supports.
struct StabilityData {
    double A_norm_sq;
    int m;
};

inline StabilityData stability_data(const ModelSurface& s) {
    s.validate();
    if (const auto* c = std::get_if<Cylinder>(&s.shape)) {
        if (c->k >= s.n()) throw precondition_error("cylinder has no flat directions (k = n)");
        return {c->k / (c->radius * c->radius), s.n() - c->k};
    }
    if (std::get_if<Hyperplane>(&s.shape)) return {0.0, s.n()};
    throw precondition_error("stability operations support cylinders and hyperplanes only");
}

}  // namespace detail

inline TestFunction test_function_for(const ModelSurface& s, double r) {
    detail::stability_data(s);
    if (const auto* c = std::get_if<Cylinder>(&s.shape)) return cylinder_cosine(s.n(), c->k, c->radius, r);
    return hyperplane_cosine(s.n(), r);
}

struct JacobiTerms {
    double laplacian;
    double drift;
    double potential;
    double total;
};

/// J_phi u = Lap u - <x, grad u>/2 + (|A|^2 + Ric_phi) u at flat coordinates t.
inline JacobiTerms jacobi_terms(const ModelSurface& s, const TestFunction& u, std::span<const double> t) {
    const auto data = detail::stability_data(s);
    if (u.m() != data.m) throw precondition_error("test function does not match the surface");
    u.check_point(t);
    const auto g = u.gradient(t);
    double drift = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) drift -= 0.5 * t[i] * g[i];
    const double lap = u.laplacian(t);
    const double pot = (data.A_norm_sq + GaussianSpace::bakry_emery_ricci()) * u.value(t);
    return {lap, drift, pot, lap + drift + pot};
}

inline double jacobi_apply(const ModelSurface& s, const TestFunction& u, std::span<const double> t) {
    return jacobi_terms(s, u, t).total;
}

inline double lower_bound_c(const ModelSurface& s, double r) {
    if (!(r > 0.0)) throw precondition_error("box scale must be positive");
    const auto data = detail::stability_data(s);
    return 0.5 + data.A_norm_sq - data.m * std::numbers::pi * std::numbers::pi / (r * r);
}

inline double min_r(const ModelSurface& s) {
    const auto data = detail::stability_data(s);
    return std::numbers::pi * std::sqrt(data.m / (0.5 + data.A_norm_sq));
}

/// Weight of the directions not covered by the box: e^{-R^2/4} |S^k| R^k for C^k_R,
/// e^{-t^2/4} for the hyperplane at height t.
inline double transverse_weight(const ModelSurface& s) {
    detail::stability_data(s);
    if (const auto* c = std::get_if<Cylinder>(&s.shape))
        return std::exp(-0.25 * c->radius * c->radius) * unit_sphere_area(c->k) * std::pow(c->radius, c->k);
    const double t = std::get<Hyperplane>(s.shape).height;
    return std::exp(-0.25 * t * t);
}

/// (f, g) in L^2 of the weighted measure, f and g functions of the flat coordinates on the box.
template <class F, class G>
double weighted_inner(F&& f, G&& g, const ModelSurface& s, const QuadratureSpec& spec) {
    spec.validate();
    if (spec.dim != detail::stability_data(s).m) throw precondition_error("quadrature dimension does not match");
    auto integrand = [&](std::span<const double> t) {
        double r2 = 0.0;
        for (double ti : t) r2 += ti * ti;
        return f(t) * g(t) * std::exp(-0.25 * r2);
    };
    return transverse_weight(s) * integrate_box(integrand, spec);
}

struct CertifyOptions {
    int grid_points = 101;
    int quadrature_nodes = 64;
    double pointwise_tolerance = 1e-12;
    double quadrature_tolerance = 1e-8;
};

struct InstabilityCertificate {
    ModelSurface surface;
    TestFunction test;
    double r = 0.0;
    double c_bound = 0.0;
    double rayleigh_value = 0.0;
    double rayleigh_by_parts = 0.0;
    double pointwise_margin = 0.0;
    double min_drift = 0.0;
    bool positive_interior = false;
    int grid_points = 0;
    int quadrature_nodes = 0;
    double pointwise_tolerance = 0.0;

    bool valid() const {
        return c_bound > 0.0 && pointwise_margin >= -pointwise_tolerance && rayleigh_value > 0.0 && positive_interior;
    }
};

namespace detail {

// Calls f(t) at every point of the uniform grid with `points` nodes per axis on the closed box;
// `interior` tells whether the point is off the box boundary.
template <class F>
void for_each_grid_point(int m, double half, int points, F&& f) {
    std::vector<int> idx(m, 0);
    std::vector<double> t(m);
    for (;;) {
        bool interior = true;
        for (int d = 0; d < m; ++d) {
            t[d] = -half + 2.0 * half * idx[d] / (points - 1);
            if (idx[d] == 0 || idx[d] == points - 1) interior = false;
        }
        f(std::span<const double>(t), interior);
        int d = 0;
        while (d < m && ++idx[d] == points) idx[d++] = 0;
        if (d == m) break;
    }
}

}  // namespace detail

inline InstabilityCertificate certify_instability(const ModelSurface& s, double r, const CertifyOptions& opt = {}) {
    const auto data = detail::stability_data(s);
    const double threshold = min_r(s);
    if (!(r > threshold)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "box scale r=%.17g does not exceed the threshold %.17g (c would be %.17g)", r,
                      threshold, lower_bound_c(s, r));
        throw precondition_error(buf);
    }
    if (opt.grid_points < 2 || opt.quadrature_nodes < 1) throw precondition_error("degenerate grid or quadrature");

    InstabilityCertificate cert;
    cert.surface = s;
    cert.test = test_function_for(s, r);
    cert.r = r;
    cert.c_bound = lower_bound_c(s, r);
    cert.grid_points = opt.grid_points;
    cert.quadrature_nodes = opt.quadrature_nodes;
    cert.pointwise_tolerance = opt.pointwise_tolerance;

    const TestFunction& u = cert.test;
    double margin = std::numeric_limits<double>::infinity();
    double min_drift = std::numeric_limits<double>::infinity();
    bool positive = true;
    detail::for_each_grid_point(data.m, u.half_width(), opt.grid_points, [&](std::span<const double> t, bool interior) {
        const JacobiTerms j = jacobi_terms(s, u, t);
        margin = std::min(margin, j.total - cert.c_bound * u.value(t));
        min_drift = std::min(min_drift, j.drift);
        if (interior && !(u.value(t) > 0.0)) positive = false;
    });
    cert.pointwise_margin = margin;
    cert.min_drift = min_drift;
    cert.positive_interior = positive;

    const QuadratureSpec spec{opt.quadrature_nodes, u.half_width(), data.m};
    auto uf = [&](std::span<const double> t) { return u.value(t); };
    auto Ju = [&](std::span<const double> t) { return jacobi_apply(s, u, t); };
    const double uu = weighted_inner(uf, uf, s, spec);
    const double uJu = weighted_inner(uf, Ju, s, spec);
    // Integration by parts: (u, J u) = int (-|grad u|^2 + (|A|^2 + 1/2) u^2) e^phi.
    auto energy = [&](std::span<const double> t) {
        const auto g = u.gradient(t);
        double g2 = 0.0;
        for (double gi : g) g2 += gi * gi;
        const double v = u.value(t);
        return -g2 + (data.A_norm_sq + 0.5) * v * v;
    };
    auto one = [](std::span<const double>) { return 1.0; };
    const double by_parts = weighted_inner(energy, one, s, spec);
    if (!(uu > 0.0)) throw numerical_error("test function has zero weighted norm");
    cert.rayleigh_value = uJu / uu;
    cert.rayleigh_by_parts = by_parts / uu;
    if (std::abs(cert.rayleigh_value - cert.rayleigh_by_parts) > opt.quadrature_tolerance * std::max(1.0, std::abs(cert.rayleigh_value)))
        throw numerical_error("quadrature of the Rayleigh quotient disagrees with its integrated-by-parts form");
    return cert;
}

// ---------------------------------------------------------------------------------------------
// Variations of a cylinder: Sigma_s = {(p, t) + (s/R) u(t) (p, 0)}, p in S^k(R), t in the box.
// Ambient points are (p, t) in R^{k+1} x R^{n-k}.

struct CylinderPoint {
    Eigen::VectorXd p;  // on S^k(R)
    std::vector<double> t;
};

namespace detail {

inline void check_variation(const TestFunction& u, const CylinderPoint& q) {
    if (u.kind != TestFunction::Kind::cylinder_cosine) throw precondition_error("variations need a cylinder test function");
    if (q.p.size() != u.k + 1) throw precondition_error("sphere point has the wrong dimension");
    if (std::abs(q.p.norm() - u.R) > 1e-12 * std::max(1.0, u.R)) throw precondition_error("point is not on S^k(R)");
    u.check_point(q.t);
}

inline Eigen::VectorXd join(const Eigen::VectorXd& a, std::span<const double> b) {
    Eigen::VectorXd out(a.size() + static_cast<Eigen::Index>(b.size()));
    out.head(a.size()) = a;
    for (std::size_t i = 0; i < b.size(); ++i) out(a.size() + static_cast<Eigen::Index>(i)) = b[i];
    return out;
}

}  // namespace detail

inline Eigen::VectorXd variation_point(const TestFunction& u, double s, const CylinderPoint& q) {
    detail::check_variation(u, q);
    return detail::join((1.0 + s * u.value(q.t) / u.R) * q.p, q.t);
}

/// Unit outward normal of Sigma_s: (p/R, -s grad u) / sqrt(1 + s^2 |grad u|^2).
inline Eigen::VectorXd variation_normal(const TestFunction& u, double s, const CylinderPoint& q) {
    detail::check_variation(u, q);
    const auto g = u.gradient(q.t);
    double g2 = 0.0;
    std::vector<double> tail(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g2 += g[i] * g[i];
        tail[i] = -s * g[i];
    }
    return detail::join(q.p / u.R, tail) / std::sqrt(1.0 + s * s * g2);
}

/// R / sqrt(R^2 + s^2 |grad u|^2) (p, -(s/R) grad u); unit and normal only when R = 1.
inline Eigen::VectorXd variation_normal_printed(const TestFunction& u, double s, const CylinderPoint& q) {
    detail::check_variation(u, q);
    const auto g = u.gradient(q.t);
    double g2 = 0.0;
    std::vector<double> tail(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g2 += g[i] * g[i];
        tail[i] = -(s / u.R) * g[i];
    }
    return u.R / std::sqrt(u.R * u.R + s * s * g2) * detail::join(q.p, tail);
}

namespace detail {

// Orthonormal basis of the tangent space of S^k at the unit vector p_hat.
inline Eigen::MatrixXd sphere_tangent_basis(const Eigen::VectorXd& p_hat) {
    const Eigen::Index d = p_hat.size();
    Eigen::MatrixXd A(d, d);
    A.col(0) = p_hat;
    A.rightCols(d - 1) = Eigen::MatrixXd::Identity(d, d).leftCols(d - 1);
    // Pick the identity columns least aligned with p_hat to keep the QR well conditioned.
    Eigen::Index skip;
    p_hat.cwiseAbs().maxCoeff(&skip);
    Eigen::Index col = 1;
    for (Eigen::Index i = 0; i < d; ++i)
        if (i != skip) A.col(col++) = Eigen::VectorXd::Unit(d, i);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    return Q.rightCols(d - 1);
}

}  // namespace detail

/// Chart of Sigma_s around q: (alpha, tau) -> ((R + s u(t + tau)) normalize(p_hat + E alpha), t + tau).
inline auto variation_chart(const TestFunction& u, double s, const CylinderPoint& q) {
    detail::check_variation(u, q);
    const Eigen::VectorXd p_hat = q.p / q.p.norm();
    const Eigen::MatrixXd E = detail::sphere_tangent_basis(p_hat);
    const int k = u.k, m = u.m();
    return [=](const Eigen::VectorXd& x) {
        Eigen::VectorXd dir = p_hat + E * x.head(k);
        dir.normalize();
        std::vector<double> t(q.t);
        for (int i = 0; i < m; ++i) t[i] += x(k + i);
        return detail::join((u.R + s * u.value(t)) * dir, t);
    };
}

/// H_phi of Sigma_s at the image of q, by finite differences of the immersion.
inline WeightedScalars variation_scalars(const TestFunction& u, double s, const CylinderPoint& q, double h_fd = 1e-3) {
    const auto X = variation_chart(u, s, q);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(u.n);
    const Eigen::VectorXd orient = detail::join(q.p / u.R, std::vector<double>(u.m(), 0.0));
    return immersion_weighted_scalars(X, x0, orient, h_fd);
}

struct HphiPrime {
    double fd_derivative;  // central difference of H_phi(Sigma_s) at s = 0
    double minus_jacobi;   // -J_phi u at the point
    double error_estimate;  // change of the difference quotient when the steps are halved
};

inline HphiPrime hphi_prime_check(const TestFunction& u, const CylinderPoint& q, double ds = 1e-3, double h_fd = 1e-3,
                                  double max_error = 1e-3) {
    if (!(ds > 0.0)) throw precondition_error("variation step must be positive");
    auto quotient = [&](double d, double h) {
        return (variation_scalars(u, d, q, h).H_phi - variation_scalars(u, -d, q, h).H_phi) / (2 * d);
    };
    const double coarse = quotient(ds, h_fd);
    const double fine = quotient(0.5 * ds, 0.5 * h_fd);
    const ModelSurface base = make_cylinder(u.n, u.k, u.R);
    HphiPrime out{coarse, -jacobi_apply(base, u, q.t), std::abs(coarse - fine)};
    if (out.error_estimate > max_error) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "difference quotient not resolved: estimate %.3g exceeds %.3g", out.error_estimate,
                      max_error);
        throw numerical_error(buf);
    }
    return out;
}

struct TranslationDelta {
    double value;          // (1/2) h <v, N_s> from the exact unit normal
    double inner;          // <v, N_s>
    double printed_delta;  // h times the printed scalar formula for <v, N_s>
    double printed_inner;  // s pi u tan(pi t_last / r) / (r sqrt(R^2 + |grad u|^2))
};

/// Change of H_phi when Sigma_s is translated by h along the last flat direction.
inline TranslationDelta translation_delta(const TestFunction& u, double s, const CylinderPoint& q, double h) {
    const Eigen::VectorXd N = variation_normal(u, s, q);
    const double inner = N(N.size() - 1);
    const auto g = u.gradient(q.t);
    double g2 = 0.0;
    for (double gi : g) g2 += gi * gi;
    const double w = std::numbers::pi / u.r;
    const double printed = s * w * u.value(q.t) * std::tan(w * q.t.back()) / std::sqrt(u.R * u.R + g2);
    return {0.5 * h * inner, inner, h * printed, printed};
}

}  // namespace shrinker
