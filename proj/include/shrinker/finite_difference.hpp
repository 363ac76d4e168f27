#pragma once

#include <cmath>
#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "model_surface.hpp"

namespace shrinker {

// A point of a profile curve in the (r, z) half-plane; r is the distance to the axis.
struct CurvePoint {
    double r = 0.0;
    double z = 0.0;
};

inline void check_fd_step(double p, double h) {
    if (!(h > 0.0) || h < 1e-8 * std::max(1.0, std::abs(p)))
        throw precondition_error("finite-difference step underflow");
}

/// Weighted scalars of the hypersurface obtained by rotating gamma(p) = (r(p), z(p)) through
/// `sphere_dim` directions (n-1 for a surface of revolution in R^{n+1}). The unit normal is the
/// tangent rotated by +90 degrees, N = (-z', r') / |gamma'|. Second-order central differences.
template <class Curve>
WeightedScalars curve_weighted_scalars(int sphere_dim, Curve&& gamma, double p, double h = 1e-3) {
    check_fd_step(p, h);
    const CurvePoint m = gamma(p - h), c = gamma(p), q = gamma(p + h);
    if (!(c.r > 0.0)) throw precondition_error("curve must stay off the axis");
    const double r1 = (q.r - m.r) / (2 * h), z1 = (q.z - m.z) / (2 * h);
    const double r2 = (q.r - 2 * c.r + m.r) / (h * h), z2 = (q.z - 2 * c.z + m.z) / (h * h);
    const double speed = std::hypot(r1, z1);
    const double Nr = -z1 / speed, Nz = r1 / speed;
    const double kappa = (r1 * z2 - z1 * r2) / (speed * speed * speed);
    const double par = Nr / c.r;
    return make_scalars(kappa - sphere_dim * par, c.r * Nr + c.z * Nz, kappa * kappa + sphere_dim * par * par);
}

/// H_phi of the rotational hypersurface (u(t) w, shift - t) in R^{n+1}.
template <class Profile>
double h_phi_numeric(int dim_n, Profile&& u, double t, double h = 1e-3, double shift = 0.0) {
    auto gamma = [&](double p) { return CurvePoint{u(p), shift - p}; };
    return curve_weighted_scalars(dim_n - 1, gamma, t, h).H_phi;
}

/// Richardson extrapolation of h_phi_numeric from steps h and h/2.
template <class Profile>
double h_phi_numeric_extrapolated(int dim_n, Profile&& u, double t, double h = 1e-2, double shift = 0.0) {
    const double coarse = h_phi_numeric(dim_n, u, t, h, shift);
    const double fine = h_phi_numeric(dim_n, u, t, 0.5 * h, shift);
    return (4.0 * fine - coarse) / 3.0;
}

/// Weighted scalars of a hypersurface X: R^n -> R^{n+1} at chart coordinates `x`, from central
/// differences of the immersion. The normal is the unit vector orthogonal to the tangent space
/// with positive component along `orientation`.
template <class Immersion>
WeightedScalars immersion_weighted_scalars(Immersion&& X, const Eigen::VectorXd& x, const Eigen::VectorXd& orientation,
                                           double h = 1e-3) {
    check_fd_step(x.norm(), h);
    const Eigen::Index n = x.size();
    const Eigen::VectorXd X0 = X(x);
    const Eigen::Index dim = X0.size();
    if (dim != n + 1) throw precondition_error("immersion must have codimension one");

    auto shifted = [&](Eigen::Index i, double di, Eigen::Index j, double dj) {
        Eigen::VectorXd y = x;
        y(i) += di;
        if (j >= 0) y(j) += dj;
        return X(y);
    };

    Eigen::MatrixXd D(dim, n);
    std::vector<Eigen::VectorXd> plus(n), minus(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        plus[i] = shifted(i, h, -1, 0.0);
        minus[i] = shifted(i, -h, -1, 0.0);
        D.col(i) = (plus[i] - minus[i]) / (2 * h);
    }
    const Eigen::MatrixXd g = D.transpose() * D;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(D);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd N = Q.col(dim - 1);
    if (N.dot(orientation) < 0) N = -N;

    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        b(i, i) = N.dot((plus[i] - 2 * X0 + minus[i]) / (h * h));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const Eigen::VectorXd mixed =
                (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) + shifted(i, -h, j, -h)) /
                (4 * h * h);
            b(i, j) = b(j, i) = N.dot(mixed);
        }
    }
    const Eigen::MatrixXd shape = g.ldlt().solve(b);
    return make_scalars(shape.trace(), X0.dot(N), (shape * shape).trace());
}

}  // namespace shrinker
