#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"

namespace shrinker {

struct GaussLegendre {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;

    explicit GaussLegendre(int n) {
        if (n < 1) throw precondition_error("Gauss-Legendre rule needs at least one node");
        nodes.resize(n);
        weights.resize(n);
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            const double w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = weights[n - 1 - i] = w;
        }
    }
};

struct QuadratureSpec {
    int nodes_per_axis = 64;
    // Integration box is [-half_width, half_width]^dim.
    double half_width = 1.0;
    int dim = 1;

    void validate() const {
        if (nodes_per_axis < 1 || dim < 1 || !(half_width > 0.0)) throw precondition_error("degenerate quadrature spec");
    }
};

/// Tensor-product Gauss-Legendre integral of f(std::span<const double>) over the box.
template <class F>
double integrate_box(F&& f, const QuadratureSpec& spec) {
    spec.validate();
    const GaussLegendre rule(spec.nodes_per_axis);
    const int m = spec.dim, q = spec.nodes_per_axis;
    std::vector<int> idx(m, 0);
    std::vector<double> x(m);
    double total = 0.0;
    for (;;) {
        double w = 1.0;
        for (int d = 0; d < m; ++d) {
            x[d] = spec.half_width * rule.nodes[idx[d]];
            w *= spec.half_width * rule.weights[idx[d]];
        }
        total += w * f(std::span<const double>(x));
        int d = 0;
        while (d < m && ++idx[d] == q) idx[d++] = 0;
        if (d == m) break;
    }
    return total;
}

/// Area of the unit sphere S^k in R^{k+1}.
inline double unit_sphere_area(int k) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * (k + 1)) / std::tgamma(0.5 * (k + 1));
}

}  // namespace shrinker
