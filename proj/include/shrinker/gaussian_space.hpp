#pragma once

#include <cmath>
#include <span>

#include "errors.hpp"

namespace shrinker {

// R^{n+1} with density e^phi, phi(x) = -|x|^2/4.
struct GaussianSpace {
    int ambient_dim = 3;

    explicit GaussianSpace(int dim) : ambient_dim(dim) {
        if (dim < 2) throw precondition_error("ambient dimension must be at least 2");
    }

    static double density_exponent(std::span<const double> x) {
        double r2 = 0.0;
        for (double xi : x) r2 += xi * xi;
        return -0.25 * r2;
    }

    static double weight(std::span<const double> x) { return std::exp(density_exponent(x)); }

    // Ric_phi(N) = Ric(N,N) - Hess phi(N,N) = 0 + |N|^2/2.
    static constexpr double bakry_emery_ricci(double normal_norm_sq = 1.0) { return 0.5 * normal_norm_sq; }
};

}  // namespace shrinker
