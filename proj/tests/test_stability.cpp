#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "shrinker/shrinker.hpp"

using namespace shrinker;
using std::numbers::pi;

namespace {

const ModelSurface kCylinder = make_cylinder(2, 1, std::sqrt(2.0));
const ModelSurface kPlane = make_hyperplane(2, 0.0);

CylinderPoint point_on(double R, double angle, std::vector<double> t) {
    Eigen::VectorXd p(2);
    p << R * std::cos(angle), R * std::sin(angle);
    return {p, std::move(t)};
}

}  // namespace

TEST(Jacobi, CenterValues) {
    const std::vector<double> c1{0.0}, c2{0.0, 0.0};
    EXPECT_NEAR(jacobi_apply(kCylinder, test_function_for(kCylinder, 2 * pi), c1), 0.75, 1e-15);
    EXPECT_NEAR(jacobi_apply(kPlane, test_function_for(kPlane, 2 * pi), c2), 0.0, 1e-15);
    EXPECT_EQ(jacobi_terms(kCylinder, test_function_for(kCylinder, 2 * pi), c1).drift, 0.0);
}

TEST(Jacobi, RejectsMismatchedInputs) {
    const std::vector<double> outside{4.0};
    EXPECT_THROW(jacobi_apply(kCylinder, test_function_for(kCylinder, 2 * pi), outside), precondition_error);
    const std::vector<double> wrong{0.0, 0.0};
    EXPECT_THROW(jacobi_apply(kCylinder, test_function_for(kCylinder, 2 * pi), wrong), precondition_error);
    EXPECT_THROW(test_function_for(make_sphere(2, 2.0), 7.0), precondition_error);
    EXPECT_THROW(cylinder_cosine(2, 2, 1.0, 7.0), precondition_error);
}

TEST(LowerBound, Values) {
    EXPECT_NEAR(lower_bound_c(kCylinder, 2 * pi), 0.75, 1e-15);
    EXPECT_NEAR(lower_bound_c(kPlane, 2 * pi), 0.0, 1e-15);
    EXPECT_NEAR(lower_bound_c(make_cylinder(3, 2, 2.0), 1e9), 1.0, 1e-15);
    EXPECT_NEAR(lower_bound_c(kPlane, 4 * pi), 0.375, 1e-15);
}

TEST(MinR, ValuesAndBracketing) {
    EXPECT_NEAR(min_r(kPlane), 2 * pi, 1e-14);
    EXPECT_NEAR(min_r(kCylinder), pi, 1e-14);
    for (const ModelSurface& s : {kPlane, kCylinder, make_cylinder(3, 2, 2.0), make_cylinder(3, 1, 1.0),
                                  make_hyperplane(3, 0.0)}) {
        EXPECT_GT(lower_bound_c(s, 1.01 * min_r(s)), 0.0);
        EXPECT_LT(lower_bound_c(s, 0.99 * min_r(s)), 0.0);
    }
}

TEST(WeightedInner, ZeroFunction) {
    auto zero = [](std::span<const double>) { return 0.0; };
    EXPECT_EQ(weighted_inner(zero, zero, kPlane, {32, 1.0, 2}), 0.0);
}

TEST(WeightedInner, OneDimensionalCosineAgainstTrapezoid) {
    const ModelSurface line = make_hyperplane(1, 0.0);
    const TestFunction u = hyperplane_cosine(1, 2 * pi);
    auto f = [&](std::span<const double> t) { return u.value(t); };
    const double quad = weighted_inner(f, f, line, {64, pi, 1});
    const int N = 1'000'000;
    double trap = 0.0;
    for (int i = 0; i <= N; ++i) {
        const double t = -pi + 2 * pi * i / N;
        const double c = std::cos(t / 2);
        trap += (i == 0 || i == N ? 0.5 : 1.0) * c * c * std::exp(-t * t / 4);
    }
    trap *= 2 * pi / N;
    EXPECT_NEAR(quad, trap, 1e-8);
}

TEST(Certificate, CylinderAtTwicePi) {
    const InstabilityCertificate c = certify_instability(kCylinder, 2 * pi);
    EXPECT_TRUE(c.valid());
    EXPECT_NEAR(c.c_bound, 0.75, 1e-15);
    EXPECT_GE(c.rayleigh_value, 0.75);
    EXPECT_GE(c.pointwise_margin, -1e-12);
    EXPECT_NEAR(c.rayleigh_value, c.rayleigh_by_parts, 1e-10);
}

TEST(Certificate, HyperplaneAtFourPi) {
    const InstabilityCertificate c = certify_instability(kPlane, 4 * pi);
    EXPECT_TRUE(c.valid());
    EXPECT_NEAR(c.c_bound, 0.375, 1e-15);
    EXPECT_GE(c.rayleigh_value, c.c_bound - 1e-8);
}

TEST(Certificate, RefusedBelowThreshold) {
    EXPECT_THROW(certify_instability(kPlane, pi), precondition_error);
    EXPECT_THROW(certify_instability(kPlane, 3.0), precondition_error);
    EXPECT_THROW(certify_instability(kCylinder, pi), precondition_error);
}

TEST(Certificate, DriftIsNonPositiveOnTheBox) {
    for (const ModelSurface& s : {kCylinder, make_cylinder(3, 1, 1.0), make_hyperplane(3, 0.0)}) {
        const InstabilityCertificate c = certify_instability(s, 2 * min_r(s), {21});
        EXPECT_LE(c.min_drift, 0.0);
        EXPECT_TRUE(c.positive_interior);
    }
}

TEST(Variation, NormalAtZeroAndAtCenter) {
    const TestFunction u = test_function_for(kCylinder, 2 * pi);
    const CylinderPoint q = point_on(u.R, 0.4, {0.7});
    const Eigen::VectorXd N0 = variation_normal(u, 0.0, q);
    EXPECT_NEAR((N0.head(2) - q.p / u.R).norm(), 0.0, 1e-15);
    EXPECT_EQ(N0(2), 0.0);
    const CylinderPoint c = point_on(u.R, 1.1, {0.0});
    for (double s : {-0.3, 0.2, 1.0}) {
        const Eigen::VectorXd N = variation_normal(u, s, c);
        EXPECT_NEAR((N.head(2) - c.p / u.R).norm(), 0.0, 1e-15);
        EXPECT_NEAR(N(2), 0.0, 1e-15);
    }
}

TEST(Variation, NormalIsUnitAndOrthogonal) {
    const TestFunction u = test_function_for(make_cylinder(3, 1, 1.3), 9.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> box(-u.half_width(), u.half_width()), ang(0, 2 * pi);
    for (int i = 0; i < 10; ++i) {
        const CylinderPoint q = point_on(u.R, ang(rng), {box(rng), box(rng)});
        const double s = 0.3;
        const Eigen::VectorXd N = variation_normal(u, s, q);
        EXPECT_NEAR(N.norm(), 1.0, 1e-14);
        const auto X = variation_chart(u, s, q);
        const double h = 1e-3;
        for (int j = 0; j < u.n; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(u.n);
            e(j) = 1.0;
            const Eigen::VectorXd T =
                (-X(2 * h * e) + 8 * X(h * e) - 8 * X(-h * e) + X(-2 * h * e)) / (12 * h);
            EXPECT_NEAR(N.dot(T) / T.norm(), 0.0, 1e-10);
        }
    }
}

TEST(Variation, FirstOrderChangeOfHphiIsJacobi) {
    const TestFunction u = test_function_for(kCylinder, 2 * pi);
    const HphiPrime c = hphi_prime_check(u, point_on(u.R, 0.0, {0.0}));
    EXPECT_NEAR(c.minus_jacobi, -0.75, 1e-15);
    EXPECT_NEAR(c.fd_derivative, -c.minus_jacobi, 1e-4);
}

TEST(TranslationDelta, ZeroCases) {
    const TestFunction u = test_function_for(kCylinder, 2 * pi);
    const CylinderPoint q = point_on(u.R, 0.2, {1.0});
    EXPECT_EQ(translation_delta(u, -0.5, q, 0.0).value, 0.0);
    EXPECT_NEAR(translation_delta(u, -0.5, point_on(u.R, 0.2, {0.0}), 0.4).value, 0.0, 1e-16);
}

TEST(TranslationDelta, NegativeInMatchedQuadrant) {
    const TestFunction u = test_function_for(kCylinder, 2 * pi);
    for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 20; ++j) {
            const double s = -0.05 * i, h = 0.05 * j, t = u.half_width() * i / 20.0;
            EXPECT_LT(translation_delta(u, s, point_on(u.R, 0.3, {t}), h).value, 0.0);
            EXPECT_LT(translation_delta(u, s, point_on(u.R, 0.3, {-t}), -h).value, 0.0);
        }
}
