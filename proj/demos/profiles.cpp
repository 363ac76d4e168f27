// Half-catenoid family: boundary radius, cone slope and checks across the resolvable window.
//
//   demo_profiles [n] [output-dir]

#include <cmath>
#include <cstdio>
#include <string>

#include "shrinker/shrinker.hpp"

using namespace shrinker;

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 2;
    const std::string dir = argc > 2 ? argv[2] : "";
    try {
        std::printf("n = %d, cylinder radius %.10f\n", n, cylinder_profile_radius(n));
        std::printf("%10s %14s %14s %12s %10s %8s %12s\n", "theta", "u(0)", "theta_hat", "|theta err|", "T", "km",
                    "residual");
        for (double theta : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) {
            const ProfileCurve p = catenoid_from_theta(n, theta);
            const KmReport km = km_property_check(p);
            const double res = max_shrinker_residual(p, std::max<std::size_t>(1, p.samples.size() / 200));
            std::printf("%10.3g %14.10f %14.10f %12.3e %10.4g %8s %12.3e\n", theta, p.samples.front().u,
                        p.theta_hat.value_or(NAN), std::abs(p.theta_hat.value_or(NAN) - theta), p.t_max(),
                        km.all() ? "pass" : "FAIL", res);
            if (!dir.empty()) {
                char name[64];
                std::snprintf(name, sizeof name, "/catenoid_n%d_theta%g", n, theta);
                io::save_profile(dir + name, p);
            }
        }
        std::printf("boundary radius tends to %.10f as theta grows\n", boundary_values(n, kThetaMax).a);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
