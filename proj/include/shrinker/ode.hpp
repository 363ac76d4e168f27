#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>

namespace shrinker::ode {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 0.0;  // 0 picks a step from the tolerance
    double min_step = 1e-14;    // relative to max(1, |t|)
    double max_step = 0.0;      // 0 means unbounded
    std::size_t max_steps = 50'000'000;
};

enum class Status { completed, stopped, step_underflow, max_steps };

template <std::size_t N>
struct Result {
    Status status = Status::completed;
    double t = 0.0;
    State<N> y{};
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
    State<N> out = y;
    for (std::size_t i = 0; i < N; ++i) {
        double acc = 0.0;
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        out[i] += h * acc;
    }
    return out;
}

}  // namespace detail

/// Dormand-Prince 5(4) with FSAL and the usual elementary step controller.
/// Integrates from t0 towards t_end (either direction). After every accepted
/// step `observer(t, y)` is called; returning false stops the integration.
template <std::size_t N, class Rhs, class Observer>
Result<N> dormand_prince(Rhs&& f, double t0, State<N> y0, double t_end, const StepControl& ctl, Observer&& observer) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    Result<N> res;
    res.t = t0;
    res.y = y0;
    const double span = t_end - t0;
    if (span == 0.0) return res;
    const double dir = span > 0 ? 1.0 : -1.0;

    double t = t0;
    State<N> y = y0;
    State<N> k1 = f(t, y);

    double h = ctl.initial_step;
    if (h <= 0.0) {
        double ynorm = 0.0, fnorm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
            ynorm = std::max(ynorm, std::abs(y[i]) / sc);
            fnorm = std::max(fnorm, std::abs(k1[i]) / sc);
        }
        h = (ynorm < 1e-5 || fnorm < 1e-5) ? 1e-6 : 0.01 * ynorm / fnorm;
        h = std::min(h, std::abs(span));
    }
    if (ctl.max_step > 0.0) h = std::min(h, ctl.max_step);

    std::size_t steps = 0;
    while (dir * (t_end - t) > 0.0) {
        if (++steps > ctl.max_steps) {
            res.status = Status::max_steps;
            break;
        }
        const double h_floor = ctl.min_step * std::max(1.0, std::abs(t));
        if (h < h_floor) {
            res.status = Status::step_underflow;
            break;
        }
        bool last = false;
        if (h >= std::abs(t_end - t)) {
            h = std::abs(t_end - t);
            last = true;
        }
        const double hs = dir * h;

        const State<N> k2 = f(t + c2 * hs, detail::axpy<N>(y, hs, {{a21, &k1}}));
        const State<N> k3 = f(t + c3 * hs, detail::axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}}));
        const State<N> k4 = f(t + c4 * hs, detail::axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State<N> k5 =
            f(t + c5 * hs, detail::axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State<N> k6 =
            f(t + hs, detail::axpy<N>(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State<N> y_new = detail::axpy<N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const double t_new = last ? t_end : t + hs;
        const State<N> k7 = f(t_new, y_new);

        double err = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double q = ei / sc;
            err += q * q;
            if (!std::isfinite(y_new[i])) finite = false;
        }
        err = std::sqrt(err / static_cast<double>(N));
        if (!finite || !std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            t = t_new;
            y = y_new;
            k1 = k7;
            ++res.accepted;
            if (!observer(t, y)) {
                res.status = Status::stopped;
                res.t = t;
                res.y = y;
                return res;
            }
            const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            ++res.rejected;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        }
        if (ctl.max_step > 0.0) h = std::min(h, ctl.max_step);
    }
    res.t = t;
    res.y = y;
    return res;
}

template <std::size_t N, class Rhs>
Result<N> dormand_prince(Rhs&& f, double t0, State<N> y0, double t_end, const StepControl& ctl) {
    return dormand_prince<N>(std::forward<Rhs>(f), t0, y0, t_end, ctl, [](double, const State<N>&) { return true; });
}

/// Classical fixed-step RK4 from t0 to t1 with `substeps` equal steps.
template <std::size_t N, class Rhs>
State<N> rk4(Rhs&& f, double t0, State<N> y, double t1, int substeps) {
    const double h = (t1 - t0) / substeps;
    double t = t0;
    for (int s = 0; s < substeps; ++s) {
        const State<N> k1 = f(t, y);
        const State<N> k2 = f(t + 0.5 * h, detail::axpy<N>(y, 0.5 * h, {{1.0, &k1}}));
        const State<N> k3 = f(t + 0.5 * h, detail::axpy<N>(y, 0.5 * h, {{1.0, &k2}}));
        const State<N> k4 = f(t + h, detail::axpy<N>(y, h, {{1.0, &k3}}));
        y = detail::axpy<N>(y, h, {{1.0 / 6, &k1}, {2.0 / 6, &k2}, {2.0 / 6, &k3}, {1.0 / 6, &k4}});
        t = (s + 1 == substeps) ? t1 : t + h;
    }
    return y;
}

}  // namespace shrinker::ode
