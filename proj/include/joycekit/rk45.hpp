#pragma once
// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) over complex state
// vectors parametrized by a real path variable, with an optional pole guard
// rejecting states too close to a model's polar divisor.

#include <cmath>
#include <functional>

#include "joycekit/errors.hpp"
#include "joycekit/types.hpp"

namespace joycekit::rk45 {

struct Options {
    double tol = 1e-10;          // local error tolerance (mixed abs/rel)
    double h_init = 1e-2;
    double h_min = 1e-14;
    std::size_t max_steps = 200000;
    // Returns true when the state must not be evaluated (pole guard).
    std::function<bool(const cvec&)> forbidden;
};

namespace detail {
inline const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline const double a21 = 1.0 / 5;
inline const double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                    a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                    a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                    b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                    e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace detail

// Integrate dy/dt = f(t, y) from t0 to t1.  Throws PoleEncountered if the
// guard triggers, TolFailure/StepUnderflow when step control fails.
template <typename F>
cvec integrate(F&& f, cvec y, double t0, double t1, const Options& opt = {}) {
    using namespace detail;
    if (t1 == t0) return y;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    double t = t0;
    double h = std::min(std::abs(opt.h_init), std::abs(t1 - t0)) * dir;
    const std::size_t n = y.size();
    auto guard = [&](const cvec& s) {
        if (opt.forbidden && opt.forbidden(s))
            throw PoleEncountered("integration path entered a guarded region");
    };
    guard(y);
    cvec k1 = f(t, y);
    for (std::size_t step = 0; step < opt.max_steps; ++step) {
        if ((t - t1) * dir >= 0.0) return y;
        if ((t + h - t1) * dir > 0.0) h = t1 - t;
        cvec y2(n), y3(n), y4(n), y5(n), y6(n), y7(n);
        for (std::size_t i = 0; i < n; ++i) y2[i] = y[i] + h * a21 * k1[i];
        guard(y2);
        cvec k2 = f(t + c2 * h, y2);
        for (std::size_t i = 0; i < n; ++i)
            y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        guard(y3);
        cvec k3 = f(t + c3 * h, y3);
        for (std::size_t i = 0; i < n; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        guard(y4);
        cvec k4 = f(t + c4 * h, y4);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        guard(y5);
        cvec k5 = f(t + c5 * h, y5);
        for (std::size_t i = 0; i < n; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        guard(y6);
        cvec k6 = f(t + h, y6);
        for (std::size_t i = 0; i < n; ++i)
            y7[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                b5 * k5[i] + b6 * k6[i]);
        guard(y7);
        cvec k7 = f(t + h, y7);
        double err = 0.0, scale = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                          e6 * k6[i] + e7 * k7[i]);
            double sc = 1.0 + std::max(std::abs(y[i]), std::abs(y7[i]));
            err = std::max(err, std::abs(e) / sc);
            scale = std::max(scale, sc);
        }
        (void)scale;
        if (err <= opt.tol) {
            t += h;
            y = std::move(y7);
            k1 = std::move(k7); // FSAL
        }
        double factor = 0.9 * std::pow(opt.tol / std::max(err, 1e-300), 0.2);
        factor = std::min(5.0, std::max(0.2, factor));
        h *= factor;
        if (std::abs(h) < opt.h_min)
            throw StepUnderflow("step size underflow in adaptive integrator");
    }
    throw TolFailure("integrator exceeded the step budget before reaching t1");
}

} // namespace joycekit::rk45
