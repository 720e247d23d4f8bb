#pragma once
// Fourth-order central finite-difference stencils on holomorphic functions of
// several complex variables.  Complex coordinates are differentiated as
// independent holomorphic directions (real step along the coordinate axis in
// the complex chart); steps are scaled by coordinate magnitude.

#include <functional>

#include "joycekit/types.hpp"

namespace joycekit::fd {

// First derivative along a direction: g(t) = f(x + t*dir), returns g'(0).
template <typename F>
cplx d1_dir(F&& g, double h) {
    return (-g(2.0 * h) + 8.0 * g(h) - 8.0 * g(-h) + g(-2.0 * h)) / (12.0 * h);
}

// Second derivative along a direction: returns g''(0).
template <typename F>
cplx d2_dir(F&& g, double h) {
    return (-g(2.0 * h) + 16.0 * g(h) - 30.0 * g(0.0) + 16.0 * g(-h) - g(-2.0 * h)) /
           (12.0 * h * h);
}

inline double scaled_step(double h, cplx coord) {
    return h * std::max(1.0, std::abs(coord));
}

// Partial derivative of f(cvec) in coordinate slot i.
template <typename F>
cplx d1(F&& f, const cvec& x, std::size_t i, double h) {
    const double hi = scaled_step(h, x[i]);
    cvec y = x;
    auto g = [&](double t) {
        y[i] = x[i] + t;
        return f(y);
    };
    return d1_dir(g, hi);
}

// Second partial in one slot.
template <typename F>
cplx d2(F&& f, const cvec& x, std::size_t i, double h) {
    const double hi = scaled_step(h, x[i]);
    cvec y = x;
    auto g = [&](double t) {
        y[i] = x[i] + t;
        return f(y);
    };
    return d2_dir(g, hi);
}

// Mixed partial d^2 f / dx_i dx_j (i != j): nested 4th-order stencils.
template <typename F>
cplx d2_cross(F&& f, const cvec& x, std::size_t i, std::size_t j, double h) {
    if (i == j) return d2(f, x, i, h);
    const double hj = scaled_step(h, x[j]);
    cvec y = x;
    auto inner = [&](double tj) {
        y[j] = x[j] + tj;
        cplx v = d1(f, y, i, h);
        y[j] = x[j];
        return v;
    };
    return d1_dir(inner, hj);
}

// Directional derivative of a vector field: D F(x) . dir  (componentwise).
template <typename VF>
cvec jacobian_apply(VF&& field, const cvec& x, const cvec& dir, double h) {
    double scale = max_abs(dir);
    if (scale == 0.0) return cvec(x.size(), cplx(0.0));
    const double t = h * std::max(1.0, max_abs(x)) / scale;
    auto at = [&](double s) {
        cvec y = x;
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += s * dir[k];
        return field(y);
    };
    cvec fp2 = at(2.0 * t), fp1 = at(t), fm1 = at(-t), fm2 = at(-2.0 * t);
    cvec out(x.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (-fp2[k] + 8.0 * fp1[k] - 8.0 * fm1[k] + fm2[k]) / (12.0 * t);
    return out;
}

// Lie bracket of two vector fields: [F, G](x) = DG(x).F(x) - DF(x).G(x).
template <typename VF1, typename VF2>
cvec lie_bracket(VF1&& f, VF2&& g, const cvec& x, double h) {
    cvec fx = f(x), gx = g(x);
    cvec dgf = jacobian_apply(g, x, fx, h);
    cvec dfg = jacobian_apply(f, x, gx, h);
    for (std::size_t k = 0; k < dgf.size(); ++k) dgf[k] -= dfg[k];
    return dgf;
}

} // namespace joycekit::fd
