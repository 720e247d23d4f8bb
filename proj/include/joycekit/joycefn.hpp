#pragma once
// The distinguished scalar built from a generating function in an
// integral-linear chart: F = sum_q z_q dW/dtheta_q, its value-level identity
// dF = -i_E(Omega_-), and the linearized data on the zero section (flat
// connection coefficients and the metric induced by the theta-Hessian of F).

#include <vector>

#include "joycekit/fd.hpp"
#include "joycekit/geometry.hpp"

namespace joycekit::models {

// F(z, theta) = sum_q z_q dW/dtheta_q.  Vanishes on the zero section.
inline cplx joyce_function(const tensorcore::WModel& model,
                           const tensorcore::TangentPoint& pt) {
    if (!model.has_period_structure())
        throw NoPeriodStructure("scalar invariant needs an integral-linear chart");
    if (!model.normalized())
        throw UnsupportedModel(
            "generating function is not normalized on the zero section");
    model.require_regular(tensorcore::pack(pt));
    cplx f = 0.0;
    for (std::size_t q = 0; q < model.n(); ++q)
        f += pt.z[q] * model.dW_theta(pt.z, pt.theta, q);
    return f;
}

// Linearized zero-section data in the base chart.
struct JoyceLinearData {
    // connection_coeffs[m][i][j] = coefficient (i, j, m)
    //   = -sum_l eta_lm d^3 W / dtheta_i dtheta_j dtheta_l at theta = 0.
    std::vector<cmat> connection_coeffs;
    // metric[i][j] = d^2 F / dtheta_i dtheta_j at theta = 0
    //             = sum_q z_q d^3 W / dtheta_q dtheta_i dtheta_j.
    cmat metric;
};

inline JoyceLinearData linear_joyce_data(const tensorcore::WModel& model,
                                         const cvec& base_z) {
    if (!model.has_period_structure())
        throw NoPeriodStructure("linearized data needs an integral-linear chart");
    if (!model.normalized())
        throw UnsupportedModel(
            "generating function is not normalized on the zero section");
    const std::size_t m = model.n();
    const cvec theta0(m, cplx(0.0));
    if (model.is_pole(tensorcore::pack({base_z, theta0})))
        throw PoleOnZeroSection("theta = 0 is a pole of this chart");

    std::vector<std::vector<cvec>> d3(m, std::vector<cvec>(m, cvec(m)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t l = 0; l < m; ++l)
                d3[i][j][l] = model.d3W_theta(base_z, theta0, i, j, l);

    JoyceLinearData out;
    out.connection_coeffs.assign(m, zeros(m, m));
    const auto& eta = model.sym().eta;
    for (std::size_t mm = 0; mm < m; ++mm)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                cplx acc = 0.0;
                for (std::size_t l = 0; l < m; ++l)
                    acc += eta[l][mm] * d3[i][j][l];
                out.connection_coeffs[mm][i][j] = -acc;
            }
    out.metric = zeros(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            cplx acc = 0.0;
            for (std::size_t q = 0; q < m; ++q) acc += base_z[q] * d3[q][i][j];
            out.metric[i][j] = acc;
        }
    return out;
}

// Residual of dF + i_E(Omega_-) = 0 over the packed chart, with dF by
// finite differences of F and E the homogeneity lift (z, 0).
inline double joyce_df_residual(const tensorcore::WModel& model,
                                const tensorcore::TangentPoint& pt,
                                double step = 1e-5) {
    const std::size_t m = model.n();
    cvec x = tensorcore::pack(pt);
    cmat minus = tensorcore::two_forms(model, pt).minus;
    cvec E = tensorcore::euler_fields(model, pt).E;

    auto F = [&](const cvec& y) {
        auto q = tensorcore::unpack(y, m);
        cplx f = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            f += q.z[k] * model.dW_theta(q.z, q.theta, k);
        return f;
    };
    double worst = 0.0;
    for (std::size_t s = 0; s < 2 * m; ++s) {
        cplx res = fd::d1(F, x, s, step);
        for (std::size_t t = 0; t < 2 * m; ++t) res += E[t] * minus[t][s];
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace joycekit::models
