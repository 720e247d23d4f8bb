#pragma once
// The elliptic-base structure in its natural chart: states (a, b, q, r) over
// the curve family y^2 = x^3 + a x + b, with the dependent fibre variable
// p = y(q) carried redundantly.  Frames are the two displayed pencil flows;
// everything else (forms, invariants, Euler scaling, zero-section limits) is
// built from them.
//
// Packed state layout: x = [a, b, q, r, p] (5 complex slots; p on-curve).

#include <cmath>
#include <utility>
#include <vector>

#include "joycekit/elliptic.hpp"
#include "joycekit/fd.hpp"
#include "joycekit/geometry.hpp"
#include "joycekit/weierstrass.hpp"
#include "joycekit/wmodels.hpp"

namespace joycekit::models {

struct A2State {
    cplx a{}, b{}, q{}, r{}, p{};

    cvec pack() const { return {a, b, q, r, p}; }
    static A2State unpack(const cvec& x) { return {x[0], x[1], x[2], x[3], x[4]}; }

    elliptic::Curve curve() const { return {a, b}; }

    void validate() const {
        if (p == cplx(0.0)) throw PoleAtPZero("state has p = 0");
        elliptic::detail::require_on_curve(curve(), q, p);
    }
};

// Base-chart symplectic data: omega(da, db) = 1, eta(da, db) = -1.
class A2ChartModel : public tensorcore::FrameProvider {
public:
    A2ChartModel() : sym_(standard_sym(2)) {}

    std::size_t n() const override { return 2; }
    std::size_t dim() const override { return 5; }
    const tensorcore::SymplecticData& sym() const override { return sym_; }
    bool has_period_structure() const override { return true; }

    // In the integral-linear chart of central charges the pairing is
    // eta(dz1, dz2) = 2 pi i.
    cmat lattice_eta() const override {
        cmat e = zeros(2, 2);
        e[0][1] = kTwoPiI;
        e[1][0] = -kTwoPiI;
        return e;
    }

    bool is_pole(const cvec& x) const override { return x[4] == cplx(0.0); }
    double pole_distance(const cvec& x) const override { return std::abs(x[4]); }

    // Tangent vector with the p-component induced by the on-curve constraint:
    // dp = ((3q^2 + a) dq + q da + db) / (2p).
    static cvec close_p(const cvec& x, cplx da, cplx db, cplx dq, cplx dr) {
        const cplx a = x[0], q = x[2], p = x[4];
        cplx dp = ((3.0 * q * q + a) * dq + q * da + db) / (2.0 * p);
        return {da, db, dq, dr, dp};
    }

    cvec v_frame(const cvec& x, std::size_t i) const override {
        require_flow_ok(x);
        const cplx q = x[2], p = x[4];
        if (i == 0) return close_p(x, 0.0, 0.0, -2.0 * p, -q);
        return close_p(x, 0.0, 0.0, 0.0, -1.0);
    }

    cvec h_frame(const cvec& x, std::size_t i) const override {
        require_flow_ok(x);
        const cplx a = x[0], q = x[2], r = x[3], p = x[4];
        if (i == 0) {
            cplx dq = -r / p;
            cplx dr = -(r * r * (3.0 * q * q + a) - q * p * r) / (2.0 * p * p * p);
            return close_p(x, 1.0, 0.0, dq, dr);
        }
        return close_p(x, 0.0, 1.0, 0.0, r / (2.0 * p * p));
    }

    // Re-project the carried p onto the nearest on-curve root.
    static cvec project(cvec x) {
        cplx rhs = x[2] * x[2] * x[2] + x[0] * x[2] + x[1];
        cplx root = std::sqrt(rhs);
        x[4] = (std::abs(root - x[4]) <= std::abs(root + x[4])) ? root : -root;
        return x;
    }

    static void require_flow_ok(const cvec& x) {
        if (x[4] == cplx(0.0)) throw PoleAtPZero("flow evaluated at p = 0");
        elliptic::Curve c{x[0], x[1]};
        double scale = std::max({1.0, std::pow(std::abs(c.a), 3.0),
                                 std::abs(c.b) * std::abs(c.b)});
        if (std::abs(c.discriminant()) <= 1e-12 * scale)
            throw DegenerateBase("discriminant vanishes along the flow");
    }

private:
    tensorcore::SymplecticData sym_;
};

// The two displayed pencil flows h_eps(d/da), h_eps(d/db) as packed vectors.
inline std::pair<cvec, cvec> a2_flows(const A2State& s, cplx eps) {
    A2ChartModel m;
    cvec x = s.pack();
    A2ChartModel::require_flow_ok(x);
    return {m.pencil_frame(x, 0, eps), m.pencil_frame(x, 1, eps)};
}

// Fibre invariants of the eps = infinity foliation.
inline std::pair<cplx, cplx> a2_phi(const A2State& s) {
    if (s.p == cplx(0.0)) throw PoleAtPZero("phi undefined at p = 0");
    return {s.q + s.a * s.r / s.p, s.r / (2.0 * s.p)};
}

inline cplx a2_joyce_F(const A2State& s) {
    auto [phi1, phi2] = a2_phi(s);
    return (1.0 - 2.0 * phi1 * phi2) / 5.0;
}

// Printed rational generating function for this chart (evaluated verbatim;
// it scales with total weight -1 but its fibre Hessian does not reproduce the
// displayed flows, so all geometry here derives from the flows instead).
inline cplx a2_plebanski_W(const A2State& s) {
    if (s.p == cplx(0.0)) throw PoleAtPZero("W evaluation at p = 0");
    cplx disc = s.curve().discriminant();
    double scale = std::max({1.0, std::pow(std::abs(s.a), 3.0),
                             std::abs(s.b) * std::abs(s.b)});
    if (std::abs(disc) <= 1e-12 * scale)
        throw DegenerateBase("discriminant vanishes in W denominator");
    const cplx a = s.a, b = s.b, q = s.q, r = s.r, p = s.p;
    cplx num = 2.0 * a * p * r * r * r -
               (6.0 * a * q * q - 9.0 * b * q + 4.0 * a * a) * r * r -
               3.0 * p * (3.0 * b - 2.0 * a * q) * r - 2.0 * a * p * p;
    return num / (4.0 * disc * p);
}

// Scaling action generated by the Euler field: per unit log-lambda the
// coordinates scale with weights (a, b, q, r, p) -> (4/5, 6/5, 2/5, 1/5, 3/5).
inline A2State a2_scale(const A2State& s, cplx lambda) {
    auto w = [&](double k) { return std::exp(std::log(lambda) * (k / 5.0)); };
    return {s.a * w(4), s.b * w(6), s.q * w(2), s.r * w(1), s.p * w(3)};
}

// Relative error of the printed W against exact weight -1 scaling.
inline double a2_weight_residual(const A2State& s, cplx lambda) {
    cplx w0 = a2_plebanski_W(s);
    cplx w1 = a2_plebanski_W(a2_scale(s, lambda));
    return std::abs(w1 - w0 / lambda) / std::max(1e-300, std::abs(w0 / lambda));
}

// Euler field in the packed chart (close_p gives the p-weight 3/5).
inline cvec a2_euler_field(const A2State& s) {
    return A2ChartModel::close_p(s.pack(), 4.0 * s.a / 5.0, 6.0 * s.b / 5.0,
                                 2.0 * s.q / 5.0, s.r / 5.0);
}

// Fibre Hessian field read off the displayed flows: decomposing the vertical
// part of h(d/dz_i) in the frame d/dtheta_q gives the symmetric matrix
// B_ij that plays the role of the theta-Hessian of a generating function.
inline cmat a2_theta_hessian(const A2State& s) {
    if (s.p == cplx(0.0)) throw PoleAtPZero("Hessian field at p = 0");
    const cplx a = s.a, q = s.q, r = s.r, p = s.p;
    cmat B = zeros(2, 2);
    B[0][0] = q * r / (p * p) - r * r * (3.0 * q * q + a) / (2.0 * p * p * p);
    B[0][1] = r / (2.0 * p * p);
    B[1][0] = B[0][1];
    B[1][1] = 0.0;
    return B;
}

// ------------------------------------------------------- verbatim chart forms
// Two-forms in the 4-dim (a, b, q, r) chart built from the displayed
// expressions: Omega_+ = da ^ db, 2i Omega_I = dq ^ dp + da ^ dr (with dp
// expanded through the constraint), Omega_- = dphi_1 ^ dphi_2.
// Coordinate order [a, b, q, r].
inline tensorcore::ThreeForms a2_two_forms_chart(const A2State& s) {
    if (s.p == cplx(0.0)) throw PoleAtPZero("forms at p = 0");
    const cplx a = s.a, q = s.q, r = s.r, p = s.p;
    tensorcore::ThreeForms tf;
    tf.plus = zeros(4, 4);
    tf.plus[0][1] = 1.0;
    tf.plus[1][0] = -1.0;

    // dq ^ dp = dq ^ (q da + db) / (2p); da ^ dr.
    cmat twoI = zeros(4, 4); // coefficients of 2i * Omega_I
    auto add = [](cmat& f, std::size_t i, std::size_t j, cplx v) {
        f[i][j] += v;
        f[j][i] -= v;
    };
    add(twoI, 2, 0, q / (2.0 * p)); // dq ^ da
    add(twoI, 2, 1, 1.0 / (2.0 * p)); // dq ^ db
    add(twoI, 0, 3, 1.0);             // da ^ dr
    tf.i_form = zeros(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            tf.i_form[i][j] = twoI[i][j] / (2.0 * cplx(0.0, 1.0));

    // dphi_1 ^ dphi_2 from the analytic chart gradients (p = p(a, b, q)
    // on-curve): dp/da = q/2p, dp/db = 1/2p, dp/dq = (3q^2+a)/2p.
    const cplx p3 = p * p * p;
    // gradients ordered [a, b, q, r]
    cvec g1 = {r / p - a * r * q / (2.0 * p3), -a * r / (2.0 * p3),
               1.0 - a * r * (3.0 * q * q + a) / (2.0 * p3), a / p};
    cvec g2 = {-r * q / (4.0 * p3), -r / (4.0 * p3),
               -r * (3.0 * q * q + a) / (4.0 * p3), 1.0 / (2.0 * p)};
    tf.minus = zeros(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            tf.minus[i][j] = g1[i] * g2[j] - g1[j] * g2[i];
    return tf;
}

// ------------------------------------------------- uniformized fibre chart
// (u, beta) with q = P(u), p = P'(u)/2, r = -zeta(u) - beta; the fibre
// coordinates are theta_a = -u, theta_b = beta + const, so
// d/dtheta_a = -d/du (beta fixed) and d/dtheta_b = d/dbeta.
inline A2State a2_state_from_uniformization(const elliptic::Curve& c, cplx u,
                                            cplx beta) {
    elliptic::WeierstrassP wp(c.a, c.b);
    auto v = wp.eval(u);
    return {c.a, c.b, v.p, -v.zeta - beta, v.dp / 2.0};
}

// Zero-section limit data evaluated at fibre parameter (u, beta = 0):
// the theta-Hessian of the Joyce function and the third-derivative tensor
// T[i][j][l] = d B_ij / d theta_l of the Hessian field.
struct A2ZeroSectionSample {
    cmat f_hessian;           // 2x2, indices (theta_a, theta_b)
    std::vector<cmat> third;  // third[l][i][j] = T_ijl
    cmat connection_a;        // conn(i, j, m = a) = -sum_l eta_lm T_ijl
    cmat connection_b;        // conn(i, j, m = b)
};

inline A2ZeroSectionSample a2_zero_section_sample(const elliptic::Curve& c,
                                                  cplx u) {
    elliptic::WeierstrassP wp(c.a, c.b);
    auto state_at = [&](cplx uu, cplx beta) {
        auto v = wp.eval(uu);
        return A2State{c.a, c.b, v.p, -v.zeta - beta, v.dp / 2.0};
    };

    // d/dbeta derivatives are analytic (beta enters through r only, dr = -1).
    auto dF_dbeta = [&](const A2State& s) {
        auto [phi1, phi2] = a2_phi(s);
        return (phi1 + 2.0 * s.a * phi2) / (5.0 * s.p);
    };
    auto dB_dbeta = [&](const A2State& s) {
        // -dB/dr
        const cplx a = s.a, q = s.q, r = s.r, p = s.p;
        cmat d = zeros(2, 2);
        d[0][0] = -(q / (p * p) - r * (3.0 * q * q + a) / (p * p * p));
        d[0][1] = -1.0 / (2.0 * p * p);
        d[1][0] = d[0][1];
        return d;
    };

    const double h = std::abs(u) / 50.0;
    auto fd4 = [&](auto&& g) { // fourth-order d/du at (u, 0) of a scalar
        return (8.0 * (g(u + h) - g(u - h)) - (g(u + 2.0 * h) - g(u - 2.0 * h))) /
               (12.0 * h);
    };

    A2ZeroSectionSample out;
    out.f_hessian = zeros(2, 2);
    // theta_b theta_b: analytic  d/dbeta (dF/dbeta) = -2a / (5 p^2)
    {
        A2State s0 = state_at(u, 0.0);
        out.f_hessian[1][1] = -2.0 * s0.a / (5.0 * s0.p * s0.p);
    }
    // theta_a theta_b = -d/du (dF/dbeta)
    out.f_hessian[0][1] =
        -fd4([&](cplx uu) { return dF_dbeta(state_at(uu, 0.0)); });
    out.f_hessian[1][0] = out.f_hessian[0][1];
    // theta_a theta_a = +d^2F/du^2 (fourth-order second difference)
    {
        auto F = [&](cplx uu) { return a2_joyce_F(state_at(uu, 0.0)); };
        out.f_hessian[0][0] =
            (-30.0 * F(u) + 16.0 * (F(u + h) + F(u - h)) -
             (F(u + 2.0 * h) + F(u - 2.0 * h))) /
            (12.0 * h * h);
    }

    // T[i][j][l]: l = a via -d/du of B_ij, l = b analytic.
    out.third.assign(2, zeros(2, 2));
    {
        cmat dB_b = dB_dbeta(state_at(u, 0.0));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                out.third[0][i][j] = -fd4([&, i, j](cplx uu) {
                    return a2_theta_hessian(state_at(uu, 0.0))[i][j];
                });
                out.third[1][i][j] = dB_b[i][j];
            }
    }

    // conn(i, j, m) = -sum_l eta_lm T_ijl with chart eta_ab = -1:
    // conn(.,., a) = -T(.,., b), conn(.,., b) = +T(.,., a).
    out.connection_a = zeros(2, 2);
    out.connection_b = zeros(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            out.connection_a[i][j] = -out.third[1][i][j];
            out.connection_b[i][j] = out.third[0][i][j];
        }
    return out;
}

// Richardson limit of the zero-section data for u -> 0 (error series in u^2):
// three samples at u, u/2, u/4 eliminate the u^2 and u^4 terms.
struct A2LinearJoyceLimit {
    cmat metric;        // 2x2 in the (a, b) chart
    cmat connection_a;  // limit of conn(., ., a)
    cmat connection_b;
};

inline A2LinearJoyceLimit a2_linear_joyce_limit(const elliptic::Curve& c,
                                                cplx u0) {
    A2ZeroSectionSample s1 = a2_zero_section_sample(c, u0);
    A2ZeroSectionSample s2 = a2_zero_section_sample(c, u0 / 2.0);
    A2ZeroSectionSample s3 = a2_zero_section_sample(c, u0 / 4.0);
    auto rich = [](cplx v1, cplx v2, cplx v3) {
        cplx r12 = (4.0 * v2 - v1) / 3.0;
        cplx r23 = (4.0 * v3 - v2) / 3.0;
        return (16.0 * r23 - r12) / 15.0;
    };
    auto rich_mat = [&](const cmat& m1, const cmat& m2, const cmat& m3) {
        cmat out = zeros(m1.size(), m1[0].size());
        for (std::size_t i = 0; i < m1.size(); ++i)
            for (std::size_t j = 0; j < m1[0].size(); ++j)
                out[i][j] = rich(m1[i][j], m2[i][j], m3[i][j]);
        return out;
    };
    A2LinearJoyceLimit lim;
    lim.metric = rich_mat(s1.f_hessian, s2.f_hessian, s3.f_hessian);
    lim.connection_a = rich_mat(s1.connection_a, s2.connection_a, s3.connection_a);
    lim.connection_b = rich_mat(s1.connection_b, s2.connection_b, s3.connection_b);
    return lim;
}

// dF + i_E(Omega_-) residual in the 4-dim chart: finite-difference dF against
// the contraction of the verbatim Omega_- with the Euler field.
inline double a2_df_residual(const A2State& s, double step = 1e-5) {
    cvec e5 = a2_euler_field(s);
    cvec e4 = {e5[0], e5[1], e5[2], e5[3]};
    cmat minus = a2_two_forms_chart(s).minus;

    // F as a function of the chart coordinates with p tracked on-curve.
    auto F_chart = [&](const cvec& y) {
        A2State t{y[0], y[1], y[2], y[3],
                  elliptic::y_on_curve({y[0], y[1]}, y[2], s.p)};
        return a2_joyce_F(t);
    };
    cvec x4 = {s.a, s.b, s.q, s.r};
    double worst = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        cplx dF = fd::d1(F_chart, x4, k, step);
        cplx contraction = 0.0;
        for (std::size_t t = 0; t < 4; ++t) contraction += e4[t] * minus[t][k];
        worst = std::max(worst, std::abs(dF + contraction));
    }
    return worst;
}

} // namespace joycekit::models
