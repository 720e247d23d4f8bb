#pragma once
// Periods, quasi-periods, central charges, and Abelian integrals of the
// plane cubic y^2 = x^3 + a x + b.
//
// Cycle convention (recorded in PeriodData::cycle_basis_id): roots are sorted
// lexicographically by (Re, Im) as (e1, e2, e3); gamma_1 encircles (e1, e2)
// and gamma_2 encircles (e2, e3).  Each cycle integral is realized as twice
// the branch-cut segment integral with the cosine substitution
// x(t) = m + h cos t and y(t) = i h sin t w(t), where w is the continuous
// square root of x(t) - e_other pinned to the principal value at t = 0.
// The orientation of gamma_2 is flipped a posteriori when needed so that
// omega_2 eta_1 - omega_1 eta_2 = +2 pi i.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "joycekit/cubic.hpp"
#include "joycekit/quad.hpp"
#include "joycekit/types.hpp"

namespace joycekit::elliptic {

struct Curve {
    cplx a{};
    cplx b{};

    cplx discriminant() const { return 4.0 * a * a * a + 27.0 * b * b; }

    void validate(double tol = 1e-12) const {
        double scale = std::max({1.0, std::pow(std::abs(a), 3.0),
                                 std::abs(b) * std::abs(b)});
        if (std::abs(discriminant()) <= tol * scale)
            throw DegenerateCurve("4a^3 + 27b^2 vanishes (repeated root)");
    }

    cplx rhs(cplx x) const { return x * x * x + a * x + b; }
    cplx rhs_prime(cplx x) const { return 3.0 * x * x + a; }
};

struct PeriodData {
    cplx omega1{}, omega2{}; // periods:       contour integrals of dx / 2y
    cplx eta1{}, eta2{};     // quasi-periods: contour integrals of -x dx / 2y
    cplx z1{}, z2{};         // central charges: contour integrals of y dx
    std::string cycle_basis_id;
    double legendre_residual = 0.0;
};

struct ThetaPair {
    cplx theta_a{}, theta_b{};
    cplx theta1{}, theta2{}; // lattice-chart values, defined mod 2 pi i
};

namespace detail {

struct CycleIntegrals {
    cplx omega, eta, z;
};

// Cycle around the pair (alpha, beta) with gamma the remaining root.
inline CycleIntegrals cycle_integrals(cplx alpha, cplx beta, cplx gamma,
                                      quad::Options opt) {
    const cplx m = 0.5 * (alpha + beta);
    const cplx h = 0.5 * (beta - alpha);
    auto x_of = [&](double t) { return m + h * std::cos(t); };
    auto f = [&](double t) { return x_of(t) - gamma; };
    // Start branch: principal square root, but pinned to Im > 0 when the
    // value lies on the imaginary axis (f(0) on the negative real axis, where
    // the principal branch is unstable against sign-of-zero jitter).  Keeps
    // the cycle orientation continuous under small motions of (a, b).
    cplx w0 = std::sqrt(f(0.0));
    if (std::abs(w0.real()) <= 1e-8 * std::abs(w0) && w0.imag() < 0.0) w0 = -w0;
    quad::ContinuedSqrt w(f, 0.0, kPi, w0);
    auto w_of = [&](double t) { return w.continue_from_checkpoint(f(t), t); };

    const cplx i_unit(0.0, 1.0);
    CycleIntegrals out;
    try {
        out.omega = quad::adaptive(
                        [&](double t) { return i_unit / w_of(t); }, 0.0, kPi, opt)
                        .value;
        out.eta = -quad::adaptive(
                       [&](double t) { return i_unit * x_of(t) / w_of(t); }, 0.0,
                       kPi, opt)
                       .value;
        out.z = -2.0 * i_unit * h * h *
                quad::adaptive(
                    [&](double t) {
                        double s = std::sin(t);
                        return s * s * w_of(t);
                    },
                    0.0, kPi, opt)
                    .value;
    } catch (const QuadratureFailure&) {
        throw;
    } catch (const Error& e) {
        throw QuadratureFailure(std::string("cycle integral failed: ") + e.what());
    }
    return out;
}

} // namespace detail

inline std::array<cplx, 3> curve_roots(const Curve& c) {
    return cubic::roots(c.a, c.b);
}

inline PeriodData complete_periods(const Curve& c, quad::Options opt = {}) {
    c.validate();
    auto e = curve_roots(c);
    detail::CycleIntegrals c1 = detail::cycle_integrals(e[0], e[1], e[2], opt);
    detail::CycleIntegrals c2 = detail::cycle_integrals(e[1], e[2], e[0], opt);

    PeriodData pd;
    pd.omega1 = c1.omega;
    pd.eta1 = c1.eta;
    pd.z1 = c1.z;
    pd.omega2 = c2.omega;
    pd.eta2 = c2.eta;
    pd.z2 = c2.z;

    cplx legendre = pd.omega2 * pd.eta1 - pd.omega1 * pd.eta2;
    bool flip = std::abs(legendre - kTwoPiI) > std::abs(legendre + kTwoPiI);
    if (flip) {
        pd.omega2 = -pd.omega2;
        pd.eta2 = -pd.eta2;
        pd.z2 = -pd.z2;
        legendre = -legendre;
    }
    pd.legendre_residual = std::abs(legendre - kTwoPiI);
    pd.cycle_basis_id = std::string("lex-roots;g1=(e1,e2);g2=(e2,e3);") +
                        (flip ? "g2-flipped" : "g2-direct");

    if (std::abs(pd.omega1) > 0.0) {
        cplx tau = pd.omega2 / pd.omega1;
        if (std::abs(tau.imag()) < 1e-10)
            throw DegenerateCurve("periods numerically dependent");
    }
    return pd;
}

// Max of |dz_i/da + eta_i| and |dz_i/db - omega_i| with central finite
// differences of the central charges over the base.
inline double period_jacobian_residual(const Curve& c, double step = 1e-5,
                                       quad::Options opt = {}) {
    PeriodData mid = complete_periods(c, opt);
    PeriodData ap = complete_periods({c.a + step, c.b}, opt);
    PeriodData am = complete_periods({c.a - step, c.b}, opt);
    PeriodData bp = complete_periods({c.a, c.b + step}, opt);
    PeriodData bm = complete_periods({c.a, c.b - step}, opt);
    cplx dz1_da = (ap.z1 - am.z1) / (2.0 * step);
    cplx dz2_da = (ap.z2 - am.z2) / (2.0 * step);
    cplx dz1_db = (bp.z1 - bm.z1) / (2.0 * step);
    cplx dz2_db = (bp.z2 - bm.z2) / (2.0 * step);
    double r = std::abs(dz1_da + mid.eta1);
    r = std::max(r, std::abs(dz2_da + mid.eta2));
    r = std::max(r, std::abs(dz1_db - mid.omega1));
    r = std::max(r, std::abs(dz2_db - mid.omega2));
    return r;
}

namespace detail {

inline void require_on_curve(const Curve& c, cplx q, cplx p) {
    double scale = std::max({1.0, std::abs(p) * std::abs(p),
                             std::pow(std::abs(q), 3.0),
                             std::abs(c.a * q), std::abs(c.b)});
    if (std::abs(p * p - c.rhs(q)) > 1e-10 * scale)
        throw OffCurve("p^2 != q^3 + a q + b");
}

struct FibrePath {
    // x(u) = e_k + (q - e_k) u^2, u in [-1, 1]; y(u) = u g(u) with g the
    // continuous square root of the even quartic
    //   G(u) = P'(e_k) c + 3 e_k c^2 u^2 + c^3 u^4,   c = q - e_k,
    // pinned to g(-1) = p (so the path runs from (q, -p) to (q, p)).
    cplx e_k, c;
    Curve curve;

    cplx G(double u) const {
        double u2 = u * u;
        return curve.rhs_prime(e_k) * c + 3.0 * e_k * c * c * u2 +
               c * c * c * u2 * u2;
    }
};

} // namespace detail

// Abelian integrals of the three basic differentials from (q, -p) to (q, p)
// along the documented path through the branch point nearest to q.
struct FibreIntegrals {
    cplx int_dx_over_y{};  // integral of dx / y
    cplx int_xdx_over_y{}; // integral of x dx / y
    cplx int_y_dx{};       // integral of y dx
};

inline FibreIntegrals fibre_integrals(const Curve& c, cplx q, cplx p,
                                      quad::Options opt = {}) {
    c.validate();
    detail::require_on_curve(c, q, p);
    auto roots = curve_roots(c);
    // nearest branch point to q (ties broken by root order)
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(q - roots[i]) < std::abs(q - roots[k])) k = i;
    detail::FibrePath path{roots[k], q - roots[k], c};
    if (std::abs(path.c) < 1e-12)
        throw PathThroughBranchPoint("(q, p) is a branch point of the curve");

    auto G = [&](double u) { return path.G(u); };
    quad::ContinuedSqrt g([&](double u) { return G(u); }, -1.0, 1.0, p, 1024,
                          1e-9);
    auto g_of = [&](double u) { return g.continue_from_checkpoint(G(u), u); };
    auto x_of = [&](double u) { return path.e_k + path.c * u * u; };

    FibreIntegrals out;
    try {
        out.int_dx_over_y =
            quad::adaptive([&](double u) { return 2.0 * path.c / g_of(u); }, -1.0,
                           1.0, opt)
                .value;
        out.int_xdx_over_y =
            quad::adaptive(
                [&](double u) { return 2.0 * path.c * x_of(u) / g_of(u); }, -1.0,
                1.0, opt)
                .value;
        out.int_y_dx = quad::adaptive(
                           [&](double u) { return 2.0 * path.c * u * u * g_of(u); },
                           -1.0, 1.0, opt)
                           .value;
    } catch (const QuadratureFailure&) {
        throw;
    } catch (const Error& e) {
        throw PathThroughBranchPoint(std::string("fibre path invalid: ") + e.what());
    }
    return out;
}

inline cplx mod_two_pi_i(cplx v) {
    double m = std::round((v / kTwoPiI).real());
    return v - kTwoPiI * m;
}

inline ThetaPair abel_theta(const Curve& c, cplx q, cplx p, cplx r,
                            const PeriodData& pd, quad::Options opt = {}) {
    FibreIntegrals fi = fibre_integrals(c, q, p, opt);
    ThetaPair tp;
    tp.theta_a = -0.25 * fi.int_dx_over_y;
    tp.theta_b = 0.25 * fi.int_xdx_over_y - r;
    tp.theta1 = mod_two_pi_i(-pd.eta1 * tp.theta_a + pd.omega1 * tp.theta_b);
    tp.theta2 = mod_two_pi_i(-pd.eta2 * tp.theta_a + pd.omega2 * tp.theta_b);
    return tp;
}

inline ThetaPair abel_theta(const Curve& c, cplx q, cplx p, cplx r,
                            quad::Options opt = {}) {
    return abel_theta(c, q, p, r, complete_periods(c, opt), opt);
}

// U = (1/2) * integral of y dx from (q, -p) to (q, p).
inline cplx u_integral(const Curve& c, cplx q, cplx p, quad::Options opt = {}) {
    c.validate();
    detail::require_on_curve(c, q, p);
    // empty path: (q, p) sits at a simple branch point
    auto roots = curve_roots(c);
    for (const cplx& e : roots)
        if (std::abs(q - e) < 1e-12 && std::abs(p) < 1e-6) return 0.0;
    return 0.5 * fibre_integrals(c, q, p, opt).int_y_dx;
}

// Principal on-curve p for a given q; sign closest to `near` when provided.
inline cplx y_on_curve(const Curve& c, cplx q, cplx near_p = cplx(0.0)) {
    cplx p = std::sqrt(c.rhs(q));
    if (near_p != cplx(0.0) && std::abs(p - near_p) > std::abs(p + near_p))
        p = -p;
    return p;
}

} // namespace joycekit::elliptic
