// Complete elliptic integrals over cubic curves: periods, quasi-periods,
// central charges, the Legendre relation, Abel-type fibre coordinates, and
// the period Jacobian identities.
#include <doctest.h>

#include <cmath>

#include "joycekit/elliptic.hpp"
#include "joycekit/halton.hpp"

using namespace joycekit;
using elliptic::Curve;

namespace {

void check_cplx(cplx got, cplx want, double tol = 1e-12) {
    CHECK(std::abs(got - want) < tol);
}

} // namespace

TEST_SUITE("elliptic") {

TEST_CASE("periods of the square curve y^2 = x^3 - x") {
    auto pd = elliptic::complete_periods(Curve{cplx(-1.0), cplx(0.0)});
    const double w = 2.62205755429211981;
    const double e = 1.19814023473559221;
    const double z = 0.958512187788473766;
    check_cplx(pd.omega1, cplx(w, 0.0));
    check_cplx(pd.omega2, cplx(0.0, w));
    check_cplx(pd.eta1, cplx(e, 0.0));
    check_cplx(pd.eta2, cplx(0.0, -e));
    check_cplx(pd.z1, cplx(z, 0.0));
    check_cplx(pd.z2, cplx(0.0, -z));
    CHECK(pd.cycle_basis_id == "lex-roots;g1=(e1,e2);g2=(e2,e3);g2-direct");
    CHECK(pd.legendre_residual < 1e-12);
}

TEST_CASE("periods of the hexagonal curve y^2 = x^3 + 1") {
    auto pd = elliptic::complete_periods(Curve{cplx(0.0), cplx(1.0)});
    check_cplx(pd.omega1, cplx(-2.10327315798818139, 1.21432532394379081));
    check_cplx(pd.omega2, cplx(0.0, -2.42865064788758161));
    check_cplx(pd.eta1, cplx(-1.29355477961489527, -0.74683420022218681));
    check_cplx(pd.eta2, cplx(0.0, 1.49366840044437363));
    check_cplx(pd.z1, cplx(-2.52392778958581767, 1.45719038873254897));
    check_cplx(pd.z2, cplx(0.0, -2.91438077746509793));
    CHECK(pd.legendre_residual < 1e-12);
}

TEST_CASE("periods of a generic real curve") {
    auto pd = elliptic::complete_periods(Curve{cplx(-1.0), cplx(0.25)});
    check_cplx(pd.omega1, cplx(2.99345864623195963, 0.0));
    check_cplx(pd.omega2, cplx(0.0, 2.45138938198679006));
    check_cplx(pd.eta1, cplx(0.942638555913622952, 0.0));
    check_cplx(pd.eta2, cplx(0.0, -1.32703057887967648));
    check_cplx(pd.z1, cplx(1.65214843860048625, 0.0));
    check_cplx(pd.z2, cplx(0.0, -0.326207648507704162));
    // the Legendre combination reproduces 2 pi i directly
    check_cplx(pd.omega2 * pd.eta1 - pd.omega1 * pd.eta2, kTwoPiI);
}

TEST_CASE("legendre relation across a sampled family of curves") {
    halton::Sampler smp(1);
    for (int k = 0; k < 25; ++k) {
        cvec ab = smp.next_box_where(2, 3.0, [](const cvec& v) {
            return std::abs(4.0 * v[0] * v[0] * v[0] + 27.0 * v[1] * v[1]) >
                   0.3;
        });
        auto pd = elliptic::complete_periods(Curve{ab[0], ab[1]});
        CHECK(pd.legendre_residual < 1e-9);
    }
}

TEST_CASE("period jacobian: charge derivatives against (quasi-)periods") {
    halton::Sampler smp(7);
    for (int k = 0; k < 5; ++k) {
        cvec ab = smp.next_box_where(2, 2.0, [](const cvec& v) {
            return std::abs(4.0 * v[0] * v[0] * v[0] + 27.0 * v[1] * v[1]) >
                   0.5;
        });
        CHECK(elliptic::period_jacobian_residual(Curve{ab[0], ab[1]}) < 1e-6);
    }
}

TEST_CASE("degenerate curves are rejected") {
    CHECK_THROWS_AS(elliptic::complete_periods(Curve{cplx(-3.0), cplx(2.0)}),
                    DegenerateCurve);
    Curve cusp{cplx(0.0), cplx(0.0)};
    CHECK_THROWS_AS(cusp.validate(), DegenerateCurve);
    Curve fine{cplx(-1.0), cplx(0.0)};
    CHECK_NOTHROW(fine.validate());
}

TEST_CASE("fibre coordinates: frozen values and the offset shift") {
    Curve c{cplx(-1.0), cplx(0.0)};
    const cplx q(2.0), p(std::sqrt(6.0));
    auto tp = elliptic::abel_theta(c, q, p, cplx(0.0));
    check_cplx(tp.theta_a, cplx(-0.584082841677151707));
    check_cplx(tp.theta_b, cplx(0.750732211676177698));
    check_cplx(tp.theta1, cplx(2.66827621990804677));
    check_cplx(tp.theta2, cplx(0.0, 1.26864991384385820));
    // the r-offset enters theta_b linearly
    auto ts = elliptic::abel_theta(c, q, p, cplx(0.5));
    check_cplx(ts.theta_b, cplx(0.250732211676177698));
    check_cplx(ts.theta1, cplx(1.35724744276199), 1e-12);
    check_cplx(ts.theta2, cplx(0.0, -0.042378863302202), 1e-12);
    // fibre action integral between the two sheet points
    check_cplx(elliptic::u_integral(c, q, p), cplx(1.35900602488560032));
}

TEST_CASE("fibre-chart values stay in the fundamental strip") {
    cplx v(0.3, 1.2);
    check_cplx(elliptic::mod_two_pi_i(v + 3.0 * kTwoPiI),
               elliptic::mod_two_pi_i(v), 1e-13);
    cplx m = elliptic::mod_two_pi_i(cplx(0.1, 57.0));
    CHECK(std::abs((m / kTwoPiI).real()) <= 0.5 + 1e-15);
}

TEST_CASE("on-curve helpers") {
    Curve c{cplx(-1.0), cplx(0.0)};
    // principal sheet and nearest-sign selection
    check_cplx(elliptic::y_on_curve(c, cplx(2.0)), cplx(std::sqrt(6.0)), 1e-14);
    check_cplx(elliptic::y_on_curve(c, cplx(2.0), cplx(-2.4)),
               cplx(-std::sqrt(6.0)), 1e-14);
    cplx q(0.7, 0.4);
    cplx p = elliptic::y_on_curve(c, q);
    check_cplx(p * p, c.rhs(q), 1e-14);
    // off-curve points are rejected by the fibre integrals
    CHECK_THROWS_AS(elliptic::u_integral(c, cplx(2.0), cplx(1.0)), OffCurve);
    // a simple branch point carries an empty path
    CHECK(elliptic::u_integral(c, cplx(1.0), cplx(0.0)) == cplx(0.0));
}

} // TEST_SUITE
