// The doubled-chart model over the punctured plane: its cubic potential,
// alternative integral affine chart, mixed-coordinate scalar and prepotential,
// the distinguished scalar invariant, and the linearized zero-section data.
#include <doctest.h>

#include <cmath>

#include "joycekit/fd.hpp"
#include "joycekit/joycefn.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/wmodels.hpp"

using namespace joycekit;
using models::A1Model;
using tensorcore::TangentPoint;

namespace {

const TangentPoint kPt{{cplx(1.1, 0.3), cplx(0.5, -0.2)},
                       {cplx(0.7, 0.1), cplx(0.2, 0.4)}};

const double kFourPiSq = 4.0 * kPi * kPi;

} // namespace

TEST_SUITE("models_a1") {

TEST_CASE("scalar invariant: closed-form value, zero section, flat model") {
    A1Model a1;
    // F = z dW/dtheta at z = (1, 0), theta = (1, 0) is 1 / (8 pi^2)
    TangentPoint unit{{cplx(1.0), cplx(0.0)}, {cplx(1.0), cplx(0.0)}};
    CHECK(std::abs(models::joyce_function(a1, unit) - 1.0 / (2.0 * kFourPiSq)) <
          1e-15);
    // vanishes identically on the zero section
    TangentPoint zs{{cplx(1.3, -0.4), cplx(0.7)}, {cplx(0.0), cplx(0.0)}};
    CHECK(models::joyce_function(a1, zs) == cplx(0.0));
    // the flat model has no potential, hence no invariant
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    CHECK(models::joyce_function(flat, fp) == cplx(0.0));
}

TEST_CASE("linearized zero-section data in the base chart") {
    A1Model a1;
    cvec base = {cplx(1.1, 0.3), cplx(0.5, -0.2)};
    auto ld = models::linear_joyce_data(a1, base);
    // metric = z_0 d^3W = -1/(2 pi i)^2 = 1/(4 pi^2), independent of z
    CHECK(std::abs(ld.metric[0][0] - 1.0 / kFourPiSq) < 1e-15);
    CHECK(std::abs(ld.metric[0][1]) == 0.0);
    CHECK(std::abs(ld.metric[1][0]) == 0.0);
    CHECK(std::abs(ld.metric[1][1]) == 0.0);
    // single nonzero connection coefficient: -1 / (2 pi i z)
    CHECK(std::abs(ld.connection_coeffs[1][0][0] +
                   1.0 / (kTwoPiI * base[0])) < 1e-16);
    CHECK(std::abs(ld.connection_coeffs[0][0][0]) == 0.0);
    CHECK(std::abs(ld.connection_coeffs[0][1][1]) == 0.0);
    CHECK(std::abs(ld.connection_coeffs[1][0][1]) == 0.0);
    CHECK(std::abs(ld.connection_coeffs[1][1][0]) == 0.0);
    // flat model: everything vanishes
    models::FlatModel flat;
    auto lf = models::linear_joyce_data(flat, {cplx(0.3), cplx(0.4)});
    CHECK(max_abs(lf.metric) == 0.0);
    CHECK(max_abs(lf.connection_coeffs[0]) == 0.0);
    CHECK(max_abs(lf.connection_coeffs[1]) == 0.0);
    // the zero section must avoid the pole locus
    CHECK_THROWS_AS(models::linear_joyce_data(a1, {cplx(0.0), cplx(1.0)}),
                    PoleOnZeroSection);
}

TEST_CASE("value-level identity relating dF and the vertical form") {
    A1Model a1;
    CHECK(models::joyce_df_residual(a1, kPt) < 1e-10);
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    CHECK(models::joyce_df_residual(flat, fp) < 1e-12);
    // a z-independent potential breaks the identity at generic points
    models::SyntheticNonHeavenly bad;
    CHECK(models::joyce_df_residual(bad, kPt) > 0.5);
}

TEST_CASE("log branch: normalization point and principal cut") {
    CHECK(std::abs(A1Model::log_branch(kTwoPiI)) < 1e-15);
    cplx rot = kTwoPiI * std::exp(cplx(0.0, 0.3));
    CHECK(std::abs(A1Model::log_branch(rot) - cplx(0.0, 0.3)) < 1e-15);
    CHECK(std::abs(A1Model::log_branch(-kTwoPiI) - cplx(0.0, kPi)) < 1e-15);
}

TEST_CASE("alternative chart coordinates") {
    A1Model a1;
    cplx L = A1Model::log_branch(kPt.z[0]);
    auto [phi, phiv] = A1Model::phi_coords(kPt);
    CHECK(std::abs(phi - kPt.theta[0]) == 0.0);
    CHECK(std::abs(phiv - (kPt.theta[1] - kPt.theta[0] * L / kTwoPiI)) < 1e-15);
    auto [v, vv] = A1Model::v_coords(kPt.z[0], kPt.z[1]);
    CHECK(v == kPt.z[0]);
    CHECK(std::abs(vv - (kPt.z[1] - kPt.z[0] / kTwoPiI * (L - 1.0))) < 1e-15);
    // the record bundles every chart value consistently
    auto rec = a1.evaluate(kPt);
    CHECK(rec.W == a1.W(kPt.z, kPt.theta));
    CHECK(rec.phi == phi);
    CHECK(rec.phiv == phiv);
    CHECK(rec.U == A1Model::U_of(kPt.z[0], kPt.z[1], phi, phiv));
    CHECK(rec.F_prepotential == A1Model::prepotential(kPt.z[0], kPt.z[1]));
    // z = 0 is excluded from the chart
    CHECK_THROWS_AS(A1Model::v_coords(cplx(0.0), cplx(1.0)), ZeroZ);
    CHECK_THROWS_AS(A1Model::u_jacobian(cplx(0.0)), ZeroZ);
    CHECK_THROWS_AS(A1Model::prepotential(cplx(0.0), cplx(1.0)), ZeroZ);
}

TEST_CASE("mixed scalar: analytic jacobian against finite differences") {
    const cplx z0 = kPt.z[0], zv0 = kPt.z[1];
    const cplx phi(0.4, -0.7), phiv(0.9, 0.2);
    cmat m = A1Model::u_jacobian(z0);
    // determinant is the constant 1 / (2 pi i)^2 = -1 / (4 pi^2)
    cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    CHECK(std::abs(det + 1.0 / kFourPiSq) < 1e-16);
    // U is linear in (phi, phiv): extract the phi-gradient exactly, then
    // differentiate it in the base slots
    auto du_dphi = [&](const cvec& base, std::size_t i) {
        cplx at0 = A1Model::U_of(base[0], base[1], cplx(0.0), cplx(0.0));
        cplx e0 = (i == 0) ? cplx(1.0) : cplx(0.0);
        cplx e1 = (i == 1) ? cplx(1.0) : cplx(0.0);
        return A1Model::U_of(base[0], base[1], e0, e1) - at0;
    };
    cvec base = {z0, zv0};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t r = 0; r < 2; ++r) {
            cplx fdv = fd::d1([&](const cvec& y) { return du_dphi(y, i); },
                              base, r, 1e-5);
            CHECK(std::abs(fdv - m[i][r]) < 1e-9);
        }
    // prepotential identities: dF/dz = dU/dphi and dF/dzv = -dU/dphiv
    auto F = [](const cvec& y) { return A1Model::prepotential(y[0], y[1]); };
    cplx dFdz = fd::d1(F, base, 0, 1e-5);
    cplx dFdzv = fd::d1(F, base, 1, 1e-5);
    cplx dUdphi = du_dphi(base, 0);
    cplx dUdphiv = du_dphi(base, 1);
    CHECK(std::abs(dFdz - dUdphi) < 1e-9);
    CHECK(std::abs(dFdzv + dUdphiv) < 1e-9);
}

TEST_CASE("pole bookkeeping of the doubled chart") {
    A1Model a1;
    cvec at_pole = {cplx(0.0), cplx(0.3), cplx(0.1), cplx(0.2)};
    CHECK(a1.is_pole(at_pole));
    CHECK(a1.pole_distance(at_pole) == 0.0);
    cvec clear = {cplx(0.6, -0.8), cplx(0.3), cplx(0.1), cplx(0.2)};
    CHECK_FALSE(a1.is_pole(clear));
    CHECK(std::abs(a1.pole_distance(clear) - 1.0) < 1e-15);
    TangentPoint bad{{cplx(0.0), cplx(0.3)}, {cplx(0.1), cplx(0.2)}};
    CHECK_THROWS_AS(models::joyce_function(a1, bad), PoleError);
}

TEST_CASE("synthetic counterexamples keep their designed defects") {
    models::SyntheticNonHeavenly nh;
    // constant frames: every pencil member is flat...
    TangentPoint fp{{cplx(0.3, 0.1), cplx(0.4)}, {cplx(0.5), cplx(0.6, -0.2)}};
    CHECK(nh.d2W_thth(fp.z, fp.theta, 0, 1) == cplx(1.0));
    CHECK(nh.d2W_thth(fp.z, fp.theta, 0, 0) == cplx(0.0));
    // ...and the lattice pairing still integral
    CHECK(max_abs(nh.lattice_eta()) > 6.0);
    models::SyntheticFlatnessViolator fv;
    CHECK(fv.d2W_thth(fp.z, fp.theta, 0, 0) == fp.z[1]);
    CHECK(fv.d2W_thz(fp.z, fp.theta, 0, 1) == fp.theta[0]);
}

} // TEST_SUITE
