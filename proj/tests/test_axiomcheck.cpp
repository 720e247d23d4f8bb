// Residual computations for the structural identities: the second-order
// system for the potential, pencil flatness, symmetry relations, closedness,
// lattice pairing integrality, and parallelism of the operator triple.
#include <doctest.h>

#include <cmath>

#include "joycekit/axioms.hpp"
#include "joycekit/wmodels.hpp"

using namespace joycekit;
using tensorcore::TangentPoint;

namespace {

const TangentPoint kPt{{cplx(1.1, 0.3), cplx(0.5, -0.2)},
                       {cplx(0.7, 0.1), cplx(0.2, 0.4)}};

// Flat-style model that declares no integral-linear chart.
struct NoPeriodModel : tensorcore::WModel {
    NoPeriodModel()
        : WModel(models::standard_sym(2), /*period_structure=*/false,
                 /*normalized=*/true) {}
    cplx W(const cvec&, const cvec&) const override { return 0.0; }
    cplx dW_theta(const cvec&, const cvec&, std::size_t) const override {
        return 0.0;
    }
    cplx d2W_thth(const cvec&, const cvec&, std::size_t,
                  std::size_t) const override {
        return 0.0;
    }
    cplx d2W_thz(const cvec&, const cvec&, std::size_t,
                 std::size_t) const override {
        return 0.0;
    }
    cplx d3W_theta(const cvec&, const cvec&, std::size_t, std::size_t,
                   std::size_t) const override {
        return 0.0;
    }
};

// Declares a lattice basis whose eta-pairing is not (2 pi i)-integral.
struct BadLatticeModel : models::FlatModel {
    BadLatticeModel() : FlatModel(2) {}
    cmat lattice_eta() const override { return sym().eta; }
};

} // namespace

TEST_SUITE("axiomcheck") {

TEST_CASE("heavenly system: satisfied analytically, violated by design") {
    models::A1Model a1;
    cmat r = axiomcheck::heavenly2_residual(a1, kPt);
    CHECK(max_abs(r) < 1e-15);
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    CHECK(max_abs(axiomcheck::heavenly2_residual(flat, fp)) == 0.0);
    // W = theta_1 theta_2 gives the constant residual -1 in slot (1, 2)
    models::SyntheticNonHeavenly bad;
    cmat rb = axiomcheck::heavenly2_residual(bad, fp);
    CHECK(std::abs(rb[0][1] + 1.0) < 1e-15);
    CHECK(std::abs(rb[1][0] - 1.0) < 1e-15);
    // W = z_2 theta_1^2 / 2 leaves the residual theta_1 in slot (1, 2)
    models::SyntheticFlatnessViolator viol;
    cmat rv = axiomcheck::heavenly2_residual(viol, kPt);
    CHECK(std::abs(rv[0][1] - kPt.theta[0]) < 1e-14);
}

TEST_CASE("pencil flatness across representative members") {
    models::A1Model a1;
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3, 0.1), cplx(0.4)}, {cplx(0.5), cplx(0.6, -0.2)}};
    for (cplx eps : {kEpsInf, cplx(1.0), cplx(0.0, 1.0), cplx(-0.5)}) {
        CHECK(axiomcheck::flatness_residual(a1, kPt, eps) < 1e-7);
        CHECK(axiomcheck::flatness_residual(flat, fp, eps) < 1e-12);
    }
    // the violator has [h_1, h_2] = +d/dtheta_2, so every member fails
    models::SyntheticFlatnessViolator viol;
    for (cplx eps : {kEpsInf, cplx(1.0)}) {
        double r = axiomcheck::flatness_residual(viol, kPt, eps);
        CHECK(r > 0.9);
        CHECK(r < 1.1);
    }
}

TEST_CASE("symmetry relations: translation, homogeneity, parity") {
    models::A1Model a1;
    auto s = axiomcheck::symmetry_residuals(a1, kPt, {1, 0}, cplx(2.0));
    // scaling and parity hold exactly for the cubic potential
    CHECK(s.homogeneity < 1e-15);
    CHECK(s.parity < 1e-15);
    // fibre translation by the lattice shifts the theta-Hessian by
    // 1/(2 pi i z): a genuine, quantified failure
    CHECK(s.translation > 1e-3);
    CHECK(std::abs(s.translation - 1.0 / (2.0 * kPi * std::abs(kPt.z[0]))) <
          1e-14);
    // shifting the inert fibre slot changes nothing
    auto s2 = axiomcheck::symmetry_residuals(a1, kPt, {0, 1}, cplx(2.0));
    CHECK(s2.translation == 0.0);
    // complex scale factor
    auto s3 = axiomcheck::symmetry_residuals(a1, kPt, {0, 0}, cplx(0.4, 1.7));
    CHECK(s3.homogeneity < 1e-15);
    // the flat model satisfies all three on the nose
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    auto sf = axiomcheck::symmetry_residuals(flat, fp, {2, -1}, cplx(3.0));
    CHECK(sf.translation == 0.0);
    CHECK(sf.homogeneity == 0.0);
    CHECK(sf.parity == 0.0);
    // argument validation
    CHECK_THROWS_AS(axiomcheck::symmetry_residuals(a1, kPt, {1}, cplx(2.0)),
                    ConfigError);
    CHECK_THROWS_AS(axiomcheck::symmetry_residuals(a1, kPt, {1, 0}, cplx(0.0)),
                    ConfigError);
}

TEST_CASE("closedness of the two-form triple and the pencil") {
    models::A1Model a1;
    using axiomcheck::FormKind;
    CHECK(axiomcheck::closedness_residual(a1, kPt, FormKind::plus) < 1e-8);
    CHECK(axiomcheck::closedness_residual(a1, kPt, FormKind::i_form) < 1e-8);
    CHECK(axiomcheck::closedness_residual(a1, kPt, FormKind::minus) < 1e-8);
    CHECK(axiomcheck::closedness_residual(a1, kPt, FormKind::pencil, cplx(1.0),
                                          cplx(0.0, 1.0)) < 1e-8);
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    CHECK(axiomcheck::closedness_residual(flat, fp, FormKind::minus) < 1e-12);
}

TEST_CASE("exterior derivative detects a non-closed coefficient field") {
    // F = x_1 dx_3 ^ dx_4 (coefficient linear in x_1): the only nonzero
    // cyclic sum is d_1 F_34 = 1
    axiomcheck::FormField field = [](const cvec& y) {
        cmat f = zeros(4, 4);
        f[2][3] = y[0];
        f[3][2] = -y[0];
        return f;
    };
    cvec x = {cplx(0.2, 0.1), cplx(0.3), cplx(-0.4, 0.2), cplx(0.5)};
    double r = axiomcheck::exterior_derivative_max(field, x);
    CHECK(std::abs(r - 1.0) < 1e-10);
    // a constant field is closed to machine precision
    axiomcheck::FormField constant = [](const cvec&) {
        cmat f = zeros(4, 4);
        f[0][1] = 1.0;
        f[1][0] = -1.0;
        return f;
    };
    CHECK(axiomcheck::exterior_derivative_max(constant, x) < 1e-14);
}

TEST_CASE("lattice pairing integrality") {
    models::A1Model a1;
    models::FlatModel flat;
    CHECK(axiomcheck::lattice_pairing_check(a1));
    CHECK(axiomcheck::lattice_pairing_check(flat));
    BadLatticeModel bad;
    CHECK_FALSE(axiomcheck::lattice_pairing_check(bad));
    NoPeriodModel none;
    CHECK_THROWS_AS(axiomcheck::lattice_pairing_check(none),
                    NoPeriodStructure);
}

TEST_CASE("operator triple is parallel for the derived metric") {
    models::A1Model a1;
    CHECK(axiomcheck::parallel_residual(a1, kPt) < 1e-6);
    models::FlatModel flat;
    TangentPoint fp{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    CHECK(axiomcheck::parallel_residual(flat, fp) < 1e-10);
}

TEST_CASE("report assembly and pole guard") {
    auto r = axiomcheck::make_report("closedness", "d(form) = 0", 5e-9, kPt,
                                     24, 1e-8);
    CHECK(r.name == "closedness");
    CHECK(r.anchor == "d(form) = 0");
    CHECK(r.max_abs == 5e-9);
    CHECK(r.samples == 24);
    CHECK(r.pass);
    auto bad = axiomcheck::make_report("closedness", "d(form) = 0", 2e-8, kPt,
                                       24, 1e-8);
    CHECK_FALSE(bad.pass);
    // boundary case counts as a pass
    CHECK(axiomcheck::make_report("x", "y", 1e-8, kPt, 1, 1e-8).pass);

    models::A1Model a1;
    cvec near_pole = {cplx(1e-5), cplx(0.0), cplx(0.1), cplx(0.0)};
    CHECK_THROWS_AS(axiomcheck::require_clear(a1, near_pole, 1e-4), PoleError);
    cvec at_pole = {cplx(0.0), cplx(0.0), cplx(0.1), cplx(0.0)};
    CHECK_THROWS_AS(axiomcheck::require_clear(a1, at_pole, 1e-4), PoleError);
    cvec clear = {cplx(1.0), cplx(0.0), cplx(0.1), cplx(0.0)};
    CHECK_NOTHROW(axiomcheck::require_clear(a1, clear, 1e-4));
}

} // TEST_SUITE
