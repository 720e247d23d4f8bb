// Frame assembly from generating potentials, the associated triple of
// two-forms, and the hyperkähler tensor package (metric, quaternionic
// endomorphisms, dual construction routes).
#include <doctest.h>

#include <cmath>

#include "joycekit/hk.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/wmodels.hpp"

using namespace joycekit;
using tensorcore::TangentPoint;

namespace {

const TangentPoint kA1Point{{cplx(1.1, 0.3), cplx(0.5, -0.2)},
                            {cplx(0.7, 0.1), cplx(0.2, 0.4)}};

cvec column(const cmat& m, std::size_t j) {
    cvec c(m.size());
    for (std::size_t k = 0; k < m.size(); ++k) c[k] = m[k][j];
    return c;
}

cplx pair_form(const cmat& f, const cvec& u1, const cvec& u2) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i)
        for (std::size_t j = 0; j < u2.size(); ++j)
            acc += u1[i] * f[i][j] * u2[j];
    return acc;
}

double entry_diff(const cmat& a, const cmat& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j)
            worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    return worst;
}

} // namespace

TEST_SUITE("tensorcore") {

TEST_CASE("symplectic data: omega and eta are mutually inverse and skew") {
    for (std::size_t n : {2, 4}) {
        models::FlatModel m(n);
        const auto& s = m.sym();
        cmat prod = linalg::matmul(s.omega, s.eta);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(std::abs(prod[i][j] - (i == j ? 1.0 : 0.0)) < 1e-15);
                CHECK(std::abs(s.omega[i][j] + s.omega[j][i]) < 1e-15);
                CHECK(std::abs(s.eta[i][j] + s.eta[j][i]) < 1e-15);
            }
    }
    CHECK_THROWS_AS(models::standard_sym(3), ConfigError);
    // doubled-chart data: omega(dz, dzv) = 1/(2 pi i), eta inverse to it
    models::A1Model a1;
    CHECK(std::abs(a1.sym().omega[0][1] - 1.0 / kTwoPiI) < 1e-18);
    CHECK(std::abs(a1.sym().eta[0][1] + kTwoPiI) < 1e-15);
}

TEST_CASE("doubled-chart potential value and fibre derivatives") {
    models::A1Model a1;
    // W = -theta^3 / (6 (2 pi i)^2 z) at z = 1, theta = 1:
    // (2 pi i)^2 = -4 pi^2, so W = 1 / (24 pi^2)
    cplx w = a1.W({cplx(1.0), cplx(0.0)}, {cplx(1.0), cplx(0.0)});
    CHECK(std::abs(w - 1.0 / (24.0 * kPi * kPi)) < 1e-17);
    cvec z = {cplx(1.3, 0.4), cplx(0.2)};
    cvec th = {cplx(0.8, -0.3), cplx(0.5)};
    cplx hess = a1.d2W_thth(z, th, 0, 0);
    CHECK(std::abs(hess + th[0] / (kTwoPiI * kTwoPiI * z[0])) < 1e-15);
    CHECK(std::abs(a1.d2W_thth(z, th, 0, 1)) == 0.0);
    CHECK(std::abs(a1.d3W_theta(z, th, 0, 0, 0) +
                   1.0 / (kTwoPiI * kTwoPiI * z[0])) < 1e-15);
    CHECK_THROWS_AS(a1.W({cplx(0.0), cplx(0.0)}, th), ZeroZ);
}

TEST_CASE("frames: fibre directions and potential-coupled horizontals") {
    models::A1Model a1;
    cvec x = tensorcore::pack(kA1Point);
    auto fp = tensorcore::frames(a1, x, cplx(2.0, 1.0));
    // vertical frame v_i = d/dtheta_i (column i of fp.v)
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(fp.v[k][i] - ((k == i + 2) ? 1.0 : 0.0)) < 1e-15);
    // horizontal frame h_i = d/dz_i + sum_pq eta_pq Hess_ip d/dtheta_q
    const auto& eta = a1.sym().eta;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(fp.h[i][i] - 1.0) < 1e-15);
        CHECK(std::abs(fp.h[1 - i][i]) < 1e-15);
        for (std::size_t q = 0; q < 2; ++q) {
            cplx want = 0.0;
            for (std::size_t p = 0; p < 2; ++p)
                want += eta[p][q] *
                        a1.d2W_thth(kA1Point.z, kA1Point.theta, i, p);
            CHECK(std::abs(fp.h[2 + q][i] - want) < 1e-14);
        }
    }
    // pencil member at eps: h + eps^{-1} v, both via frames() and directly
    const cplx eps(2.0, 1.0);
    cvec pf = a1.pencil_frame(x, 0, eps);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(pf[k] - (fp.h[k][0] + fp.v[k][0] / eps)) < 1e-14);
        CHECK(std::abs(fp.h_eps[k][0] - pf[k]) < 1e-15);
    }
    // infinite member is purely horizontal
    cvec pinf = a1.pencil_frame(x, 0, kEpsInf);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(pinf[k] == fp.h[k][0]);
    CHECK_THROWS_AS(tensorcore::frames(a1, x, cplx(0.0)), ZeroEpsilon);
}

TEST_CASE("two-forms: pairings of the frame fields") {
    models::A1Model a1;
    auto tf = tensorcore::two_forms(a1, kA1Point);
    cvec x = tensorcore::pack(kA1Point);
    auto fp = tensorcore::frames(a1, x, cplx(1.0));
    cvec h0 = column(fp.h, 0), h1 = column(fp.h, 1);
    cvec v0 = column(fp.v, 0), v1 = column(fp.v, 1);
    const cplx om01 = a1.sym().omega[0][1];
    const cplx two_i(0.0, 2.0);
    // Omega_+ pairs horizontals and kills verticals
    CHECK(std::abs(pair_form(tf.plus, h0, h1) - om01) < 1e-14);
    CHECK(std::abs(pair_form(tf.plus, v0, v1)) < 1e-15);
    CHECK(std::abs(pair_form(tf.plus, h0, v1)) < 1e-15);
    // Omega_- pairs verticals and kills horizontals
    CHECK(std::abs(pair_form(tf.minus, v0, v1) - om01) < 1e-14);
    CHECK(std::abs(pair_form(tf.minus, h0, h1)) < 1e-12);
    CHECK(std::abs(pair_form(tf.minus, h0, v1)) < 1e-13);
    // 2i Omega_I(h_i, v_j) = -omega_ij; vanishes on h x h and v x v
    CHECK(std::abs(two_i * pair_form(tf.i_form, h0, v1) + om01) < 1e-13);
    CHECK(std::abs(two_i * pair_form(tf.i_form, h1, v0) - om01) < 1e-13);
    CHECK(std::abs(pair_form(tf.i_form, h0, h1)) < 1e-13);
    CHECK(std::abs(pair_form(tf.i_form, v0, v1)) < 1e-15);
    // all three are antisymmetric matrices
    for (const cmat* f : {&tf.plus, &tf.i_form, &tf.minus})
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(std::abs((*f)[i][j] + (*f)[j][i]) < 1e-14);
}

TEST_CASE("form pencil: eps-leaf tangents are isotropic for the matching member") {
    models::A1Model a1;
    auto tf = tensorcore::two_forms(a1, kA1Point);
    cvec x = tensorcore::pack(kA1Point);
    for (cplx eps : {cplx(1.0), cplx(0.0, 1.0), cplx(-0.5), cplx(2.0, -1.0)}) {
        cmat pencil = tensorcore::form_pencil(tf, cplx(1.0), eps);
        cvec u1 = a1.pencil_frame(x, 0, eps);
        cvec u2 = a1.pencil_frame(x, 1, eps);
        CHECK(std::abs(pair_form(pencil, u1, u2)) < 1e-13);
    }
    // the infinite member pairs with the pure Omega_- end of the pencil
    cmat minus_end = tensorcore::form_pencil(tf, cplx(0.0), cplx(1.0));
    cvec h0 = a1.pencil_frame(x, 0, kEpsInf);
    cvec h1 = a1.pencil_frame(x, 1, kEpsInf);
    CHECK(std::abs(pair_form(minus_end, h0, h1)) < 1e-13);
    CHECK_THROWS_AS(tensorcore::form_pencil(tf, cplx(0.0), cplx(0.0)),
                    BothZero);
}

TEST_CASE("hyperkähler package: quaternion relations and metric invariance") {
    models::A1Model a1;
    cvec x = tensorcore::pack(kA1Point);
    auto hk = tensorcore::hk_tensors(a1, x);
    CHECK(tensorcore::quaternion_residual(hk) < 1e-12);
    CHECK(tensorcore::metric_invariance_residual(hk) < 1e-12);
    // the metric pairs h against v with half the base form
    auto fp = tensorcore::frames(a1, x, cplx(1.0));
    cvec h0 = column(fp.h, 0), h1 = column(fp.h, 1);
    cvec v0 = column(fp.v, 0), v1 = column(fp.v, 1);
    const cplx om01 = a1.sym().omega[0][1];
    CHECK(std::abs(pair_form(hk.g, h0, v1) - 0.5 * om01) < 1e-13);
    CHECK(std::abs(pair_form(hk.g, h0, h1)) < 1e-13);
    CHECK(std::abs(pair_form(hk.g, v0, v1)) < 1e-13);
    // flat model: exactly quaternionic
    models::FlatModel flat(2);
    TangentPoint q{{cplx(0.3), cplx(0.4)}, {cplx(0.5), cplx(0.6)}};
    auto hkf = tensorcore::hk_tensors(flat, tensorcore::pack(q));
    CHECK(tensorcore::quaternion_residual(hkf) < 1e-14);
    CHECK(tensorcore::metric_invariance_residual(hkf) < 1e-14);
}

TEST_CASE("dual routes to the two-forms agree") {
    models::A1Model a1;
    cvec x = tensorcore::pack(kA1Point);
    auto direct = tensorcore::two_forms(a1, kA1Point);
    auto viaGram = tensorcore::gram_two_forms(a1, x);
    CHECK(entry_diff(direct.plus, viaGram.plus) < 1e-12);
    CHECK(entry_diff(direct.i_form, viaGram.i_form) < 1e-12);
    CHECK(entry_diff(direct.minus, viaGram.minus) < 1e-12);
}

TEST_CASE("euler fields: base scaling with zero vertical lift") {
    models::A1Model a1;
    auto ed = tensorcore::euler_fields(a1, kA1Point);
    REQUIRE(ed.Z.size() == 2);
    REQUIRE(ed.E.size() == 4);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(ed.Z[i] == kA1Point.z[i]);
        CHECK(ed.E[i] == kA1Point.z[i]);
        CHECK(ed.E[2 + i] == cplx(0.0));
    }
}

TEST_CASE("pack and unpack round trip") {
    TangentPoint pt{{cplx(0.1, 0.2), cplx(0.3, 0.4)},
                    {cplx(0.5, 0.6), cplx(0.7, 0.8)}};
    cvec x = tensorcore::pack(pt);
    REQUIRE(x.size() == 4);
    TangentPoint back = tensorcore::unpack(x, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back.z[i] == pt.z[i]);
        CHECK(back.theta[i] == pt.theta[i]);
    }
}

} // TEST_SUITE
