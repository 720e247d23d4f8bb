#pragma once
// Concrete potential-based models: the flat models, the doubled A1 structure,
// and two synthetic counterexample potentials used to prove the checks can
// fail.

#include <cmath>

#include "joycekit/geometry.hpp"

namespace joycekit::models {

using tensorcore::SymplecticData;
using tensorcore::TangentPoint;
using tensorcore::WModel;

// Standard symplectic data: omega pairs slot i with slot i + n/2,
// omega_{i, i+n/2} = 1 (n must be even).
inline SymplecticData standard_sym(std::size_t n) {
    SymplecticData s;
    s.n = n;
    s.omega = zeros(n, n);
    s.eta = zeros(n, n);
    const std::size_t half = n / 2;
    if (2 * half != n) throw ConfigError("standard symplectic data needs even n");
    for (std::size_t i = 0; i < half; ++i) {
        s.omega[i][half + i] = 1.0;
        s.omega[half + i][i] = -1.0;
        s.eta[i][half + i] = -1.0;
        s.eta[half + i][i] = 1.0;
    }
    return s;
}

// Declared lattice basis for the standard-sym models: coordinate basis scaled
// by 2 pi i, so the eta-pairing over the lattice is (2 pi i) * eta.
inline cmat scaled_lattice_eta(const SymplecticData& s) {
    cmat e = s.eta;
    for (auto& row : e)
        for (auto& v : row) v *= kTwoPiI;
    return e;
}

// ---------------------------------------------------------------- flat model
class FlatModel : public WModel {
public:
    explicit FlatModel(std::size_t n = 2)
        : WModel(standard_sym(n), /*period_structure=*/true, /*normalized=*/true) {}

    cmat lattice_eta() const override { return scaled_lattice_eta(sym()); }

    cplx W(const cvec&, const cvec&) const override { return 0.0; }
    cplx dW_theta(const cvec&, const cvec&, std::size_t) const override { return 0.0; }
    cplx d2W_thth(const cvec&, const cvec&, std::size_t, std::size_t) const override {
        return 0.0;
    }
    cplx d2W_thz(const cvec&, const cvec&, std::size_t, std::size_t) const override {
        return 0.0;
    }
    cplx d3W_theta(const cvec&, const cvec&, std::size_t, std::size_t,
                   std::size_t) const override {
        return 0.0;
    }
};

// ------------------------------------------------------------------ A1 model
// M = C* x C, W = -theta^3 / (6 (2 pi i)^2 z), omega(dz, dzv) slot = 1/(2 pi i),
// eta(dzv, dz) = 2 pi i.  The log branch used by the alternative coordinates
// and the first Plebanski data is the principal branch of log(z / 2 pi i)
// (branch cut along the negative imaginary z-axis).
struct A1Record {
    cplx W;
    cplx U;
    cplx F_prepotential;
    cplx phi;
    cplx phiv;
};

class A1Model : public WModel {
public:
    A1Model() : WModel(make_sym(), /*period_structure=*/true, /*normalized=*/true) {}

    static SymplecticData make_sym() {
        SymplecticData s;
        s.n = 2;
        s.omega = zeros(2, 2);
        s.eta = zeros(2, 2);
        s.omega[0][1] = 1.0 / kTwoPiI;
        s.omega[1][0] = -1.0 / kTwoPiI;
        s.eta[0][1] = -kTwoPiI;
        s.eta[1][0] = kTwoPiI;
        return s;
    }

    bool is_pole(const cvec& x) const override { return x[0] == cplx(0.0); }
    double pole_distance(const cvec& x) const override { return std::abs(x[0]); }

    cplx W(const cvec& z, const cvec& th) const override {
        require_z(z[0]);
        return -th[0] * th[0] * th[0] / (6.0 * kTwoPiI * kTwoPiI * z[0]);
    }
    cplx dW_theta(const cvec& z, const cvec& th, std::size_t i) const override {
        require_z(z[0]);
        if (i != 0) return 0.0;
        return -th[0] * th[0] / (2.0 * kTwoPiI * kTwoPiI * z[0]);
    }
    cplx d2W_thth(const cvec& z, const cvec& th, std::size_t i,
                  std::size_t j) const override {
        require_z(z[0]);
        if (i != 0 || j != 0) return 0.0;
        return -th[0] / (kTwoPiI * kTwoPiI * z[0]);
    }
    cplx d2W_thz(const cvec& z, const cvec& th, std::size_t i,
                 std::size_t j) const override {
        require_z(z[0]);
        if (i != 0 || j != 0) return 0.0;
        return th[0] * th[0] / (2.0 * kTwoPiI * kTwoPiI * z[0] * z[0]);
    }
    cplx d3W_theta(const cvec& z, const cvec&, std::size_t i, std::size_t j,
                   std::size_t l) const override {
        require_z(z[0]);
        if (i != 0 || j != 0 || l != 0) return 0.0;
        return -1.0 / (kTwoPiI * kTwoPiI * z[0]);
    }

    static cplx log_branch(cplx z) { return std::log(z / kTwoPiI); }

    // Fibre coordinates of the alternative integral affine chart.
    static std::pair<cplx, cplx> phi_coords(const TangentPoint& pt) {
        require_z(pt.z[0]);
        cplx L = log_branch(pt.z[0]);
        return {pt.theta[0], pt.theta[1] - pt.theta[0] / kTwoPiI * L};
    }

    // Base coordinates of the alternative chart: v = z,
    // vv = zv - (z / 2 pi i)(log(z / 2 pi i) - 1).
    static std::pair<cplx, cplx> v_coords(cplx z, cplx zv) {
        require_z(z);
        return {z, zv - z / kTwoPiI * (log_branch(z) - 1.0)};
    }

    // First Plebanski function in mixed coordinates (z, zv; phi, phiv).
    static cplx U_of(cplx z, cplx zv, cplx phi, cplx phiv) {
        require_z(z);
        cplx L = log_branch(z);
        return (zv * phi - phiv * z + phi * z / kTwoPiI - phi * z / kTwoPiI * L) /
               kTwoPiI;
    }

    // Analytic mixed Jacobian M[i][r] = d^2 U / dphi_i dz_r.
    static cmat u_jacobian(cplx z) {
        require_z(z);
        cplx L = log_branch(z);
        cmat m = zeros(2, 2);
        m[0][0] = -L / (kTwoPiI * kTwoPiI);
        m[0][1] = 1.0 / kTwoPiI;
        m[1][0] = -1.0 / kTwoPiI;
        m[1][1] = 0.0;
        return m;
    }

    // Prepotential with dF/dz = dU/dphi and dF/dzv = -dU/dphiv.
    static cplx prepotential(cplx z, cplx zv) {
        require_z(z);
        cplx L = log_branch(z);
        return z * zv / kTwoPiI -
               (0.5 * z * z * L - 0.75 * z * z) / (kTwoPiI * kTwoPiI);
    }

    A1Record evaluate(const TangentPoint& pt) const {
        require_z(pt.z[0]);
        auto [phi, phiv] = phi_coords(pt);
        return A1Record{W(pt.z, pt.theta), U_of(pt.z[0], pt.z[1], phi, phiv),
                        prepotential(pt.z[0], pt.z[1]), phi, phiv};
    }

private:
    static void require_z(cplx z) {
        if (z == cplx(0.0)) throw ZeroZ("z = 0 in the A1 chart");
    }
};

// ------------------------------------------------- synthetic counterexamples
// W = theta_1 theta_2 with omega_12 = 1: the frames are constant (flat pencil)
// but the heavenly residual is the constant -1, so the heavenly check fails.
class SyntheticNonHeavenly : public WModel {
public:
    SyntheticNonHeavenly()
        : WModel(standard_sym(2), /*period_structure=*/true, /*normalized=*/true) {}
    cmat lattice_eta() const override { return scaled_lattice_eta(sym()); }
    cplx W(const cvec&, const cvec& th) const override { return th[0] * th[1]; }
    cplx dW_theta(const cvec&, const cvec& th, std::size_t i) const override {
        return i == 0 ? th[1] : th[0];
    }
    cplx d2W_thth(const cvec&, const cvec&, std::size_t i, std::size_t j) const override {
        return (i != j) ? cplx(1.0) : cplx(0.0);
    }
    cplx d2W_thz(const cvec&, const cvec&, std::size_t, std::size_t) const override {
        return 0.0;
    }
    cplx d3W_theta(const cvec&, const cvec&, std::size_t, std::size_t,
                   std::size_t) const override {
        return 0.0;
    }
};

// W = z_2 theta_1^2 / 2 with omega_12 = 1: violates both flatness of the
// pencil and the heavenly equations (bracket [h_1, h_2] = +d/dtheta_2).
class SyntheticFlatnessViolator : public WModel {
public:
    SyntheticFlatnessViolator()
        : WModel(standard_sym(2), /*period_structure=*/true, /*normalized=*/true) {}
    cmat lattice_eta() const override { return scaled_lattice_eta(sym()); }
    cplx W(const cvec& z, const cvec& th) const override {
        return 0.5 * z[1] * th[0] * th[0];
    }
    cplx dW_theta(const cvec& z, const cvec& th, std::size_t i) const override {
        return i == 0 ? z[1] * th[0] : cplx(0.0);
    }
    cplx d2W_thth(const cvec& z, const cvec&, std::size_t i, std::size_t j) const override {
        return (i == 0 && j == 0) ? z[1] : cplx(0.0);
    }
    cplx d2W_thz(const cvec&, const cvec& th, std::size_t i, std::size_t j) const override {
        return (i == 0 && j == 1) ? th[0] : cplx(0.0);
    }
    cplx d3W_theta(const cvec&, const cvec&, std::size_t, std::size_t,
                   std::size_t) const override {
        return 0.0;
    }
};

} // namespace joycekit::models
