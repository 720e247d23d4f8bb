#pragma once
// Core chart-local geometry: symplectic data, tangent points, the frame
// provider interface shared by potential-based models and chart models, the
// potential-based model class with its derivative stack, coordinate
// two-forms, and homogeneity (Euler) data.
//
// Conventions fixed across the library (all tests depend on these):
//   * omega and eta are n x n skew matrices with omega . eta = Id.
//   * Packed chart order for potential models: (z_1..z_n, theta_1..theta_n).
//   * Vertical frame v_i = d/dtheta_i.
//   * Horizontal frame h_i = d/dz_i + sum_{p,q} eta_pq W_{theta_i theta_p} d/dtheta_q.
//   * Pencil h_eps = h + eps^{-1} v; eps = infinity means h itself.
//   * Omega_plus = 1/2 sum omega_pq h^p ^ h^q,
//     Omega_I    = (i/2) sum omega_pq v^p ^ h^q   (stored un-doubled),
//     Omega_minus= 1/2 sum omega_pq v^p ^ v^q.
//   * Two-form matrices are 2n x 2n in the basis (dz_1.., dtheta_1..) with
//     mat[A][B] = Omega(d/dx_A, d/dx_B).

#include <functional>
#include <memory>
#include <optional>

#include "joycekit/errors.hpp"
#include "joycekit/fd.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/types.hpp"

namespace joycekit::tensorcore {

struct SymplecticData {
    std::size_t n = 0;
    cmat omega; // n x n skew
    cmat eta;   // n x n skew, omega * eta = Id

    void validate() const {
        if (omega.size() != n || eta.size() != n)
            throw ConfigError("symplectic data has wrong dimensions");
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (std::abs(omega[p][q] + omega[q][p]) > 1e-14)
                    throw ConfigError("omega is not skew-symmetric");
                if (std::abs(eta[p][q] + eta[q][p]) > 1e-14)
                    throw ConfigError("eta is not skew-symmetric");
            }
        cmat prod = linalg::matmul(omega, eta);
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                cplx want = (p == q) ? cplx(1.0) : cplx(0.0);
                if (std::abs(prod[p][q] - want) > 1e-12)
                    throw ConfigError("omega . eta != Id");
            }
    }
};

struct TangentPoint {
    cvec z;
    cvec theta;
};

inline cvec pack(const TangentPoint& pt) {
    cvec x(pt.z.size() + pt.theta.size());
    std::copy(pt.z.begin(), pt.z.end(), x.begin());
    std::copy(pt.theta.begin(), pt.theta.end(), x.begin() + pt.z.size());
    return x;
}

inline TangentPoint unpack(const cvec& x, std::size_t n) {
    TangentPoint pt;
    pt.z.assign(x.begin(), x.begin() + n);
    pt.theta.assign(x.begin() + n, x.begin() + 2 * n);
    return pt;
}

// Anything that exposes vertical/horizontal frames over a packed chart.
// Potential models use the 2n packed chart; constrained chart models may use
// a larger packed state carrying dependent coordinates.
class FrameProvider {
public:
    virtual ~FrameProvider() = default;
    virtual std::size_t n() const = 0;
    virtual std::size_t dim() const { return 2 * n(); }
    virtual const SymplecticData& sym() const = 0;
    virtual bool is_pole(const cvec& x) const { (void)x; return false; }
    virtual double pole_distance(const cvec& x) const {
        (void)x;
        return std::numeric_limits<double>::infinity();
    }
    virtual cvec v_frame(const cvec& x, std::size_t i) const = 0;
    virtual cvec h_frame(const cvec& x, std::size_t i) const = 0;
    virtual bool has_period_structure() const { return false; }
    // Pairing matrix of eta over the declared integral lattice basis (used by
    // the lattice-pairing integrality check).  Defaults to the chart eta;
    // models whose working chart is not the integral-linear one override.
    virtual cmat lattice_eta() const { return sym().eta; }

    cvec pencil_frame(const cvec& x, std::size_t i, cplx eps) const {
        if (eps == cplx(0.0))
            throw ZeroEpsilon("pencil frame requested at eps = 0");
        cvec h = h_frame(x, i);
        if (is_inf_eps(eps)) return h;
        cvec v = v_frame(x, i);
        for (std::size_t k = 0; k < h.size(); ++k) h[k] += v[k] / eps;
        return h;
    }

    void require_regular(const cvec& x) const {
        if (is_pole(x)) throw PoleError("evaluation at a pole of the structure");
    }
};

// Potential-based model: geometry generated by a single function W(z, theta).
// Analytic derivative overrides are used where available; everything falls
// back to 4th-order finite differences of W with the configured step.
class WModel : public FrameProvider {
public:
    WModel(SymplecticData sym, bool period_structure, bool normalized,
           double fd_step = 1e-5)
        : sym_(std::move(sym)),
          has_period_structure_(period_structure),
          normalized_(normalized),
          fd_step_(fd_step) {
        sym_.validate();
    }

    std::size_t n() const override { return sym_.n; }
    const SymplecticData& sym() const override { return sym_; }

    bool has_period_structure() const override { return has_period_structure_; }
    bool normalized() const { return normalized_; }
    double fd_step() const { return fd_step_; }

    virtual cplx W(const cvec& z, const cvec& theta) const = 0;

    virtual cplx dW_theta(const cvec& z, const cvec& theta, std::size_t i) const {
        auto f = [&](const cvec& th) { return W(z, th); };
        return fd::d1(f, theta, i, fd_step_);
    }
    virtual cplx d2W_thth(const cvec& z, const cvec& theta, std::size_t i,
                          std::size_t j) const {
        auto f = [&](const cvec& th) { return W(z, th); };
        return fd::d2_cross(f, theta, i, j, fd_step_);
    }
    virtual cplx d2W_thz(const cvec& z, const cvec& theta, std::size_t i,
                         std::size_t j) const {
        // d^2 W / dtheta_i dz_j
        auto f = [&](const cvec& zz) {
            auto g = [&](const cvec& th) { return W(zz, th); };
            return fd::d1(g, theta, i, fd_step_);
        };
        return fd::d1(f, z, j, fd_step_);
    }
    virtual cplx d3W_theta(const cvec& z, const cvec& theta, std::size_t i,
                           std::size_t j, std::size_t l) const {
        auto f = [&](const cvec& th) { return W(z, th); };
        cvec th = theta;
        const double h = fd::scaled_step(fd_step_, theta[l]);
        auto g = [&](double t) {
            th[l] = theta[l] + t;
            return fd::d2_cross(f, th, i, j, fd_step_);
        };
        return fd::d1_dir(g, h);
    }

    // theta-Hessian as a matrix.
    cmat theta_hessian(const cvec& z, const cvec& theta) const {
        const std::size_t m = n();
        cmat h = zeros(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j)
                h[i][j] = h[j][i] = d2W_thth(z, theta, i, j);
        return h;
    }

    cvec v_frame(const cvec& x, std::size_t i) const override {
        (void)x;
        cvec v(dim(), cplx(0.0));
        v[n() + i] = 1.0;
        return v;
    }

    cvec h_frame(const cvec& x, std::size_t i) const override {
        require_regular(x);
        auto pt = unpack(x, n());
        cvec h(dim(), cplx(0.0));
        h[i] = 1.0;
        const std::size_t m = n();
        for (std::size_t p = 0; p < m; ++p) {
            cplx wip = d2W_thth(pt.z, pt.theta, i, p);
            if (wip == cplx(0.0)) continue;
            for (std::size_t q = 0; q < m; ++q)
                h[m + q] += sym_.eta[p][q] * wip;
        }
        return h;
    }

private:
    SymplecticData sym_;
    bool has_period_structure_;
    bool normalized_;
    double fd_step_;
};

struct FramePair {
    cmat v;     // columns v_i (dim x n)
    cmat h;     // columns h_i
    cmat h_eps; // columns h_i + eps^{-1} v_i
};

inline FramePair frames(const FrameProvider& model, const cvec& x, cplx eps) {
    model.require_regular(x);
    if (eps == cplx(0.0)) throw ZeroEpsilon("frames requested at eps = 0");
    const std::size_t d = model.dim(), m = model.n();
    FramePair f{zeros(d, m), zeros(d, m), zeros(d, m)};
    for (std::size_t i = 0; i < m; ++i) {
        cvec v = model.v_frame(x, i);
        cvec h = model.h_frame(x, i);
        for (std::size_t k = 0; k < d; ++k) {
            f.v[k][i] = v[k];
            f.h[k][i] = h[k];
            f.h_eps[k][i] = h[k] + (is_inf_eps(eps) ? cplx(0.0) : v[k] / eps);
        }
    }
    return f;
}

inline FramePair frames(const FrameProvider& model, const TangentPoint& pt, cplx eps) {
    return frames(model, pack(pt), eps);
}

struct ThreeForms {
    cmat plus;   // Omega_+
    cmat i_form; // Omega_I (un-doubled)
    cmat minus;  // Omega_-
};

// Closed-form coordinate two-forms for potential models:
//   Omega_+  : zz block = omega.
//   2i Omega_I = - sum omega_pq dtheta_p ^ dz_q  (the dz^dz terms cancel by
//                symmetry of the theta-Hessian).
//   Omega_-  : zz = -H eta H, theta z = H, theta theta = omega, with H the
//              theta-Hessian of W.
inline ThreeForms two_forms(const WModel& model, const TangentPoint& pt) {
    model.require_regular(pack(pt));
    const std::size_t m = model.n();
    const auto& om = model.sym().omega;
    ThreeForms F{zeros(2 * m, 2 * m), zeros(2 * m, 2 * m), zeros(2 * m, 2 * m)};
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q) {
            F.plus[p][q] = om[p][q];
            // 2i Omega_I has mat[theta_p][z_q] = -omega_pq; divide by 2i.
            F.i_form[m + p][q] = -om[p][q] / (2.0 * cplx(0.0, 1.0));
            F.i_form[q][m + p] = om[p][q] / (2.0 * cplx(0.0, 1.0));
        }
    cmat H = model.theta_hessian(pt.z, pt.theta);
    cmat HetaH = linalg::matmul(H, linalg::matmul(model.sym().eta, H));
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t t = 0; t < m; ++t) {
            F.minus[s][t] = -HetaH[s][t];
            F.minus[m + s][t] = H[s][t];
            F.minus[t][m + s] = -H[s][t];
            F.minus[m + s][m + t] = om[s][t];
        }
    return F;
}

// Pencil of closed two-forms: eps0^2 Omega_+ + 2i eps0 eps1 Omega_I + eps1^2 Omega_-
inline cmat form_pencil(const ThreeForms& f, cplx eps0, cplx eps1) {
    if (eps0 == cplx(0.0) && eps1 == cplx(0.0))
        throw BothZero("form pencil at (0, 0)");
    const std::size_t d = f.plus.size();
    cmat out = zeros(d, d);
    const cplx c0 = eps0 * eps0;
    const cplx cI = 2.0 * cplx(0.0, 1.0) * eps0 * eps1;
    const cplx c1 = eps1 * eps1;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b)
            out[a][b] = c0 * f.plus[a][b] + cI * f.i_form[a][b] + c1 * f.minus[a][b];
    return out;
}

// Homogeneity data in an integral-linear chart: the Euler field on M is
// Z = sum z_i d/dz_i, and its lift used by the homogeneity axiom has zero
// vertical part, E = (z, 0).
struct EulerData {
    cvec Z; // length n
    cvec E; // length 2n, packed
};

inline EulerData euler_fields(const WModel& model, const TangentPoint& pt) {
    if (!model.has_period_structure())
        throw NoPeriodStructure("Euler field needs an integral-linear chart");
    EulerData e;
    e.Z = pt.z;
    e.E = pack(TangentPoint{pt.z, cvec(pt.theta.size(), cplx(0.0))});
    return e;
}

} // namespace joycekit::tensorcore
