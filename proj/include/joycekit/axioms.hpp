#pragma once
// Residual computations for the structural identities a potential-based model
// must satisfy: heavenly equations, pencil flatness, symmetry relations,
// closedness of the associated two-forms, lattice pairing integrality, and
// parallelness of the quaternionic operators.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "joycekit/fd.hpp"
#include "joycekit/geometry.hpp"
#include "joycekit/hk.hpp"
#include "joycekit/linalg.hpp"

namespace joycekit::axiomcheck {

using tensorcore::FrameProvider;
using tensorcore::TangentPoint;
using tensorcore::ThreeForms;
using tensorcore::WModel;

struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    TangentPoint location;
    std::size_t samples = 0;
    double tolerance_used = 0.0;
    bool pass = false;
    std::string anchor; // human-readable label of the identity checked
};

inline ResidualReport make_report(std::string name, std::string anchor,
                                  double max_abs, TangentPoint location,
                                  std::size_t samples, double tol) {
    ResidualReport r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    r.max_abs = max_abs;
    r.location = std::move(location);
    r.samples = samples;
    r.tolerance_used = tol;
    r.pass = max_abs <= tol;
    return r;
}

// Reject evaluation when x sits inside the guard radius (guard * step) of the
// model's pole set; finite differences there are meaningless.
inline void require_clear(const FrameProvider& m, const cvec& x, double step,
                          double guard = 10.0) {
    m.require_regular(x);
    if (m.pole_distance(x) <= guard * step)
        throw PoleError("evaluation point within guard radius of a pole");
}

// ------------------------------------------------------------ heavenly system
// Entry (i, j) of the second-order system for W:
//   M_ij = W_{theta_i z_j} - W_{theta_j z_i}
//          - sum_{p,q} eta_pq W_{theta_i theta_p} W_{theta_j theta_q}.
// Computed for i < j and reflected with an exact sign so the result is
// antisymmetric by construction.
inline cmat heavenly2_residual(const WModel& model, const TangentPoint& pt) {
    model.require_regular(tensorcore::pack(pt));
    const std::size_t n = model.n();
    cmat hess = model.theta_hessian(pt.z, pt.theta);
    cmat mixed = zeros(n, n); // mixed[i][j] = W_{theta_i z_j}
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            mixed[i][j] = model.d2W_thz(pt.z, pt.theta, i, j);
    const cmat& eta = model.sym().eta;
    cmat m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx s = mixed[i][j] - mixed[j][i];
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q)
                    s -= eta[p][q] * hess[i][p] * hess[j][q];
            m[i][j] = s;
            m[j][i] = -s;
        }
    }
    return m;
}

// ------------------------------------------------------------ pencil flatness
// Max over i < j of |[h_i + eps^-1 v_i, h_j + eps^-1 v_j]| via central finite
// differences of the frame fields (eps may be the infinity marker).
inline double flatness_residual(const FrameProvider& model, const cvec& x,
                                cplx eps, double step = 1e-4) {
    require_clear(model, x, step);
    const std::size_t n = model.n();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto fi = [&](const cvec& y) { return model.pencil_frame(y, i, eps); };
        for (std::size_t j = i + 1; j < n; ++j) {
            auto fj = [&](const cvec& y) { return model.pencil_frame(y, j, eps); };
            cvec br = fd::lie_bracket(fi, fj, x, step);
            worst = std::max(worst, max_abs(br));
        }
    }
    return worst;
}

inline double flatness_residual(const FrameProvider& model,
                                const TangentPoint& pt, cplx eps,
                                double step = 1e-4) {
    return flatness_residual(model, tensorcore::pack(pt), eps, step);
}

// --------------------------------------------------------- symmetry relations
struct SymmetryResiduals {
    double translation = 0.0; // theta-Hessian invariance under theta + 2 pi i k
    double homogeneity = 0.0; // W(lambda z, theta) = lambda^-1 W(z, theta)
    double parity = 0.0;      // W(z, -theta) = -W(z, theta)
};

inline SymmetryResiduals symmetry_residuals(const WModel& model,
                                            const TangentPoint& pt,
                                            const std::vector<long>& k,
                                            cplx lambda) {
    const std::size_t n = model.n();
    if (k.size() != n) throw ConfigError("translation vector length != n");
    if (lambda == cplx(0.0)) throw ConfigError("lambda must be nonzero");
    cvec shifted = pt.theta;
    for (std::size_t i = 0; i < n; ++i) shifted[i] += kTwoPiI * cplx(double(k[i]));
    cvec scaled_z = pt.z;
    for (auto& z : scaled_z) z *= lambda;
    cvec neg_theta = pt.theta;
    for (auto& t : neg_theta) t = -t;

    model.require_regular(tensorcore::pack(pt));
    model.require_regular(tensorcore::pack({pt.z, shifted}));
    model.require_regular(tensorcore::pack({scaled_z, pt.theta}));
    model.require_regular(tensorcore::pack({pt.z, neg_theta}));

    SymmetryResiduals out;
    cmat h0 = model.theta_hessian(pt.z, pt.theta);
    cmat h1 = model.theta_hessian(pt.z, shifted);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.translation = std::max(out.translation, std::abs(h1[i][j] - h0[i][j]));
    cplx w = model.W(pt.z, pt.theta);
    out.homogeneity = std::abs(model.W(scaled_z, pt.theta) - w / lambda);
    out.parity = std::abs(model.W(pt.z, neg_theta) + w);
    return out;
}

// ------------------------------------------------------------------ closedness
// field(x) must return the full antisymmetric coefficient matrix F with
// form = (1/2) sum F_jk dx^j wedge dx^k.  The residual is the max over
// i < j < k of |d_i F_jk + d_j F_ki + d_k F_ij| (finite differences).
using FormField = std::function<cmat(const cvec&)>;

inline double exterior_derivative_max(const FormField& field, const cvec& x,
                                      double step = 1e-4) {
    const std::size_t dim = x.size();
    // dF[s][j][k] = d F_jk / d x_s
    std::vector<cmat> df(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        auto comp = [&](const cvec& y) { return field(y); };
        // fourth-order central difference on slot s, coefficient-wise
        double h = fd::scaled_step(step, x[s]);
        auto at = [&](double m) {
            cvec y = x;
            y[s] += m * h;
            return comp(y);
        };
        cmat f1 = at(1.0), f_1 = at(-1.0), f2 = at(2.0), f_2 = at(-2.0);
        cmat d = zeros(f1.size(), f1.empty() ? 0 : f1[0].size());
        for (std::size_t a = 0; a < d.size(); ++a)
            for (std::size_t b = 0; b < d[a].size(); ++b)
                d[a][b] = (8.0 * (f1[a][b] - f_1[a][b]) - (f2[a][b] - f_2[a][b])) /
                          (12.0 * h);
        df[s] = std::move(d);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j)
            for (std::size_t k = j + 1; k < dim; ++k)
                worst = std::max(worst,
                                 std::abs(df[i][j][k] + df[j][k][i] + df[k][i][j]));
    return worst;
}

enum class FormKind { plus, i_form, minus, pencil };

inline double closedness_residual(const WModel& model, const TangentPoint& pt,
                                  FormKind which, cplx eps0 = 1.0,
                                  cplx eps1 = 1.0, double step = 1e-4) {
    cvec x = tensorcore::pack(pt);
    require_clear(model, x, step);
    FormField field = [&](const cvec& y) {
        ThreeForms tf = tensorcore::two_forms(model, tensorcore::unpack(y, model.n()));
        switch (which) {
            case FormKind::plus: return tf.plus;
            case FormKind::i_form: return tf.i_form;
            case FormKind::minus: return tf.minus;
            case FormKind::pencil: return tensorcore::form_pencil(tf, eps0, eps1);
        }
        throw ConfigError("unknown form kind");
    };
    return exterior_derivative_max(field, x, step);
}

// -------------------------------------------------------------- lattice pairing
// True iff every entry of (2 pi i)^-1 eta over the coordinate lattice basis is
// an integer to 1e-9.
inline bool lattice_pairing_check(const FrameProvider& model, double tol = 1e-9) {
    if (!model.has_period_structure())
        throw NoPeriodStructure("model declares no period structure");
    const cmat eta = model.lattice_eta();
    for (const auto& row : eta)
        for (cplx e : row) {
            cplx s = e / kTwoPiI;
            if (std::abs(s - std::round(s.real())) > tol) return false;
        }
    return true;
}

// ------------------------------------------------------------ parallel operators
// Levi-Civita Christoffel symbols of the metric by finite differences, then
// the max component of the covariant derivatives of I, J, K.
inline double parallel_residual(const WModel& model, const TangentPoint& pt,
                                double step = 1e-4) {
    cvec x = tensorcore::pack(pt);
    require_clear(model, x, step);
    const std::size_t dim = model.dim();

    auto metric = [&](const cvec& y) { return tensorcore::hk_tensors(model, y).g; };
    tensorcore::HKTensors hk0 = tensorcore::hk_tensors(model, x);

    // dg[s][i][j] = d g_ij / d x_s (fourth-order central)
    std::vector<cmat> dg(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        double h = fd::scaled_step(step, x[s]);
        auto at = [&](double m) {
            cvec y = x;
            y[s] += m * h;
            return metric(y);
        };
        cmat f1 = at(1.0), f_1 = at(-1.0), f2 = at(2.0), f_2 = at(-2.0);
        cmat d = zeros(dim, dim);
        for (std::size_t a = 0; a < dim; ++a)
            for (std::size_t b = 0; b < dim; ++b)
                d[a][b] = (8.0 * (f1[a][b] - f_1[a][b]) - (f2[a][b] - f_2[a][b])) /
                          (12.0 * h);
        dg[s] = std::move(d);
    }

    if (linalg::lu_factor(hk0.g).singular)
        throw SingularMetric("metric is numerically degenerate");
    cmat ginv = linalg::inverse(hk0.g);

    // Gamma[s] has entries Gamma^a_{s b}.
    std::vector<cmat> gamma(dim, zeros(dim, dim));
    for (std::size_t s = 0; s < dim; ++s)
        for (std::size_t b = 0; b < dim; ++b)
            for (std::size_t a = 0; a < dim; ++a) {
                cplx sum = 0.0;
                for (std::size_t m = 0; m < dim; ++m)
                    sum += ginv[a][m] * 0.5 *
                           (dg[s][b][m] + dg[b][s][m] - dg[m][s][b]);
                gamma[s][a][b] = sum;
            }

    auto op_field = [&](int which) {
        return [&, which](const cvec& y) {
            tensorcore::HKTensors t = tensorcore::hk_tensors(model, y);
            return which == 0 ? t.I : which == 1 ? t.J : t.K;
        };
    };

    double worst = 0.0;
    for (int which = 0; which < 3; ++which) {
        auto op = op_field(which);
        cmat op0 = op(x);
        for (std::size_t s = 0; s < dim; ++s) {
            double h = fd::scaled_step(step, x[s]);
            auto at = [&](double m) {
                cvec y = x;
                y[s] += m * h;
                return op(y);
            };
            cmat f1 = at(1.0), f_1 = at(-1.0), f2 = at(2.0), f_2 = at(-2.0);
            for (std::size_t a = 0; a < dim; ++a)
                for (std::size_t b = 0; b < dim; ++b) {
                    cplx dI = (8.0 * (f1[a][b] - f_1[a][b]) - (f2[a][b] - f_2[a][b])) /
                              (12.0 * h);
                    cplx comm = 0.0;
                    for (std::size_t c = 0; c < dim; ++c)
                        comm += gamma[s][a][c] * op0[c][b] - op0[a][c] * gamma[s][c][b];
                    worst = std::max(worst, std::abs(dI + comm));
                }
        }
    }
    return worst;
}

} // namespace joycekit::axiomcheck
