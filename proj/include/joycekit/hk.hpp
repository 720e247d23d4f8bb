#pragma once
// The hyperkaehler package: metric and quaternion triple in chart
// coordinates, derived from the frame decomposition.  This is a second,
// independent route to the two-forms (via the frame Gram matrices) used to
// cross-check the closed-form coordinate expressions.
//
// Frame-level data (order h_1..h_n, v_1..v_n):
//   g(h_i, v_j) = 1/2 omega_ij, g zero on h x h and v x v;
//   I h = i h, I v = -i v;  J h = -v, J v = h;  K h = i v, K v = i h.
// Coordinate tensors: for the basis-change matrix P = [h | v] (columns in
// chart components), bilinear forms transform as P^{-T} G P^{-1} and
// operators as P R P^{-1}.

#include "joycekit/geometry.hpp"
#include "joycekit/linalg.hpp"

namespace joycekit::tensorcore {

struct HKTensors {
    cmat g; // symmetric
    cmat I, J, K;
};

// Basis-change matrix: frame columns truncated to the 2n chart components
// (constrained chart models carry dependent coordinates beyond 2n).
inline cmat frame_matrix(const FrameProvider& model, const cvec& x) {
    const std::size_t m = model.n();
    cmat P = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        cvec h = model.h_frame(x, i);
        cvec v = model.v_frame(x, i);
        for (std::size_t k = 0; k < 2 * m; ++k) {
            P[k][i] = h[k];
            P[k][m + i] = v[k];
        }
    }
    return P;
}

namespace detail {

inline cmat gram_g(const cmat& om) {
    const std::size_t m = om.size();
    cmat G = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            G[i][m + j] = 0.5 * om[i][j];
            G[m + i][j] = -0.5 * om[i][j];
        }
    return G;
}

inline cmat gram_plus(const cmat& om) {
    const std::size_t m = om.size();
    cmat G = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) G[i][j] = om[i][j];
    return G;
}

inline cmat gram_I(const cmat& om) {
    const std::size_t m = om.size();
    const cplx half_i(0.0, 0.5);
    cmat G = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            G[i][m + j] = half_i * om[i][j];
            G[m + i][j] = half_i * om[i][j];
        }
    return G;
}

inline cmat gram_minus(const cmat& om) {
    const std::size_t m = om.size();
    cmat G = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) G[m + i][m + j] = om[i][j];
    return G;
}

inline cmat rep_I(std::size_t m) {
    cmat R = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        R[i][i] = cplx(0.0, 1.0);
        R[m + i][m + i] = cplx(0.0, -1.0);
    }
    return R;
}

inline cmat rep_J(std::size_t m) {
    cmat R = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        R[i][m + i] = 1.0;   // v_i coefficient feeds h_i
        R[m + i][i] = -1.0;  // h_i coefficient feeds -v_i
    }
    return R;
}

inline cmat rep_K(std::size_t m) {
    cmat R = zeros(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        R[i][m + i] = cplx(0.0, 1.0);
        R[m + i][i] = cplx(0.0, 1.0);
    }
    return R;
}

inline cmat congruence(const cmat& pinv, const cmat& G) {
    return linalg::matmul(linalg::transpose(pinv), linalg::matmul(G, pinv));
}

} // namespace detail

inline HKTensors hk_tensors(const FrameProvider& model, const cvec& x) {
    model.require_regular(x);
    const std::size_t m = model.n();
    cmat P = frame_matrix(model, x);
    cmat Pinv = linalg::inverse(P);
    HKTensors t;
    t.g = detail::congruence(Pinv, detail::gram_g(model.sym().omega));
    t.I = linalg::matmul(P, linalg::matmul(detail::rep_I(m), Pinv));
    t.J = linalg::matmul(P, linalg::matmul(detail::rep_J(m), Pinv));
    t.K = linalg::matmul(P, linalg::matmul(detail::rep_K(m), Pinv));
    return t;
}

// Two-forms through the frame Gram route; valid for any provider, including
// constrained chart models where no potential exists in the working chart.
inline ThreeForms gram_two_forms(const FrameProvider& model, const cvec& x) {
    model.require_regular(x);
    cmat P = frame_matrix(model, x);
    cmat Pinv = linalg::inverse(P);
    const auto& om = model.sym().omega;
    return ThreeForms{detail::congruence(Pinv, detail::gram_plus(om)),
                      detail::congruence(Pinv, detail::gram_I(om)),
                      detail::congruence(Pinv, detail::gram_minus(om))};
}

// Max deviation of the operator triple from the quaternion algebra:
// I^2 = J^2 = K^2 = -Id and I J = K.
inline double quaternion_residual(const HKTensors& t) {
    const std::size_t d = t.I.size();
    cmat id = identity(d);
    auto dev_sq = [&](const cmat& R) {
        cmat sq = linalg::matmul(R, R);
        double w = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                w = std::max(w, std::abs(sq[i][j] + id[i][j]));
        return w;
    };
    double worst = std::max({dev_sq(t.I), dev_sq(t.J), dev_sq(t.K)});
    cmat ij = linalg::matmul(t.I, t.J);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            worst = std::max(worst, std::abs(ij[i][j] - t.K[i][j]));
    return worst;
}

// Max deviation of the metric from symmetry and from invariance under the
// operator triple: g(R u, R w) = g(u, w) for R in {I, J, K}.
inline double metric_invariance_residual(const HKTensors& t) {
    const std::size_t d = t.g.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            worst = std::max(worst, std::abs(t.g[i][j] - t.g[j][i]));
    for (const cmat* R : {&t.I, &t.J, &t.K}) {
        cmat m = linalg::matmul(linalg::transpose(*R),
                                linalg::matmul(t.g, *R));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                worst = std::max(worst, std::abs(m[i][j] - t.g[i][j]));
    }
    return worst;
}

} // namespace joycekit::tensorcore
