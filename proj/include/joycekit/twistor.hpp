#pragma once
// Leaf flows of the connection pencil, tangency verification for the induced
// family of curves in the total space, and drift checks for functions that
// should descend to the leaf spaces.

#include <functional>
#include <utility>
#include <vector>

#include "joycekit/geometry.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/rk45.hpp"

namespace joycekit::twistor {

struct FlowOptions {
    double tol = 1e-10;
    double pole_guard = 1e-6; // abort when pole_distance drops below this
    std::size_t max_steps = 200000;
};

struct LeafPath {
    std::vector<std::pair<double, cvec>> samples; // (parameter, packed point)
    cplx eps{};
    cvec direction; // the vector u on the base
};

namespace detail {
inline rk45::Options rk_options(const tensorcore::FrameProvider& model,
                                const FlowOptions& opt) {
    rk45::Options ro;
    ro.tol = opt.tol;
    ro.max_steps = opt.max_steps;
    ro.forbidden = [&model, guard = opt.pole_guard](const cvec& y) {
        return model.pole_distance(y) < guard;
    };
    return ro;
}

// Pencil field along direction u; eps = 0 is the vertical-foliation
// convention (the eps -> 0 leaf space is the base itself).
inline cvec pencil_field(const tensorcore::FrameProvider& model, const cvec& x,
                         cplx eps, const cvec& u) {
    cvec out(model.dim(), cplx(0.0));
    for (std::size_t i = 0; i < model.n(); ++i) {
        if (u[i] == cplx(0.0)) continue;
        cvec f = (eps == cplx(0.0)) ? model.v_frame(x, i)
                                    : model.pencil_frame(x, i, eps);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += u[i] * f[k];
    }
    return out;
}
} // namespace detail

// Integrate dx/dt = (pencil field along u)(x) for the given time.
inline cvec leaf_flow_packed(const tensorcore::FrameProvider& model, cvec x,
                             cplx eps, const cvec& u, double time,
                             const FlowOptions& opt = {}) {
    if (u.size() != model.n()) throw ConfigError("direction length must equal n");
    auto field = [&](double, const cvec& y) {
        return detail::pencil_field(model, y, eps, u);
    };
    return rk45::integrate(field, std::move(x), 0.0, time,
                           detail::rk_options(model, opt));
}

// Same flow recorded at evenly spaced parameter values.
inline LeafPath leaf_flow_path(const tensorcore::FrameProvider& model, cvec x,
                               cplx eps, const cvec& u, double time,
                               std::size_t segments = 16,
                               const FlowOptions& opt = {}) {
    if (segments == 0) throw ConfigError("need at least one path segment");
    LeafPath path;
    path.eps = eps;
    path.direction = u;
    path.samples.emplace_back(0.0, x);
    for (std::size_t s = 1; s <= segments; ++s) {
        double t0 = time * double(s - 1) / double(segments);
        double t1 = time * double(s) / double(segments);
        auto field = [&](double, const cvec& y) {
            return detail::pencil_field(model, y, eps, u);
        };
        x = rk45::integrate(field, std::move(x), t0, t1,
                            detail::rk_options(model, opt));
        path.samples.emplace_back(t1, x);
    }
    return path;
}

// Tangent-point convenience wrapper for potential models.
inline tensorcore::TangentPoint leaf_flow(const tensorcore::WModel& model,
                                          const tensorcore::TangentPoint& pt,
                                          cplx eps, const cvec& u, double time,
                                          const FlowOptions& opt = {}) {
    cvec end = leaf_flow_packed(model, tensorcore::pack(pt), eps, u, time, opt);
    return tensorcore::unpack(end, model.n());
}

// Tangency residual of the curve c(eps) = (z / eps, theta) against the
// distribution spanned by the eps = 1 frame columns at the moving point.
// The curve derivative is compared with the displayed vertical field
//   V_theta_q = eps^-2 z_q + eps^-1 sum_{i,p} eta_pq z_i d2W/dtheta_i dtheta_p
// whose z-dependence (both the coefficients z_i and the Hessian argument) is
// taken at the original point, while the spanning frame lives at c(eps); the
// match across eps then rests on degree -1 homogeneity of the theta-Hessian.
// Returns the least-squares distance of c'(eps) - V from the span.
inline double twistor_line_residual(const tensorcore::WModel& model,
                                    const tensorcore::TangentPoint& x, cplx eps,
                                    cplx v_perturbation = cplx(0.0)) {
    if (!model.has_period_structure())
        throw NoPeriodStructure("tangency check needs the homogeneous structure");
    if (eps == cplx(0.0)) throw ZeroEpsilon("tangency curve undefined at eps = 0");
    const std::size_t m = model.n();

    tensorcore::TangentPoint c = x;
    for (auto& zi : c.z) zi /= eps;
    cvec cx = tensorcore::pack(c);
    model.require_regular(cx);

    // d = c'(eps) - V(c(eps))
    cvec d(2 * m, cplx(0.0));
    for (std::size_t i = 0; i < m; ++i) d[i] = -x.z[i] / (eps * eps);
    const auto& eta = model.sym().eta;
    for (std::size_t q = 0; q < m; ++q) {
        cplx v = x.z[q] / (eps * eps);
        for (std::size_t i = 0; i < m; ++i) {
            if (x.z[i] == cplx(0.0)) continue;
            for (std::size_t p = 0; p < m; ++p)
                v += x.z[i] * eta[p][q] * model.d2W_thth(x.z, x.theta, i, p) / eps;
        }
        if (q == 0) v += v_perturbation;
        d[m + q] -= v;
    }

    // span of the eps = 1 frame columns at c(eps)
    cmat basis = zeros(2 * m, m);
    for (std::size_t i = 0; i < m; ++i) {
        cvec col = model.pencil_frame(cx, i, cplx(1.0));
        for (std::size_t k = 0; k < 2 * m; ++k) basis[k][i] = col[k];
    }
    if (linalg::rank(basis) < m)
        throw DegenerateFrame("frame columns are linearly dependent");
    return linalg::lstsq(basis, d).second;
}

// Max drift of declared invariants along each frame direction of the eps
// foliation, integrated for the given time.
inline double descent_drift(const tensorcore::FrameProvider& model,
                            const cvec& x, cplx eps,
                            const std::vector<std::function<cplx(const cvec&)>>& invariants,
                            double time, const FlowOptions& opt = {}) {
    double worst = 0.0;
    for (std::size_t i = 0; i < model.n(); ++i) {
        cvec u(model.n(), cplx(0.0));
        u[i] = 1.0;
        cvec end = leaf_flow_packed(model, x, eps, u, time, opt);
        for (const auto& f : invariants)
            worst = std::max(worst, std::abs(f(end) - f(x)));
    }
    return worst;
}

} // namespace joycekit::twistor
