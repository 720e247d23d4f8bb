#pragma once
// Time-dependent Hamiltonian systems over a complex time space: the flow
// pencil k_eps, strong-integrability residuals, extraction of a Hamiltonian
// system from a geometric model along a Lagrangian cut of the horizontal
// leaf space, and monodromy transport for the deformed cubic oscillator.
//
// State packing: a system with d times and m fibre Darboux pairs uses flat
// vectors (t_0..t_{d-1}, q_0..q_{m-1}, p_0..p_{m-1}).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "joycekit/a2.hpp"
#include "joycekit/cubic.hpp"
#include "joycekit/elliptic.hpp"
#include "joycekit/errors.hpp"
#include "joycekit/fd.hpp"
#include "joycekit/geometry.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/rk45.hpp"
#include "joycekit/types.hpp"
#include "joycekit/weierstrass.hpp"

namespace joycekit::hamilton {

using ScalarFn = std::function<cplx(const cvec&)>;

struct HamiltonianSystem {
    std::size_t d = 0;       // number of time coordinates
    std::size_t m = 0;       // number of fibre Darboux pairs
    std::vector<ScalarFn> H; // H[i](state), one Hamiltonian per time
    std::string origin;      // provenance tag for reports

    std::size_t state_size() const { return d + 2 * m; }
    std::size_t t_slot(std::size_t i) const { return i; }
    std::size_t q_slot(std::size_t j) const { return d + j; }
    std::size_t p_slot(std::size_t j) const { return d + m + j; }
};

struct KFlowOptions {
    double tol = 1e-9;     // integrator tolerance for k flows
    double fd_step = 3e-3; // stencil step for dH/dq, dH/dp
    std::size_t max_steps = 200000;
};

namespace detail {

inline void require_state(const HamiltonianSystem& sys, const cvec& s) {
    if (sys.H.size() != sys.d)
        throw ConfigError("system has " + std::to_string(sys.H.size()) +
                          " Hamiltonians for " + std::to_string(sys.d) + " times");
    if (s.size() != sys.state_size())
        throw ConfigError("state length " + std::to_string(s.size()) +
                          " does not match d + 2m = " +
                          std::to_string(sys.state_size()));
}

// Evaluate H_i, converting model-level failures into a domain-exit signal:
// a pole or off-chart point reached by a flow means the flow left the
// declared domain of the system.
inline cplx eval_H(const HamiltonianSystem& sys, std::size_t i, const cvec& s) {
    try {
        return sys.H[i](s);
    } catch (const DomainExit&) {
        throw;
    } catch (const Error& e) {
        throw DomainExit(std::string("Hamiltonian evaluation left the domain: ") +
                         e.what());
    }
}

} // namespace detail

// Vector field of the pencil member k_eps in the time direction i:
//   d/dt_i + eps^-1 (dH_i/dp_j d/dq_j - dH_i/dq_j d/dp_j).
// The infinite member is pure time translation.
inline cvec k_field(const HamiltonianSystem& sys, cplx eps, const cvec& s,
                    std::size_t i, const KFlowOptions& opt = {}) {
    detail::require_state(sys, s);
    if (i >= sys.d) throw ConfigError("time index out of range");
    cvec out(sys.state_size(), cplx(0.0));
    out[sys.t_slot(i)] = 1.0;
    if (is_inf_eps(eps)) return out;
    if (eps == cplx(0.0))
        throw ZeroEpsilon("k flow needs eps != 0; use the infinite member for "
                          "pure time translation");
    auto Hi = [&](const cvec& y) { return detail::eval_H(sys, i, y); };
    for (std::size_t j = 0; j < sys.m; ++j) {
        const cplx dHdq = fd::d1(Hi, s, sys.q_slot(j), opt.fd_step);
        const cplx dHdp = fd::d1(Hi, s, sys.p_slot(j), opt.fd_step);
        out[sys.q_slot(j)] += dHdp / eps;
        out[sys.p_slot(j)] -= dHdq / eps;
    }
    return out;
}

// Integrate the k_eps flow in time direction i for the given duration.
inline cvec k_flow(const HamiltonianSystem& sys, cplx eps, cvec start,
                   std::size_t i, double duration,
                   const KFlowOptions& opt = {}) {
    detail::require_state(sys, start);
    if (i >= sys.d) throw ConfigError("time index out of range");
    if (is_inf_eps(eps)) {
        start[sys.t_slot(i)] += duration;
        return start;
    }
    rk45::Options ro;
    ro.tol = opt.tol;
    ro.max_steps = opt.max_steps;
    auto field = [&](double, const cvec& y) { return k_field(sys, eps, y, i, opt); };
    return rk45::integrate(field, std::move(start), 0.0, duration, ro);
}

// One explicit Euler step of k_eps; deterministic single-stage arithmetic so
// step-ordering defects scale cleanly with the step size.
inline cvec k_euler_step(const HamiltonianSystem& sys, cplx eps, const cvec& s,
                         std::size_t i, double h, const KFlowOptions& opt = {}) {
    cvec f = k_field(sys, eps, s, i, opt);
    cvec y = s;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += h * f[k];
    return y;
}

// Max-norm mismatch between (step i then step j) and (step j then step i)
// with single Euler steps of size h.  For a strongly-integrable system the
// defect is O(h^3): the O(h^2) commutator term cancels.
inline double k_commutation_defect(const HamiltonianSystem& sys, cplx eps,
                                   const cvec& s, std::size_t i, std::size_t j,
                                   double h, const KFlowOptions& opt = {}) {
    cvec ij = k_euler_step(sys, eps, k_euler_step(sys, eps, s, i, h, opt), j, h, opt);
    cvec ji = k_euler_step(sys, eps, k_euler_step(sys, eps, s, j, h, opt), i, h, opt);
    double worst = 0.0;
    for (std::size_t k = 0; k < ij.size(); ++k)
        worst = std::max(worst, std::abs(ij[k] - ji[k]));
    return worst;
}

// Canonical bracket {H_i, H_j} = sum_l (dH_i/dq_l dH_j/dp_l -
// dH_i/dp_l dH_j/dq_l), derivatives by central differences.
inline cplx poisson_bracket(const HamiltonianSystem& sys, std::size_t i,
                            std::size_t j, const cvec& s, double fd_step = 3e-3) {
    detail::require_state(sys, s);
    if (i >= sys.d || j >= sys.d) throw ConfigError("time index out of range");
    auto Hi = [&](const cvec& y) { return detail::eval_H(sys, i, y); };
    auto Hj = [&](const cvec& y) { return detail::eval_H(sys, j, y); };
    cplx sum(0.0);
    for (std::size_t l = 0; l < sys.m; ++l) {
        sum += fd::d1(Hi, s, sys.q_slot(l), fd_step) *
                   fd::d1(Hj, s, sys.p_slot(l), fd_step) -
               fd::d1(Hi, s, sys.p_slot(l), fd_step) *
                   fd::d1(Hj, s, sys.q_slot(l), fd_step);
    }
    return sum;
}

struct IntegrabilityResidual {
    double poisson = 0.0; // max_{i<j} |{H_i, H_j}|
    double curl = 0.0;    // max_{i<j} |dH_i/dt_j - dH_j/dt_i|
};

// Residuals of the strong-integrability conditions at a point.  Vacuously
// (0, 0) for a single-time system.
inline IntegrabilityResidual strong_integrability_residual(
    const HamiltonianSystem& sys, const cvec& s, double fd_step = 3e-3) {
    detail::require_state(sys, s);
    IntegrabilityResidual r;
    for (std::size_t i = 0; i < sys.d; ++i) {
        auto Hi = [&](const cvec& y) { return detail::eval_H(sys, i, y); };
        for (std::size_t j = i + 1; j < sys.d; ++j) {
            auto Hj = [&](const cvec& y) { return detail::eval_H(sys, j, y); };
            r.poisson = std::max(r.poisson,
                                 std::abs(poisson_bracket(sys, i, j, s, fd_step)));
            const cplx curl_ij = fd::d1(Hi, s, sys.t_slot(j), fd_step) -
                                 fd::d1(Hj, s, sys.t_slot(i), fd_step);
            r.curl = std::max(r.curl, std::abs(curl_ij));
        }
    }
    return r;
}

// Spot check that the Hamiltonians are holomorphic at a state: compares the
// derivative along the real axis of each packed coordinate with the
// derivative along the imaginary axis; both agree for a holomorphic
// function, so the defect estimates |d/d(conjugate coordinate)|.
inline double holomorphy_defect(const HamiltonianSystem& sys, const cvec& s,
                                double fd_step = 1e-4) {
    detail::require_state(sys, s);
    double worst = 0.0;
    for (std::size_t i = 0; i < sys.d; ++i) {
        auto Hi = [&](const cvec& y) { return detail::eval_H(sys, i, y); };
        for (std::size_t k = 0; k < s.size(); ++k) {
            const double h = fd::scaled_step(fd_step, s[k]);
            const cplx d_re = fd::d1(Hi, s, k, fd_step);
            cvec y = s;
            auto g = [&](double t) {
                y[k] = s[k] + cplx(0.0, t);
                return Hi(y);
            };
            const cplx d_im = fd::d1_dir(g, h) / cplx(0.0, 1.0);
            worst = std::max(worst, std::abs(d_re - d_im));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Extraction of a Hamiltonian system from a geometric model.
// ---------------------------------------------------------------------------

// Declares which base coordinate slots are times and which are the paired
// momenta, with omega = sum_i dt_i ^ ds_i.
struct CotangentStructure {
    std::vector<std::size_t> times;
    std::vector<std::size_t> momenta;
};

// A Lagrangian cut of the horizontal leaf space at the infinite pencil
// member, given by level sets of invariant scalar functions, together with
// the Darboux parametrization of the seed fibre that the relative two-form
// induces.
struct LagrangianCut {
    std::vector<ScalarFn> invariants; // constant along every horizontal frame
    cvec levels;                      // target level of each invariant
    // Maps fibre Darboux labels (Q, P) to a packed point carrying the seed's
    // time coordinates and sitting on the cut locus.
    std::function<cvec(const cvec&, const cvec&)> fibre_point;
    cvec seed_Q, seed_P; // labels of the seed point itself
};

struct ExtractOptions {
    cplx working_eps{1.0};      // pencil member the rank test also runs at
    double on_y_tol = 1e-8;     // |invariant(seed) - level| gate
    double chart_tol = 1e-6;    // fibre_point(seed labels) vs seed gate
    double rank_tol = 1e-8;     // relative tolerance of the rank test
    double transport_tol = 1e-12; // integrator tolerance for transports
    double pole_guard = 1e-8;   // abort transports this close to a pole
    double fd_step = 1e-4;      // stencil step for invariant gradients
    std::size_t max_steps = 200000;
};

namespace detail {

// Directional derivative of a scalar function along a tangent vector.
template <typename F>
cplx dir_deriv(F&& f, const cvec& x, const cvec& dir, double h) {
    const double scale = max_abs(dir);
    if (scale == 0.0) return cplx(0.0);
    const double t = h * std::max(1.0, max_abs(x)) / scale;
    cvec y(x.size());
    auto g = [&](double s) {
        for (std::size_t k = 0; k < y.size(); ++k) y[k] = x[k] + s * dir[k];
        return f(y);
    };
    return fd::d1_dir(g, t);
}

// Coefficients alpha[i][j] making h(t_i) + sum_j alpha[i][j] h(s_j) tangent
// to the cut locus.  The invariants are constant along the horizontal
// frames, so tangency of the eps-pencil lift constrains only the vertical
// parts: solve dInv_k(v(s_j)) alpha[i][j] = -dInv_k(v(t_i)).
inline cmat lift_coefficients(const tensorcore::FrameProvider& model,
                              const CotangentStructure& cot,
                              const LagrangianCut& cut, const cvec& x,
                              double fd_step) {
    const std::size_t d = cot.times.size();
    const std::size_t m = cot.momenta.size();
    cmat A = zeros(m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j)
            A[k][j] = dir_deriv(cut.invariants[k], x,
                                model.v_frame(x, cot.momenta[j]), fd_step);
    linalg::LU f = linalg::lu_factor(A);
    if (f.singular)
        throw TransversalityFailure(
            "cut invariants are degenerate along the momentum verticals");
    cmat alpha = zeros(d, m);
    for (std::size_t i = 0; i < d; ++i) {
        cvec rhs(m);
        for (std::size_t k = 0; k < m; ++k)
            rhs[k] = -dir_deriv(cut.invariants[k], x,
                                model.v_frame(x, cot.times[i]), fd_step);
        cvec a = linalg::lu_solve(f, rhs);
        for (std::size_t j = 0; j < m; ++j) alpha[i][j] = a[j];
    }
    return alpha;
}

// Flow along the lifted infinite-member field sum_i dt_i (h(t_i) +
// sum_j alpha_ij h(s_j)) for unit parameter; this is the transport that
// carries the seed-fibre labels to other time slices.
inline cvec transport_inf(const tensorcore::FrameProvider& model,
                          const CotangentStructure& cot,
                          const LagrangianCut& cut, cvec x, const cvec& dt,
                          const ExtractOptions& opt) {
    bool moving = false;
    for (const cplx& c : dt)
        if (c != cplx(0.0)) { moving = true; break; }
    if (!moving) return x;
    const std::size_t d = cot.times.size();
    const std::size_t m = cot.momenta.size();
    auto field = [&](double, const cvec& y) {
        cmat alpha = lift_coefficients(model, cot, cut, y, opt.fd_step);
        cvec out(model.dim(), cplx(0.0));
        for (std::size_t i = 0; i < d; ++i) {
            if (dt[i] == cplx(0.0)) continue;
            cvec hi = model.h_frame(y, cot.times[i]);
            for (std::size_t k = 0; k < out.size(); ++k) out[k] += dt[i] * hi[k];
            for (std::size_t j = 0; j < m; ++j) {
                if (alpha[i][j] == cplx(0.0)) continue;
                cvec hj = model.h_frame(y, cot.momenta[j]);
                for (std::size_t k = 0; k < out.size(); ++k)
                    out[k] += dt[i] * alpha[i][j] * hj[k];
            }
        }
        return out;
    };
    rk45::Options ro;
    ro.tol = opt.transport_tol;
    ro.max_steps = opt.max_steps;
    ro.forbidden = [&model, guard = opt.pole_guard](const cvec& y) {
        return model.pole_distance(y) < guard;
    };
    return rk45::integrate(field, std::move(x), 0.0, 1.0, ro);
}

// Fourth-order tangent of the fibre parametrization in one label.
inline cvec chart_tangent(const LagrangianCut& cut, std::size_t j, bool in_P,
                          double fd_step) {
    const cvec& base = in_P ? cut.seed_P : cut.seed_Q;
    const double h = fd::scaled_step(fd_step, base[j]);
    auto at = [&](double t) {
        cvec Q = cut.seed_Q, P = cut.seed_P;
        (in_P ? P : Q)[j] += t;
        return cut.fibre_point(Q, P);
    };
    cvec fp2 = at(2.0 * h), fp1 = at(h), fm1 = at(-h), fm2 = at(-2.0 * h);
    cvec out(fp1.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (-fp2[k] + 8.0 * fp1[k] - 8.0 * fm1[k] + fm2[k]) / (12.0 * h);
    return out;
}

} // namespace detail

// Public entry to the trivializing transport: carry a point of the cut locus
// across the base by the time increments dt along the lifted infinite-member
// field.
inline cvec transport_along_cut(const tensorcore::FrameProvider& model,
                                const CotangentStructure& cot,
                                const LagrangianCut& cut, cvec x,
                                const cvec& dt, const ExtractOptions& opt = {}) {
    return detail::transport_inf(model, cot, cut, std::move(x), dt, opt);
}

// Build the Hamiltonian system induced on the cut locus Y (joint level set
// of the invariants): fibre Darboux labels come from the cut's seed-fibre
// parametrization, transport between time slices follows the lifted
// infinite-member flow, and H_i is the momentum coordinate s_i read at the
// transported point.  The rank precondition is tested at the unit pencil
// member and at the declared working member.
inline HamiltonianSystem extract_from_joyce(const tensorcore::FrameProvider& model,
                                            const CotangentStructure& cot,
                                            const LagrangianCut& cut,
                                            const cvec& seed,
                                            const ExtractOptions& opt = {}) {
    const std::size_t n = model.n();
    const std::size_t d = cot.times.size();
    if (d == 0 || cot.momenta.size() != d)
        throw ConfigError("cotangent structure needs matching nonempty time "
                          "and momentum slot lists");
    if (2 * d != n)
        throw ConfigError("time and momentum slots must partition the base "
                          "coordinates");
    std::vector<bool> seen(n, false);
    for (std::size_t s : cot.times) {
        if (s >= n || seen[s]) throw ConfigError("invalid time slot");
        seen[s] = true;
    }
    for (std::size_t s : cot.momenta) {
        if (s >= n || seen[s]) throw ConfigError("invalid momentum slot");
        seen[s] = true;
    }
    const cmat& om = model.sym().omega;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const cplx want = (i == j) ? cplx(1.0) : cplx(0.0);
            if (std::abs(om[cot.times[i]][cot.momenta[j]] - want) > 1e-12 ||
                std::abs(om[cot.times[i]][cot.times[j]]) > 1e-12 ||
                std::abs(om[cot.momenta[i]][cot.momenta[j]]) > 1e-12)
                throw ConfigError("declared time/momentum slots are not a "
                                  "Darboux pairing for omega");
        }
    if (cut.invariants.size() != d || cut.levels.size() != d)
        throw ConfigError("a Lagrangian cut needs exactly one invariant per "
                          "momentum slot");
    if (seed.size() != model.dim())
        throw ConfigError("seed has wrong packed dimension");
    if (!cut.fibre_point || cut.seed_Q.size() != d || cut.seed_P.size() != d)
        throw ConfigError("Lagrangian cut carries no seed-fibre "
                          "parametrization");

    for (std::size_t k = 0; k < d; ++k) {
        const cplx val = cut.invariants[k](seed);
        const double scale = std::max(1.0, std::abs(cut.levels[k]));
        if (std::abs(val - cut.levels[k]) > opt.on_y_tol * scale)
            throw NotOnY("seed invariant " + std::to_string(k) +
                         " misses its declared level");
    }

    cvec probe = cut.fibre_point(cut.seed_Q, cut.seed_P);
    if (probe.size() != seed.size())
        throw ConfigError("fibre parametrization has wrong packed dimension");
    double mismatch = 0.0;
    for (std::size_t k = 0; k < seed.size(); ++k)
        mismatch = std::max(mismatch, std::abs(probe[k] - seed[k]));
    if (mismatch > opt.chart_tol * std::max(1.0, max_abs(seed)))
        throw ConfigError("fibre parametrization does not reproduce the seed");

    // Rank test: the leaf distribution together with the fibre tangents must
    // span n + 2d directions; otherwise the fibre fails to embed into the
    // leaf space and no Hamiltonian reduction exists.
    std::vector<cvec> fibre_tangents;
    for (std::size_t j = 0; j < d; ++j) {
        fibre_tangents.push_back(detail::chart_tangent(cut, j, false, opt.fd_step));
        fibre_tangents.push_back(detail::chart_tangent(cut, j, true, opt.fd_step));
    }
    auto rank_at = [&](cplx eps) {
        cmat cols = zeros(model.dim(), n + 2 * d);
        for (std::size_t i = 0; i < n; ++i) {
            cvec f = model.pencil_frame(seed, i, eps);
            for (std::size_t k = 0; k < f.size(); ++k) cols[k][i] = f[k];
        }
        for (std::size_t j = 0; j < fibre_tangents.size(); ++j)
            for (std::size_t k = 0; k < seed.size(); ++k)
                cols[k][n + j] = fibre_tangents[j][k];
        return linalg::rank(cols, opt.rank_tol);
    };
    const std::size_t want = n + 2 * d;
    if (rank_at(cplx(1.0)) < want)
        throw TransversalityFailure(
            "fibre directions are tangent to the unit-member leaf "
            "distribution at the seed");
    if (opt.working_eps != cplx(1.0) && !is_inf_eps(opt.working_eps) &&
        rank_at(opt.working_eps) < want)
        throw TransversalityFailure(
            "fibre directions are tangent to the working-member leaf "
            "distribution at the seed");

    // Fail fast if the lift is not solvable at the seed.
    detail::lift_coefficients(model, cot, cut, seed, opt.fd_step);

    cvec t_seed(d);
    for (std::size_t i = 0; i < d; ++i) t_seed[i] = seed[cot.times[i]];

    HamiltonianSystem sys;
    sys.d = d;
    sys.m = d;
    sys.origin = "extract_from_joyce";
    const tensorcore::FrameProvider* mp = &model; // caller keeps the model alive
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t s_slot = cot.momenta[i];
        sys.H.push_back([mp, cot, cut, opt, t_seed, d, s_slot](const cvec& state) {
            cvec Q(d), P(d), dt(d);
            for (std::size_t k = 0; k < d; ++k) {
                dt[k] = state[k] - t_seed[k];
                Q[k] = state[d + k];
                P[k] = state[2 * d + k];
            }
            cvec x = cut.fibre_point(Q, P);
            x = detail::transport_inf(*mp, cot, cut, std::move(x), dt, opt);
            return x[s_slot];
        });
    }
    return sys;
}

// Lagrangian cut fixing the vertical coordinates at the given base slots; the
// complementary vertical coordinates carry the Q labels and the momentum base
// coordinates the P labels.
inline LagrangianCut theta_cut(const tensorcore::WModel& model,
                               const CotangentStructure& cot,
                               const std::vector<std::size_t>& fixed_theta_slots,
                               const tensorcore::TangentPoint& seed,
                               const std::optional<cvec>& levels = std::nullopt) {
    const std::size_t n = model.n();
    const std::size_t d = cot.times.size();
    if (fixed_theta_slots.size() != d)
        throw ConfigError("need exactly one fixed vertical slot per momentum "
                          "slot");
    std::vector<bool> fixed(n, false);
    for (std::size_t s : fixed_theta_slots) {
        if (s >= n || fixed[s]) throw ConfigError("invalid fixed vertical slot");
        fixed[s] = true;
    }
    std::vector<std::size_t> free_slots;
    for (std::size_t s = 0; s < n; ++s)
        if (!fixed[s]) free_slots.push_back(s);

    LagrangianCut cut;
    for (std::size_t s : fixed_theta_slots)
        cut.invariants.push_back(
            [n, s](const cvec& x) { return x[n + s]; });
    if (levels) {
        if (levels->size() != d) throw ConfigError("wrong number of levels");
        cut.levels = *levels;
    } else {
        for (std::size_t s : fixed_theta_slots)
            cut.levels.push_back(seed.theta[s]);
    }
    const cvec z0 = seed.z, th0 = seed.theta;
    const cvec lv = cut.levels;
    const std::vector<std::size_t> fixed_slots = fixed_theta_slots;
    const std::vector<std::size_t> momenta = cot.momenta;
    cut.fibre_point = [n, z0, th0, lv, fixed_slots, free_slots,
                       momenta](const cvec& Q, const cvec& P) {
        cvec z = z0, th = th0;
        for (std::size_t k = 0; k < fixed_slots.size(); ++k)
            th[fixed_slots[k]] = lv[k];
        for (std::size_t j = 0; j < free_slots.size(); ++j) th[free_slots[j]] = Q[j];
        for (std::size_t j = 0; j < momenta.size(); ++j) z[momenta[j]] = P[j];
        cvec x = z;
        x.insert(x.end(), th.begin(), th.end());
        return x;
    };
    for (std::size_t j = 0; j < free_slots.size(); ++j)
        cut.seed_Q.push_back(seed.theta[free_slots[j]]);
    for (std::size_t j = 0; j < d; ++j)
        cut.seed_P.push_back(seed.z[cot.momenta[j]]);
    return cut;
}

// Lagrangian cut for the elliptic-base chart: the level set of the second
// descent invariant, with the seed fibre parametrized through the
// uniformizing coordinate.  Labels are (Q, P) = (-u, b).
inline LagrangianCut a2_extraction_cut(const models::A2State& seed, cplx u_seed,
                                       const std::optional<cplx>& level =
                                           std::nullopt) {
    seed.validate();
    const elliptic::Curve c = seed.curve();
    elliptic::WeierstrassP wp(c.a, c.b);
    const auto v = wp.eval(u_seed);
    const double scale = std::max(1.0, std::max(std::abs(seed.q), std::abs(seed.p)));
    if (std::abs(v.p - seed.q) > 1e-8 * scale ||
        std::abs(v.dp / 2.0 - seed.p) > 1e-8 * scale)
        throw ConfigError("u_seed does not uniformize the seed state");
    const cplx lvl = level ? *level : seed.r / (2.0 * seed.p);

    LagrangianCut cut;
    cut.invariants.push_back([](const cvec& x) {
        if (x[4] == cplx(0.0)) throw PoleAtPZero("invariant needs p != 0");
        return x[3] / (2.0 * x[4]);
    });
    cut.levels = {lvl};
    const cplx a0 = seed.a;
    cut.fibre_point = [a0, lvl](const cvec& Q, const cvec& P) {
        const cplx u = -Q[0];
        const cplx b = P[0];
        elliptic::WeierstrassP w(a0, b);
        const auto val = w.eval(u);
        const cplx q = val.p;
        const cplx p = val.dp / 2.0;
        return cvec{a0, b, q, 2.0 * lvl * p, p};
    };
    cut.seed_Q = {-u_seed};
    cut.seed_P = {seed.b};
    return cut;
}

// ---------------------------------------------------------------------------
// Deformed cubic oscillator.
// ---------------------------------------------------------------------------

struct OscillatorProblem {
    models::A2State state;
    cplx eps{1.0};
};

inline cplx oscillator_q0(const models::A2State& s, cplx x) {
    return x * x * x + s.a * x + s.b;
}

inline cplx oscillator_q1(const models::A2State& s, cplx x) {
    if (x == s.q) throw PoleError("potential pole at x = q");
    return s.p / (x - s.q) + s.r;
}

inline cplx oscillator_q2(const models::A2State& s, cplx x) {
    if (x == s.q) throw PoleError("potential pole at x = q");
    const cplx t = x - s.q;
    return 3.0 / (4.0 * t * t) + s.r / (2.0 * s.p * t) +
           s.r * s.r / (4.0 * s.p * s.p);
}

inline cplx oscillator_potential(const OscillatorProblem& pr, cplx x) {
    if (pr.eps == cplx(0.0))
        throw ZeroEpsilon("oscillator potential needs eps != 0");
    if (is_inf_eps(pr.eps))
        throw ConfigError("oscillator potential needs a finite eps");
    return oscillator_q0(pr.state, x) / (pr.eps * pr.eps) +
           oscillator_q1(pr.state, x) / pr.eps + oscillator_q2(pr.state, x);
}

struct Loop {
    cplx center;
    double radius = 1.0;
};

struct MonodromyOptions {
    double tol = 1e-12;
    double guard = 1e-3; // minimum distance of the contour from marked points
    std::size_t max_steps = 200000;
};

// Transport the fundamental solution of y'' = Q(x) y (companion first-order
// system) counterclockwise around the loop, starting from the base point
// center + radius.  Columns are the continued basis solutions expressed in
// the (y, y') frame at the base point, so the result is the monodromy matrix
// and its determinant is 1 by Wronskian constancy.
inline cmat oscillator_monodromy(const OscillatorProblem& pr, const Loop& loop,
                                 const MonodromyOptions& opt = {}) {
    pr.state.validate();
    if (pr.eps == cplx(0.0))
        throw ZeroEpsilon("oscillator monodromy needs eps != 0");
    if (is_inf_eps(pr.eps))
        throw ConfigError("oscillator monodromy needs a finite eps");
    if (!(loop.radius > 0.0)) throw ConfigError("loop radius must be positive");
    std::vector<cplx> marked = {pr.state.q};
    for (const cplx& root : cubic::roots(pr.state.a, pr.state.b))
        marked.push_back(root);
    for (const cplx& s : marked) {
        const double dist = std::abs(std::abs(s - loop.center) - loop.radius);
        if (dist < opt.guard)
            throw LoopThroughSingularity(
                "contour passes within the guard distance of a marked point");
    }
    auto field = [&](double t, const cvec& y) {
        const cplx x = loop.center +
                       loop.radius * std::exp(kTwoPiI * t);
        const cplx xp = kTwoPiI * (x - loop.center);
        const cplx Q = oscillator_potential(pr, x);
        return cvec{xp * y[2], xp * y[3], xp * Q * y[0], xp * Q * y[1]};
    };
    rk45::Options ro;
    ro.tol = opt.tol;
    ro.max_steps = opt.max_steps;
    cvec y = {cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
    y = rk45::integrate(field, std::move(y), 0.0, 1.0, ro);
    return cmat{{y[0], y[1]}, {y[2], y[3]}};
}

} // namespace joycekit::hamilton
