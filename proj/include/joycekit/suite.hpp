#pragma once
// Registered check suites: every structural identity of the library exposed
// as a named residual check over deterministically sampled points.  Points
// come from a low-discrepancy sequence in bounded polydiscs with pole-guard
// rejection, so a fixed seed reproduces the same evaluations bit for bit.
// The runner fans the checks across worker threads and assembles the report
// single-threaded in registration order.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "joycekit/a2.hpp"
#include "joycekit/axioms.hpp"
#include "joycekit/cubic.hpp"
#include "joycekit/elliptic.hpp"
#include "joycekit/errors.hpp"
#include "joycekit/geometry.hpp"
#include "joycekit/halton.hpp"
#include "joycekit/hamilton.hpp"
#include "joycekit/hk.hpp"
#include "joycekit/joycefn.hpp"
#include "joycekit/linalg.hpp"
#include "joycekit/report.hpp"
#include "joycekit/twistor.hpp"
#include "joycekit/types.hpp"
#include "joycekit/wmodels.hpp"

namespace joycekit::cli {

struct SuiteCheck {
    std::string name;
    std::string anchor;
    std::function<axiomcheck::ResidualReport(const SuiteConfig&)> run;
};

namespace detail {

using axiomcheck::ResidualReport;
using tensorcore::TangentPoint;

// Track the worst residual together with the sample that produced it.
struct Worst {
    double value = 0.0;
    TangentPoint where;
    std::size_t evals = 0;

    void feed(double v, const TangentPoint& loc) {
        ++evals;
        if (evals == 1 || v > value) {
            value = v;
            where = loc;
        }
    }
};

inline std::unique_ptr<tensorcore::WModel> make_wmodel(const std::string& id) {
    if (id == "flat") return std::make_unique<models::FlatModel>(2);
    if (id == "a1") return std::make_unique<models::A1Model>();
    if (id == "synthetic-counterexample")
        return std::make_unique<models::SyntheticNonHeavenly>();
    throw ConfigError("no potential model with id '" + id + "'");
}

// Sample points of a potential-model chart.  The doubled logarithmic chart
// keeps Re z_0 in a sector away from the pole z_0 = 0 and the branch cut, so
// that scaling arguments z_0 / eps used by the tangency check stay on the
// principal branch for the eps values the suite visits.
inline std::vector<TangentPoint> sample_points(const std::string& id,
                                               std::size_t count,
                                               std::uint64_t seed) {
    halton::Sampler smp(seed);
    std::vector<TangentPoint> pts;
    pts.reserve(count);
    const bool sector = (id == "a1");
    std::size_t tries = 0;
    while (pts.size() < count) {
        if (++tries > 200 * count + 1000)
            throw ConfigError("rejection sampling exhausted for model '" + id + "'");
        // One sequence point per sample point: drawing z and theta from
        // separate sequence points steps the index by two per iteration, and
        // the base-2 coordinate of every even index is < 1/2, which would
        // alias against the sector rejection below for half the seeds.
        const auto u = smp.next(8);
        auto box = [&](std::size_t k, double hw) {
            return cplx((2.0 * u[2 * k] - 1.0) * hw,
                        (2.0 * u[2 * k + 1] - 1.0) * hw);
        };
        cvec z = {box(0, 1.2), box(1, 1.2)};
        cvec th = {box(2, 1.0), box(3, 1.0)};
        if (sector && z[0].real() <= 0.35) continue;
        pts.push_back({std::move(z), std::move(th)});
    }
    return pts;
}

// Finite pencil members for the tangency check: members from the configured
// list restricted to the sector |arg eps| < 1.8 (the scaled chart argument
// z_0 / eps must stay on the principal branch), plus the discriminating
// imaginary member 2i.
inline std::vector<cplx> tangency_members(const SuiteConfig& cfg) {
    std::vector<cplx> out;
    auto push = [&](cplx e) {
        for (cplx f : out)
            if (std::abs(f - e) < 1e-12) return;
        out.push_back(e);
    };
    for (cplx e : cfg.eps_list)
        if (!is_inf_eps(e) && e != cplx(0.0) && std::abs(std::arg(e)) < 1.8)
            push(e);
    push(cplx(0.0, 2.0));
    return out;
}

// ------------------------------------------------------- elliptic sampling

struct A2Sample {
    models::A2State state;
    cplx u;    // uniformizing fibre parameter of the sampled state
    cplx beta;
};

inline TangentPoint a2_loc(const models::A2State& s) {
    return {{s.a, s.b}, {s.q, s.r}};
}

inline double curve_scale(cplx a, cplx b) {
    return std::max({1.0, std::pow(std::abs(a), 3.0), std::abs(b) * std::abs(b)});
}

// On-curve states via the uniformizing map, rejected near the discriminant
// locus, the lattice origin, and the p = 0 branch locus.
class A2StateStream {
public:
    explicit A2StateStream(std::uint64_t seed) : smp_(seed) {}

    A2Sample next() {
        for (std::size_t tries = 0; tries < 4000; ++tries) {
            cvec ab = smp_.next_box(2, 1.4);
            cplx u = smp_.next_box(1, 0.85)[0];
            cplx beta = smp_.next_box(1, 0.6)[0];
            elliptic::Curve c{ab[0], ab[1]};
            if (std::abs(c.discriminant()) <= 0.3 * curve_scale(c.a, c.b))
                continue;
            if (std::abs(u) < 0.25) continue;
            try {
                models::A2State s =
                    models::a2_state_from_uniformization(c, u, beta);
                if (std::abs(s.p) <= 0.35) continue;
                if (std::abs(s.q) > 5.0 || std::abs(s.r) > 6.0) continue;
                s.validate();
                return {s, u, beta};
            } catch (const Error&) {
                continue;
            }
        }
        throw ConfigError("rejection sampling found too few admissible states");
    }

    std::vector<A2Sample> take(std::size_t count) {
        std::vector<A2Sample> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) out.push_back(next());
        return out;
    }

private:
    halton::Sampler smp_;
};

// The infinite-member flows translate the base linearly in the flowed slot;
// keep the whole unit-time base path clear of the discriminant locus.
inline bool a2_disc_path_clear(const models::A2State& s) {
    for (int k = 0; k <= 21; ++k) {
        double t = 0.05 * k;
        for (int dir = 0; dir < 2; ++dir) {
            cplx a = s.a + (dir == 0 ? cplx(t) : cplx(0.0));
            cplx b = s.b + (dir == 1 ? cplx(t) : cplx(0.0));
            cplx disc = 4.0 * a * a * a + 27.0 * b * b;
            if (std::abs(disc) <= 0.25 * curve_scale(a, b)) return false;
        }
    }
    return true;
}

inline bool a2_flows_clear(const models::A2ChartModel& m,
                           const models::A2State& s) {
    try {
        for (std::size_t i = 0; i < 2; ++i) {
            cvec dir(2, cplx(0.0));
            dir[i] = 1.0;
            (void)twistor::leaf_flow_packed(m, s.pack(), kEpsInf, dir, 1.0);
        }
        return true;
    } catch (const Error&) {
        return false;
    }
}

inline std::vector<A2Sample> flow_safe_a2(std::size_t count,
                                          std::uint64_t seed) {
    A2StateStream stream(seed);
    models::A2ChartModel model;
    std::vector<A2Sample> out;
    out.reserve(count);
    std::size_t tries = 0;
    while (out.size() < count) {
        if (++tries > 60 * count + 200)
            throw ConfigError("rejection sampling found too few flow-safe states");
        A2Sample s = stream.next();
        if (!a2_disc_path_clear(s.state)) continue;
        if (!a2_flows_clear(model, s.state)) continue;
        out.push_back(std::move(s));
    }
    return out;
}

// Curves for the period checks: |a|, |b| <= 3 with the discriminant bounded
// away from zero in absolute terms.
inline std::vector<elliptic::Curve> sample_curves(std::size_t count,
                                                  std::uint64_t seed) {
    halton::Sampler smp(seed);
    std::vector<elliptic::Curve> out;
    out.reserve(count);
    std::size_t tries = 0;
    while (out.size() < count) {
        if (++tries > 200 * count + 1000)
            throw ConfigError("rejection sampling found too few regular curves");
        cvec ab = smp.next_box(2, 3.0);
        elliptic::Curve c{ab[0], ab[1]};
        if (std::abs(c.discriminant()) <= 0.3) continue;
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------- potential-model checks

inline void add_wmodel_checks(std::vector<SuiteCheck>& cs,
                              const std::string& id) {
    auto rep = [](const std::string& name, const std::string& anchor,
                  const Worst& w, double tol) {
        return axiomcheck::make_report(name, anchor, w.value, w.where, w.evals,
                                       tol);
    };

    cs.push_back({"heavenly", "second heavenly equations",
                  [id, rep](const SuiteConfig& cfg) {
                      auto m = make_wmodel(id);
                      Worst w;
                      for (const auto& pt :
                           sample_points(id, cfg.samples, cfg.seed + 11))
                          w.feed(max_abs(axiomcheck::heavenly2_residual(*m, pt)),
                                 pt);
                      return rep("heavenly", "second heavenly equations", w,
                                 cfg.tol("heavenly", 1e-10));
                  }});

    cs.push_back(
        {"flatness", "flatness of the symplectic connection pencil",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 23))
                 for (cplx eps : cfg.eps_list)
                     w.feed(axiomcheck::flatness_residual(*m, pt, eps), pt);
             return rep("flatness",
                        "flatness of the symplectic connection pencil", w,
                        cfg.tol("flatness", 1e-7));
         }});

    // The doubled logarithmic chart is genuinely not invariant under lattice
    // translations, so its symmetry check covers homogeneity and parity only
    // and a separate witness check asserts that the translation residual is
    // nonzero.
    const bool translation_holds = (id != "a1");
    cs.push_back(
        {"symmetry",
         translation_holds
             ? "lattice translation, homogeneity, and parity of the "
               "generating function"
             : "homogeneity and parity of the generating function",
         [id, rep, translation_holds](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             const std::vector<long> k{1, -1};
             const cplx lambda(1.2, 0.3);
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 31)) {
                 auto r = axiomcheck::symmetry_residuals(*m, pt, k, lambda);
                 double v = std::max(r.homogeneity, r.parity);
                 if (translation_holds) v = std::max(v, r.translation);
                 w.feed(v, pt);
             }
             return rep("symmetry",
                        translation_holds
                            ? "lattice translation, homogeneity, and parity "
                              "of the generating function"
                            : "homogeneity and parity of the generating "
                              "function",
                        w, cfg.tol("symmetry", 1e-9));
         }});

    if (id == "a1") {
        cs.push_back(
            {"translation-witness",
             "failure of lattice translation invariance",
             [rep](const SuiteConfig& cfg) {
                 models::A1Model m;
                 const std::vector<long> k{1, -1};
                 double strongest = 0.0;
                 Worst w;
                 tensorcore::TangentPoint witness;
                 std::size_t evals = 0;
                 for (const auto& pt :
                      sample_points("a1", cfg.samples, cfg.seed + 31)) {
                     auto r = axiomcheck::symmetry_residuals(m, pt, k,
                                                             cplx(1.2, 0.3));
                     ++evals;
                     if (r.translation > strongest) {
                         strongest = r.translation;
                         witness = pt;
                     }
                 }
                 w.feed(strongest > 1e-3 ? 0.0 : 1.0, witness);
                 w.evals = evals;
                 return rep("translation-witness",
                            "failure of lattice translation invariance", w,
                            cfg.tol("translation-witness", 0.5));
             }});
    }

    cs.push_back(
        {"closedness", "closedness of the two-form triple",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             const std::size_t count = std::min<std::size_t>(cfg.samples, 6);
             using axiomcheck::FormKind;
             for (const auto& pt : sample_points(id, count, cfg.seed + 41)) {
                 double v = 0.0;
                 for (FormKind kind : {FormKind::plus, FormKind::i_form,
                                       FormKind::minus})
                     v = std::max(v,
                                  axiomcheck::closedness_residual(*m, pt, kind));
                 v = std::max(v, axiomcheck::closedness_residual(
                                     *m, pt, FormKind::pencil, cplx(1.0),
                                     cplx(0.0, 2.0)));
                 w.feed(v, pt);
             }
             return rep("closedness", "closedness of the two-form triple", w,
                        cfg.tol("closedness", 1e-8));
         }});

    cs.push_back(
        {"quaternion", "quaternion relations of the operator triple",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 53)) {
                 auto t = tensorcore::hk_tensors(*m, tensorcore::pack(pt));
                 w.feed(tensorcore::quaternion_residual(t), pt);
             }
             return rep("quaternion",
                        "quaternion relations of the operator triple", w,
                        cfg.tol("quaternion", 1e-12));
         }});

    cs.push_back(
        {"metric-compat", "metric invariance under the operator triple",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 61)) {
                 auto t = tensorcore::hk_tensors(*m, tensorcore::pack(pt));
                 w.feed(tensorcore::metric_invariance_residual(t), pt);
             }
             return rep("metric-compat",
                        "metric invariance under the operator triple", w,
                        cfg.tol("metric-compat", 1e-12));
         }});

    cs.push_back(
        {"form-routes", "two-forms agree between frame and metric routes",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 71)) {
                 auto direct = tensorcore::two_forms(*m, pt);
                 auto gram =
                     tensorcore::gram_two_forms(*m, tensorcore::pack(pt));
                 double v = 0.0;
                 auto diff = [&](const cmat& x, const cmat& y) {
                     for (std::size_t i = 0; i < x.size(); ++i)
                         for (std::size_t j = 0; j < x[i].size(); ++j)
                             v = std::max(v, std::abs(x[i][j] - y[i][j]));
                 };
                 diff(direct.plus, gram.plus);
                 diff(direct.i_form, gram.i_form);
                 diff(direct.minus, gram.minus);
                 w.feed(v, pt);
             }
             return rep("form-routes",
                        "two-forms agree between frame and metric routes", w,
                        cfg.tol("form-routes", 1e-12));
         }});

    cs.push_back({"lattice", "integrality of the lattice pairing",
                  [id, rep](const SuiteConfig& cfg) {
                      auto m = make_wmodel(id);
                      Worst w;
                      w.feed(axiomcheck::lattice_pairing_check(*m) ? 0.0 : 1.0,
                             TangentPoint{});
                      return rep("lattice", "integrality of the lattice pairing",
                                 w, cfg.tol("lattice", 0.5));
                  }});

    cs.push_back(
        {"parallel", "operators parallel for the Levi-Civita connection",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             const std::size_t count = std::min<std::size_t>(cfg.samples, 4);
             for (const auto& pt : sample_points(id, count, cfg.seed + 83))
                 w.feed(axiomcheck::parallel_residual(*m, pt), pt);
             return rep("parallel",
                        "operators parallel for the Levi-Civita connection", w,
                        cfg.tol("parallel", 1e-6));
         }});

    cs.push_back(
        {"twistor", "tangency of twistor lines to the pencil leaves",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             auto members = tangency_members(cfg);
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 97))
                 for (cplx eps : members)
                     w.feed(twistor::twistor_line_residual(*m, pt, eps), pt);
             return rep("twistor",
                        "tangency of twistor lines to the pencil leaves", w,
                        cfg.tol("twistor", 1e-8));
         }});

    cs.push_back(
        {"joyce-df", "derivative identity of the distinguished scalar",
         [id, rep](const SuiteConfig& cfg) {
             auto m = make_wmodel(id);
             Worst w;
             for (const auto& pt :
                  sample_points(id, cfg.samples, cfg.seed + 107))
                 w.feed(models::joyce_df_residual(*m, pt), pt);
             return rep("joyce-df",
                        "derivative identity of the distinguished scalar", w,
                        cfg.tol("joyce-df", 1e-6));
         }});

    if (id == "a1") {
        cs.push_back(
            {"plebanski-det",
             "mixed Hessian determinant of the first Plebanski function",
             [rep](const SuiteConfig& cfg) {
                 Worst w;
                 const cplx expected = -1.0 / (4.0 * kPi * kPi);
                 for (const auto& pt :
                      sample_points("a1", cfg.samples, cfg.seed + 113)) {
                     cplx d = linalg::det(models::A1Model::u_jacobian(pt.z[0]));
                     w.feed(std::abs(d - expected), pt);
                 }
                 return rep(
                     "plebanski-det",
                     "mixed Hessian determinant of the first Plebanski function",
                     w, cfg.tol("plebanski-det", 1e-12));
             }});

        cs.push_back(
            {"descent", "descent of the fibre invariants to the leaf space",
             [rep](const SuiteConfig& cfg) {
                 models::A1Model m;
                 Worst w;
                 std::vector<std::function<cplx(const cvec&)>> inv = {
                     [](const cvec& y) {
                         return models::A1Model::phi_coords(
                                    tensorcore::unpack(y, 2))
                             .first;
                     },
                     [](const cvec& y) {
                         return models::A1Model::phi_coords(
                                    tensorcore::unpack(y, 2))
                             .second;
                     },
                 };
                 const std::size_t count =
                     std::min<std::size_t>(cfg.samples, 3);
                 for (const auto& pt :
                      sample_points("a1", count, cfg.seed + 127))
                     w.feed(twistor::descent_drift(m, tensorcore::pack(pt),
                                                   kEpsInf, inv, 1.0),
                            pt);
                 return rep("descent",
                            "descent of the fibre invariants to the leaf space",
                            w, cfg.tol("descent", 1e-6));
             }});
    }
}

// ------------------------------------------------------ elliptic-base checks

inline void add_a2_checks(std::vector<SuiteCheck>& cs) {
    auto rep = [](const std::string& name, const std::string& anchor,
                  const Worst& w, double tol) {
        return axiomcheck::make_report(name, anchor, w.value, w.where, w.evals,
                                       tol);
    };

    cs.push_back(
        {"flatness", "flatness of the symplectic connection pencil",
         [rep](const SuiteConfig& cfg) {
             models::A2ChartModel m;
             Worst w;
             for (const auto& s :
                  A2StateStream(cfg.seed + 23).take(cfg.samples))
                 for (cplx eps : cfg.eps_list)
                     w.feed(axiomcheck::flatness_residual(m, s.state.pack(),
                                                          eps),
                            a2_loc(s.state));
             return rep("flatness",
                        "flatness of the symplectic connection pencil", w,
                        cfg.tol("flatness", 1e-7));
         }});

    cs.push_back(
        {"isotropy", "isotropy of the connection leaves for the form pencil",
         [rep](const SuiteConfig& cfg) {
             models::A2ChartModel m;
             Worst w;
             for (const auto& s :
                  A2StateStream(cfg.seed + 131).take(cfg.samples)) {
                 auto tf = models::a2_two_forms_chart(s.state);
                 cvec x = s.state.pack();
                 double v = 0.0;
                 for (cplx eps : cfg.eps_list) {
                     cmat p = is_inf_eps(eps)
                                  ? tensorcore::form_pencil(tf, 0.0, 1.0)
                                  : tensorcore::form_pencil(tf, 1.0, eps);
                     cvec u1 = m.pencil_frame(x, 0, eps);
                     cvec u2 = m.pencil_frame(x, 1, eps);
                     cplx pair = 0.0;
                     for (std::size_t i = 0; i < 4; ++i)
                         for (std::size_t j = 0; j < 4; ++j)
                             pair += u1[i] * p[i][j] * u2[j];
                     v = std::max(v, std::abs(pair));
                 }
                 w.feed(v, a2_loc(s.state));
             }
             return rep("isotropy",
                        "isotropy of the connection leaves for the form pencil",
                        w, cfg.tol("isotropy", 1e-10));
         }});

    cs.push_back(
        {"descent", "descent of the fibre invariants to the leaf space",
         [rep](const SuiteConfig& cfg) {
             models::A2ChartModel m;
             Worst w;
             std::vector<std::function<cplx(const cvec&)>> inv = {
                 [](const cvec& y) {
                     return models::a2_phi(models::A2State::unpack(y)).first;
                 },
                 [](const cvec& y) {
                     return models::a2_phi(models::A2State::unpack(y)).second;
                 },
             };
             const std::size_t count = std::min<std::size_t>(cfg.samples, 10);
             for (const auto& s : flow_safe_a2(count, cfg.seed + 127))
                 w.feed(twistor::descent_drift(m, s.state.pack(), kEpsInf, inv,
                                               1.0),
                        a2_loc(s.state));
             return rep("descent",
                        "descent of the fibre invariants to the leaf space", w,
                        cfg.tol("descent", 1e-6));
         }});

    cs.push_back(
        {"weights", "scaling weights of the elliptic chart",
         [rep](const SuiteConfig& cfg) {
             Worst w;
             const cplx lambda(1.3, 0.4);
             const cplx w2 = std::exp(std::log(lambda) * (2.0 / 5.0));
             for (const auto& s :
                  A2StateStream(cfg.seed + 139).take(cfg.samples)) {
                 double v = models::a2_weight_residual(s.state, lambda);
                 auto [p1, p2] = models::a2_phi(s.state);
                 auto sc = models::a2_scale(s.state, lambda);
                 auto [q1, q2] = models::a2_phi(sc);
                 v = std::max(v, std::abs(q1 - w2 * p1) /
                                     std::max(1.0, std::abs(p1)));
                 v = std::max(v, std::abs(q2 - p2 / w2) /
                                     std::max(1.0, std::abs(p2)));
                 v = std::max(v, std::abs(models::a2_joyce_F(sc) -
                                          models::a2_joyce_F(s.state)));
                 w.feed(v, a2_loc(s.state));
             }
             return rep("weights", "scaling weights of the elliptic chart", w,
                        cfg.tol("weights", 1e-10));
         }});

    cs.push_back(
        {"joyce-df", "derivative identity of the distinguished scalar",
         [rep](const SuiteConfig& cfg) {
             Worst w;
             for (const auto& s :
                  A2StateStream(cfg.seed + 107).take(cfg.samples))
                 w.feed(models::a2_df_residual(s.state), a2_loc(s.state));
             return rep("joyce-df",
                        "derivative identity of the distinguished scalar", w,
                        cfg.tol("joyce-df", 1e-5));
         }});

    cs.push_back(
        {"zero-section", "zero-section limit of the Joyce metric",
         [rep](const SuiteConfig& cfg) {
             Worst w;
             const std::size_t count = std::min<std::size_t>(cfg.samples, 4);
             for (const auto& s :
                  A2StateStream(cfg.seed + 149).take(count)) {
                 elliptic::Curve c = s.state.curve();
                 cplx u0 = 0.3 * s.u / std::abs(s.u);
                 auto lim = models::a2_linear_joyce_limit(c, u0);
                 double v = std::max(
                     {std::abs(lim.metric[0][0]), std::abs(lim.metric[1][1]),
                      std::abs(lim.metric[0][1] - 0.2),
                      std::abs(lim.metric[1][0] - 0.2),
                      max_abs(lim.connection_a), max_abs(lim.connection_b)});
                 w.feed(v, TangentPoint{{c.a, c.b}, {u0}});
             }
             return rep("zero-section",
                        "zero-section limit of the Joyce metric", w,
                        cfg.tol("zero-section", 1e-4));
         }});

    cs.push_back(
        {"periods", "Legendre relation of the elliptic periods",
         [rep](const SuiteConfig& cfg) {
             Worst w;
             for (const auto& c : sample_curves(cfg.samples, cfg.seed + 151)) {
                 auto pd = elliptic::complete_periods(c);
                 w.feed(pd.legendre_residual, TangentPoint{{c.a, c.b}, {}});
             }
             return rep("periods", "Legendre relation of the elliptic periods",
                        w, cfg.tol("periods", 1e-9));
         }});

    cs.push_back(
        {"period-jacobian",
         "derivatives of the central charges in the curve parameters",
         [rep](const SuiteConfig& cfg) {
             Worst w;
             const std::size_t count = std::min<std::size_t>(cfg.samples, 5);
             for (const auto& c : sample_curves(count, cfg.seed + 157))
                 w.feed(elliptic::period_jacobian_residual(c),
                        TangentPoint{{c.a, c.b}, {}});
             return rep(
                 "period-jacobian",
                 "derivatives of the central charges in the curve parameters",
                 w, cfg.tol("period-jacobian", 1e-6));
         }});

    // The three monodromy checks share one state stream so they describe the
    // same oscillator problems.
    // Solutions grow like exp(c |x|^{5/2}), so loop transport is only well
    // conditioned while the turning point stays at moderate modulus; states
    // outside that region are rejected, not checked loosely.
    auto monodromy_states = [](const SuiteConfig& cfg) {
        std::vector<hamilton::OscillatorProblem> out;
        A2StateStream stream(cfg.seed + 163);
        const std::size_t count = std::min<std::size_t>(cfg.samples, 3);
        std::size_t tries = 0;
        while (out.size() < count) {
            if (++tries > 120 * count + 400)
                throw ConfigError(
                    "rejection sampling found too few oscillator states");
            A2Sample s = stream.next();
            if (std::abs(s.state.q) > 2.0) continue;
            auto roots = cubic::roots(s.state.a, s.state.b);
            double dmin = 1e300;
            for (cplx r : roots)
                dmin = std::min(dmin, std::abs(s.state.q - r));
            if (dmin < 0.2) continue;
            out.push_back({s.state, cplx(1.0)});
        }
        return out;
    };
    auto nearest_root_distance = [](const hamilton::OscillatorProblem& pr) {
        auto roots = cubic::roots(pr.state.a, pr.state.b);
        double dmin = 1e300;
        cplx nearest = roots[0];
        for (cplx r : roots)
            if (std::abs(pr.state.q - r) < dmin) {
                dmin = std::abs(pr.state.q - r);
                nearest = r;
            }
        return std::make_pair(dmin, nearest);
    };

    cs.push_back(
        {"monodromy", "reflection monodromy around the turning point",
         [rep, monodromy_states, nearest_root_distance](const SuiteConfig& cfg) {
             Worst w;
             for (const auto& pr : monodromy_states(cfg)) {
                 double dmin = nearest_root_distance(pr).first;
                 double radius = std::min(0.35, 0.45 * dmin);
                 cmat m = hamilton::oscillator_monodromy(
                     pr, {pr.state.q, radius});
                 double v = 0.0;
                 for (std::size_t i = 0; i < 2; ++i)
                     for (std::size_t j = 0; j < 2; ++j)
                         v = std::max(v, std::abs(m[i][j] - ((i == j)
                                                                 ? cplx(-1.0)
                                                                 : cplx(0.0))));
                 w.feed(v, a2_loc(pr.state));
             }
             return rep("monodromy",
                        "reflection monodromy around the turning point", w,
                        cfg.tol("monodromy", 1e-6));
         }});

    cs.push_back(
        {"monodromy-det", "unimodularity of the oscillator monodromy",
         [rep, monodromy_states, nearest_root_distance](const SuiteConfig& cfg) {
             Worst w;
             for (const auto& pr : monodromy_states(cfg)) {
                 double dmin = nearest_root_distance(pr).first;
                 double radius = std::min(0.35, 0.45 * dmin);
                 cmat m = hamilton::oscillator_monodromy(
                     pr, {pr.state.q, radius});
                 cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                 w.feed(std::abs(det - 1.0), a2_loc(pr.state));
             }
             return rep("monodromy-det",
                        "unimodularity of the oscillator monodromy", w,
                        cfg.tol("monodromy-det", 1e-8));
         }});

    cs.push_back(
        {"monodromy-empty", "trivial monodromy of contractible loops",
         [rep, monodromy_states, nearest_root_distance](const SuiteConfig& cfg) {
             Worst w;
             for (const auto& pr : monodromy_states(cfg)) {
                 auto [dmin, nearest] = nearest_root_distance(pr);
                 cplx dir = (pr.state.q - nearest) / dmin;
                 hamilton::Loop loop{pr.state.q + 0.5 * dmin * dir,
                                     0.15 * dmin};
                 cmat m = hamilton::oscillator_monodromy(pr, loop);
                 double v = 0.0;
                 for (std::size_t i = 0; i < 2; ++i)
                     for (std::size_t j = 0; j < 2; ++j)
                         v = std::max(v, std::abs(m[i][j] - ((i == j)
                                                                 ? cplx(1.0)
                                                                 : cplx(0.0))));
                 w.feed(v, a2_loc(pr.state));
             }
             return rep("monodromy-empty",
                        "trivial monodromy of contractible loops", w,
                        cfg.tol("monodromy-empty", 1e-9));
         }});

    cs.push_back(
        {"hamiltonian", "Hamiltonian form of the restricted pencil flows",
         [rep](const SuiteConfig& cfg) {
             models::A2ChartModel model;
             hamilton::CotangentStructure cot{{0}, {1}};
             Worst w;
             const std::size_t count = std::min<std::size_t>(cfg.samples, 2);
             std::string last_error;
             A2StateStream stream(cfg.seed + 173);
             std::size_t tries = 0;
             while (w.evals < count && tries < 40) {
                 ++tries;
                 A2Sample s = stream.next();
                 if (!a2_disc_path_clear(s.state)) continue;
                 if (!a2_flows_clear(model, s.state)) continue;
                 try {
                     cvec packed = s.state.pack();
                     hamilton::LagrangianCut cut =
                         hamilton::a2_extraction_cut(s.state, s.u);
                     hamilton::HamiltonianSystem sys =
                         hamilton::extract_from_joyce(model, cot, cut, packed);

                     // geometric side: the constrained unit-member flow;
                     // record the conditioning of the path along the way and
                     // reject states whose path leaves the well-conditioned
                     // region (small |p| or a large lift coefficient).
                     auto alpha_of = [](const cvec& y) {
                         return y[3] * (3.0 * y[2] * y[2] + y[0]) / y[4] - y[2];
                     };
                     double min_p = 1e300, max_alpha = 0.0;
                     auto field = [&](double, const cvec& y) {
                         cvec fa = model.pencil_frame(y, 0, cplx(1.0));
                         cvec fb = model.pencil_frame(y, 1, cplx(1.0));
                         cplx al = alpha_of(y);
                         min_p = std::min(min_p, std::abs(y[4]));
                         max_alpha = std::max(max_alpha, std::abs(al));
                         cvec out(5);
                         for (std::size_t k = 0; k < 5; ++k)
                             out[k] = fa[k] + al * fb[k];
                         return out;
                     };
                     rk45::Options ro;
                     ro.tol = 1e-12;
                     cvec y_geo =
                         rk45::integrate(field, packed, 0.0, 1.0, ro);
                     if (min_p < 0.3 || max_alpha > 6.0) continue;

                     // Hamiltonian side: flow the labels, then rebuild the point.
                     // The Hamiltonians are evaluated through transports, so a
                     // finer differentiation step keeps the stencil truncation
                     // below the check tolerance even at awkward states.
                     hamilton::KFlowOptions ko;
                     ko.tol = 1e-10;
                     ko.fd_step = 1e-3;
                     cvec s0 = {s.state.a, cut.seed_Q[0], cut.seed_P[0]};
                     cvec s1 = hamilton::k_flow(sys, cplx(1.0), s0, 0, 1.0, ko);
                     cvec x1 = cut.fibre_point({s1[1]}, {s1[2]});
                     cvec dt = {s1[0] - s.state.a};
                     cvec y_ham = hamilton::transport_along_cut(model, cot, cut,
                                                                x1, dt);
                     double v = 0.0;
                     for (std::size_t k = 0; k < 5; ++k)
                         v = std::max(v, std::abs(y_ham[k] - y_geo[k]));
                     w.feed(v, a2_loc(s.state));
                 } catch (const Error& e) {
                     last_error = std::string(e.code()) + ": " + e.what();
                 }
             }
             if (w.evals == 0)
                 throw ConfigError("no admissible extraction state (" +
                                   last_error + ")");
             return rep("hamiltonian",
                        "Hamiltonian form of the restricted pencil flows", w,
                        cfg.tol("hamiltonian", 1e-6));
         }});

    cs.push_back({"lattice", "integrality of the lattice pairing",
                  [rep](const SuiteConfig& cfg) {
                      models::A2ChartModel m;
                      Worst w;
                      w.feed(axiomcheck::lattice_pairing_check(m) ? 0.0 : 1.0,
                             TangentPoint{});
                      return rep("lattice", "integrality of the lattice pairing",
                                 w, cfg.tol("lattice", 0.5));
                  }});
}

} // namespace detail

inline const std::vector<std::string>& known_check_names() {
    static const std::vector<std::string> names = {
        "heavenly",       "flatness",      "symmetry",
        "translation-witness",             "closedness",
        "quaternion",     "metric-compat", "form-routes",
        "lattice",        "parallel",      "twistor",
        "joyce-df",       "plebanski-det", "descent",
        "isotropy",       "weights",       "zero-section",
        "periods",        "period-jacobian",
        "monodromy",      "monodromy-det", "monodromy-empty",
        "hamiltonian"};
    return names;
}

inline std::vector<SuiteCheck> registered_checks(const std::string& model) {
    std::vector<SuiteCheck> cs;
    if (model == "flat" || model == "a1" ||
        model == "synthetic-counterexample") {
        detail::add_wmodel_checks(cs, model);
    } else if (model == "a2") {
        detail::add_a2_checks(cs);
    } else {
        throw ConfigError("unknown model id '" + model + "'");
    }
    return cs;
}

// Run every registered check for the configured model.  Checks execute on
// worker threads; results are collected on the calling thread in
// registration order.  A check that throws is reported as failed with the
// error recorded, except for configuration errors, which abort the run.
inline SuiteReport run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    std::vector<SuiteCheck> checks = registered_checks(cfg.model);

    struct Outcome {
        CheckResult result;
        bool config_error = false;
        std::string config_message;
    };

    std::vector<std::future<Outcome>> slots;
    slots.reserve(checks.size());
    for (const SuiteCheck& c : checks) {
        slots.push_back(std::async(std::launch::async, [&cfg, c]() {
            Outcome out;
            auto start = std::chrono::steady_clock::now();
            try {
                out.result.report = c.run(cfg);
            } catch (const ConfigError& e) {
                out.config_error = true;
                out.config_message = e.what();
            } catch (const Error& e) {
                out.result.report = axiomcheck::make_report(
                    c.name, c.anchor,
                    std::numeric_limits<double>::quiet_NaN(),
                    tensorcore::TangentPoint{}, 0, 0.0);
                out.result.report.pass = false;
                out.result.error = std::string(e.code()) + ": " + e.what();
            } catch (const std::exception& e) {
                out.result.report = axiomcheck::make_report(
                    c.name, c.anchor,
                    std::numeric_limits<double>::quiet_NaN(),
                    tensorcore::TangentPoint{}, 0, 0.0);
                out.result.report.pass = false;
                out.result.error = std::string("InternalError: ") + e.what();
            }
            out.result.wall_ms =
                std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
            return out;
        }));
    }

    SuiteReport rep;
    rep.config = cfg;
    rep.utc = utc_now();
    rep.pass = true;
    for (auto& slot : slots) {
        Outcome out = slot.get();
        if (out.config_error) throw ConfigError(out.config_message);
        rep.pass = rep.pass && out.result.report.pass;
        rep.checks.push_back(std::move(out.result));
    }
    return rep;
}

} // namespace joycekit::cli
