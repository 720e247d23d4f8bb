#pragma once
// Adaptive Gauss-Kronrod (G7-K15) quadrature for complex-valued integrands on
// real intervals, plus a branch tracker that follows a continuous square root
// along a parametrized path.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/types.hpp"

namespace joycekit::quad {

// 15-point Kronrod nodes (positive half) and weights; the embedded 7-point
// Gauss rule uses nodes 1, 3, 5, 7.
inline constexpr std::array<double, 8> kXgk = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr std::array<double, 4> kWg = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    std::size_t max_segments = 20000;
};

struct Result {
    cplx value{};
    double error = 0.0;
    std::size_t segments = 0;
};

namespace detail {

struct SegmentEval {
    cplx k15{};
    cplx g7{};
};

template <class F>
SegmentEval eval_segment(const F& f, double t0, double t1) {
    const double mid = 0.5 * (t0 + t1);
    const double hl = 0.5 * (t1 - t0);
    SegmentEval out;
    cplx fc = f(mid);
    out.k15 = kWgk[7] * fc;
    out.g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        cplx fp = f(mid + hl * kXgk[std::size_t(i)]);
        cplx fm = f(mid - hl * kXgk[std::size_t(i)]);
        out.k15 += kWgk[std::size_t(i)] * (fp + fm);
        if (i % 2 == 1) out.g7 += kWg[std::size_t(i / 2)] * (fp + fm);
    }
    out.k15 *= hl;
    out.g7 *= hl;
    return out;
}

} // namespace detail

// Adaptive bisection with a length-proportional error budget.
template <class F>
Result adaptive(const F& f, double t0, double t1, Options opt = {}) {
    if (t0 == t1) return {};
    detail::SegmentEval first = detail::eval_segment(f, t0, t1);
    const double scale = std::max(1.0, std::abs(first.k15));
    const double tol_total = std::max(opt.abs_tol, opt.rel_tol * scale);
    const double total_len = std::abs(t1 - t0);

    Result res;
    struct Item {
        double a, b;
        detail::SegmentEval e;
    };
    std::vector<Item> stack{{t0, t1, first}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        double err = std::abs(it.e.k15 - it.e.g7);
        double budget = tol_total * (std::abs(it.b - it.a) / total_len);
        if (err <= budget || std::abs(it.b - it.a) < 1e-15 * total_len) {
            res.value += it.e.k15;
            res.error += err;
            ++res.segments;
            if (res.segments > opt.max_segments)
                throw QuadratureFailure("adaptive quadrature segment budget exhausted");
            continue;
        }
        double m = 0.5 * (it.a + it.b);
        stack.push_back({it.a, m, detail::eval_segment(f, it.a, m)});
        stack.push_back({m, it.b, detail::eval_segment(f, m, it.b)});
        if (stack.size() + res.segments > opt.max_segments)
            throw QuadratureFailure("adaptive quadrature diverging (too many segments)");
    }
    return res;
}

// Continuous branch of sqrt(F(t)) along t in [t0, t1], pinned to the declared
// value at t0.  Checkpoints are continued stepwise; queries continue from the
// nearest checkpoint.  min_abs guards against the path running through a zero
// of F (where no continuous square root exists).
class ContinuedSqrt {
public:
    template <class F>
    ContinuedSqrt(const F& f, double t0, double t1, cplx w_start,
                  std::size_t checkpoints = 1024, double min_abs = 1e-10)
        : t0_(t0), dt_((t1 - t0) / double(checkpoints - 1)) {
        values_.resize(checkpoints);
        cplx f0 = f(t0);
        cplx principal = std::sqrt(f0);
        if (std::abs(principal * principal - w_start * w_start) >
            1e-8 * (1.0 + std::abs(f0)))
            throw Error("BranchMismatch",
                        "declared start value does not square to F(t0)");
        values_[0] = (std::abs(principal - w_start) <= std::abs(principal + w_start))
                         ? principal
                         : -principal;
        min_abs_seen_ = std::abs(values_[0]);
        for (std::size_t i = 1; i < checkpoints; ++i) {
            double t = t0_ + dt_ * double(i);
            cplx w = std::sqrt(f(t));
            if (std::abs(w - values_[i - 1]) > std::abs(w + values_[i - 1])) w = -w;
            values_[i] = w;
            min_abs_seen_ = std::min(min_abs_seen_, std::abs(w));
        }
        if (min_abs_seen_ < min_abs)
            throw Error("BranchThroughZero",
                        "square-root branch path passes through a zero");
    }

    // Continue from the nearest checkpoint to t.
    cplx continue_from_checkpoint(cplx f_at_t, double t) const {
        double idx_f = (t - t0_) / dt_;
        std::size_t idx = 0;
        if (idx_f > 0)
            idx = std::min(values_.size() - 1,
                           std::size_t(std::llround(idx_f)));
        cplx w = std::sqrt(f_at_t);
        if (std::abs(w - values_[idx]) > std::abs(w + values_[idx])) w = -w;
        return w;
    }

    double min_abs_seen() const { return min_abs_seen_; }
    cplx end_value() const { return values_.back(); }

private:
    double t0_;
    double dt_;
    std::vector<cplx> values_;
    double min_abs_seen_ = 0.0;
};

} // namespace joycekit::quad
