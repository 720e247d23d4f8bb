#pragma once
// Local evaluation of the Weierstrass functions attached to the curve
// y^2 = x^3 + a x + b, i.e. invariants g2 = -4a, g3 = -4b, so that
// x = P(u), y = P'(u)/2 parametrizes the curve.  Laurent series about u = 0
// with argument doubling for larger |u|.

#include <array>
#include <cmath>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/types.hpp"

namespace joycekit::elliptic {

class WeierstrassP {
public:
    struct Values {
        cplx p{};    // P(u)
        cplx dp{};   // P'(u)
        cplx zeta{}; // zeta(u), with zeta' = -P
    };

    WeierstrassP(cplx a, cplx b) : g2_(-4.0 * a), g3_(-4.0 * b) {
        // c_2 = g2/20, c_3 = g3/28,
        // c_k = 3 / ((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}
        c_.assign(kTerms + 1, cplx(0.0));
        c_[2] = g2_ / 20.0;
        c_[3] = g3_ / 28.0;
        for (std::size_t k = 4; k <= kTerms; ++k) {
            cplx s = 0.0;
            for (std::size_t m = 2; m + 2 <= k; ++m) s += c_[m] * c_[k - m];
            c_[k] = 3.0 * s / double((2 * k + 1) * (k - 3));
        }
        // |u| below which the truncated series tail is negligible
        double ck = std::abs(c_[kTerms]);
        radius_ = (ck > 0.0)
                      ? std::pow(1e-18 / ck, 1.0 / double(2 * kTerms - 2))
                      : 1e6;
        radius_ = std::min(radius_, 1e6);
    }

    Values eval(cplx u) const {
        if (std::abs(u) == 0.0)
            throw Error("LatticePole", "Weierstrass functions have a pole at u = 0");
        int doublings = 0;
        while (std::abs(u) > radius_) {
            u *= 0.5;
            if (++doublings > 60)
                throw Error("LatticePole", "argument reduction failed to converge");
        }
        Values v = series(u);
        for (int i = 0; i < doublings; ++i) v = double_arg(v);
        return v;
    }

    cplx g2() const { return g2_; }
    cplx g3() const { return g3_; }

private:
    static constexpr std::size_t kTerms = 60;

    Values series(cplx u) const {
        cplx u2 = u * u;
        // P = u^-2 + sum_{k>=2} c_k u^{2k-2}
        // P' = -2 u^-3 + sum (2k-2) c_k u^{2k-3}
        // zeta = 1/u - sum c_k u^{2k-1} / (2k-1)
        cplx p = 0.0, dp = 0.0, z = 0.0;
        cplx pw = u2; // u^{2k-2} at k = 2
        for (std::size_t k = 2; k <= kTerms; ++k) {
            p += c_[k] * pw;
            dp += double(2 * k - 2) * c_[k] * pw / u;
            z += c_[k] * pw * u / double(2 * k - 1);
            pw *= u2;
        }
        Values v;
        v.p = 1.0 / u2 + p;
        v.dp = -2.0 / (u2 * u) + dp;
        v.zeta = 1.0 / u - z;
        return v;
    }

    Values double_arg(const Values& v) const {
        if (std::abs(v.dp) < 1e-10)
            throw DegenerateBase("argument doubling at a half-period (P' = 0)");
        cplx ppp = 6.0 * v.p * v.p - 0.5 * g2_; // P''
        cplx A = ppp / (2.0 * v.dp);
        Values w;
        w.p = A * A - 2.0 * v.p;
        w.dp = -v.dp + 2.0 * A * (3.0 * v.p - A * A);
        w.zeta = 2.0 * v.zeta + A;
        return w;
    }

    cplx g2_, g3_;
    std::vector<cplx> c_;
    double radius_ = 0.0;
};

} // namespace joycekit::elliptic
