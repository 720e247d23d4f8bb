#pragma once
// Deterministic roots of the depressed cubic x^3 + a x + b over the complex
// numbers (Cardano with fixed principal branches), sorted lexicographically
// by (Re, Im).  The sort order defines the cycle-basis convention used by the
// period computations, so it must stay stable.

#include <algorithm>
#include <array>
#include <cmath>

#include "joycekit/types.hpp"

namespace joycekit::cubic {

inline std::array<cplx, 3> roots(cplx a, cplx b) {
    std::array<cplx, 3> r;
    if (a == cplx(0.0) && b == cplx(0.0)) {
        r = {cplx(0.0), cplx(0.0), cplx(0.0)};
    } else {
        const cplx w(-0.5, std::sqrt(3.0) / 2.0); // primitive cube root of 1
        cplx disc = std::sqrt(b * b / 4.0 + a * a * a / 27.0);
        cplx u3 = -b / 2.0 + disc;
        if (std::abs(u3) < 1e-3 * (std::abs(b) / 2.0 + std::abs(disc)))
            u3 = -b / 2.0 - disc; // avoid cancellation; other Cardano branch
        cplx u = std::pow(u3, 1.0 / 3.0);
        for (int i = 0; i < 3; ++i) {
            cplx ui = (i == 0) ? u : (i == 1 ? u * w : u * w * w);
            cplx vi = (std::abs(ui) > 0.0) ? -a / (3.0 * ui) : cplx(0.0);
            r[i] = ui + vi;
        }
        // one Newton polish per root for clean lexicographic ties
        for (auto& x : r) {
            for (int it = 0; it < 2; ++it) {
                cplx f = x * x * x + a * x + b;
                cplx df = 3.0 * x * x + a;
                if (std::abs(df) > 1e-14) x -= f / df;
            }
        }
    }
    std::sort(r.begin(), r.end(), [](cplx p, cplx q) {
        if (p.real() != q.real()) return p.real() < q.real();
        return p.imag() < q.imag();
    });
    return r;
}

// Discriminant-style degeneracy gauge for y^2 = x^3 + a x + b.
inline cplx discriminant(cplx a, cplx b) { return 4.0 * a * a * a + 27.0 * b * b; }

} // namespace joycekit::cubic
