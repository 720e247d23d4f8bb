#pragma once
// Deterministic low-discrepancy sampling (Halton sequence) used to place
// evaluation points in bounded complex polydiscs.  The "seed" is a start
// offset into the sequence, so a fixed seed reproduces the same points.

#include <array>
#include <cstdint>

#include "joycekit/errors.hpp"
#include "joycekit/types.hpp"

namespace joycekit::halton {

inline double radical_inverse(std::uint64_t i, std::uint32_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

inline constexpr std::array<std::uint32_t, 16> kPrimes{
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 1) : index_(seed + 1) {}

    // Next point in [0,1)^dims.
    std::vector<double> next(std::size_t dims) {
        std::vector<double> u(dims);
        for (std::size_t d = 0; d < dims; ++d)
            u[d] = radical_inverse(index_, kPrimes[d % kPrimes.size()]);
        ++index_;
        return u;
    }

    // Next complex vector in the centered box {|Re|,|Im| <= half_width}.
    cvec next_box(std::size_t n, double half_width) {
        auto u = next(2 * n);
        cvec z(n);
        for (std::size_t i = 0; i < n; ++i)
            z[i] = cplx((2.0 * u[2 * i] - 1.0) * half_width,
                        (2.0 * u[2 * i + 1] - 1.0) * half_width);
        return z;
    }

    // Rejection sampling against a predicate (true = acceptable).
    template <typename Pred>
    cvec next_box_where(std::size_t n, double half_width, Pred&& ok,
                        std::size_t max_tries = 10000) {
        for (std::size_t k = 0; k < max_tries; ++k) {
            cvec z = next_box(n, half_width);
            if (ok(z)) return z;
        }
        throw Error("SamplingExhausted", "rejection sampling found no admissible point");
    }

private:
    std::uint64_t index_;
};

} // namespace joycekit::halton
