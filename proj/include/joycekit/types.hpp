#pragma once
// Shared scalar/vector/matrix types and constants.

#include <complex>
#include <limits>
#include <vector>

namespace joycekit {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using cmat = std::vector<std::vector<cplx>>; // row-major dense

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline const cplx kTwoPiI{0.0, 2.0 * kPi};

// Marker for the epsilon = infinity member of the connection pencil.
inline const cplx kEpsInf{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_inf_eps(cplx eps) {
    return std::isinf(eps.real()) || std::isinf(eps.imag());
}

inline cmat zeros(std::size_t r, std::size_t c) {
    return cmat(r, cvec(c, cplx(0.0)));
}

inline cmat identity(std::size_t n) {
    cmat m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

inline double max_abs(const cvec& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs(const cmat& a) {
    double m = 0.0;
    for (const auto& row : a) m = std::max(m, max_abs(row));
    return m;
}

} // namespace joycekit
