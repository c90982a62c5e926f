#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

namespace flp {

/// Real roots of q2 y^2 + q1 y + q0 in ascending order (cancellation-free form).
inline std::vector<double> quadratic_roots(double q2, double q1, double q0) {
    std::vector<double> out;
    if (q2 == 0.0) {
        if (q1 != 0.0) out.push_back(-q0 / q1);
        return out;
    }
    const double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc < 0.0) return out;
    const double s = std::sqrt(disc);
    const double q = -0.5 * (q1 + std::copysign(s, q1));
    double r1 = q / q2;
    double r2 = q != 0.0 ? q0 / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    out.push_back(r1);
    if (r2 != r1) out.push_back(r2);
    return out;
}

/// Bisection on a sign change of f over [a, b], run until the bracket is a few ulp wide.
template <class F>
double bisect_root(F&& f, double a, double b, int bits = 52) {
    double fa = f(a);
    if (fa == 0.0) return a;
    const double fb = f(b);
    if (fb == 0.0) return b;
    std::uintmax_t iters = 2000;
    auto r = boost::math::tools::bisect(f, a, b, boost::math::tools::eps_tolerance<double>(bits), iters);
    return 0.5 * (r.first + r.second);
}

/// Bracketed root by TOMS 748 (Brent-class convergence).
template <class F>
double brent_root(F&& f, double a, double b, int bits = 50) {
    const double fa = f(a);
    if (fa == 0.0) return a;
    const double fb = f(b);
    if (fb == 0.0) return b;
    std::uintmax_t iters = 300;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(bits), iters);
    return 0.5 * (r.first + r.second);
}

inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace flp
