#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "tsfrac/errors.hpp"

namespace tsfrac {

namespace detail {

inline std::complex<double> simpson_step(const std::function<std::complex<double>(double)>& f,
                                         double a, double b, std::complex<double> fa,
                                         std::complex<double> fm, std::complex<double> fb,
                                         std::complex<double> whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    std::complex<double> flm = f(lm), frm = f(rm);
    std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    std::complex<double> delta = left + right - whole;
    if (depth <= 0) {
        if (std::abs(delta) > 15.0 * tol)
            throw QuadratureFailure("adaptive quadrature did not converge");
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson over [a, b] for a complex-valued integrand.
inline std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, double tol = 1e-10,
                                      int max_depth = 48) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    std::complex<double> fa = f(a), fm = f(m), fb = f(b);
    std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

inline double integrate_real(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-10, int max_depth = 48) {
    return integrate([&](double t) { return std::complex<double>(f(t), 0.0); }, a, b, tol,
                     max_depth)
        .real();
}

}  // namespace tsfrac
