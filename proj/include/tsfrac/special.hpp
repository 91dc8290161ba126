#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "tsfrac/timescale.hpp"

namespace tsfrac {

inline constexpr double kRegressiveTol = 1e-12;

struct RegressiveConstant {
    cplx value;
    std::size_t verified_horizon;
};

inline cplx ominus(double mu_t, cplx z) {
    cplx d = 1.0 + mu_t * z;
    if (std::abs(d) <= kRegressiveTol) throw NotRegressive(z, -1);
    return -z / d;
}

// Certifies |1 + mu(t_j) z| > tol for every j < N.
inline RegressiveConstant is_regressive(const TimeScaleSpec& ts, cplx lambda, std::size_t N) {
    if (N == 0) throw InvalidCount("regressivity check needs N >= 1");
    if (!ts.classical_mode()) {
        auto grid = make_grid(ts, N);
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            double m = grid[j + 1] - grid[j];
            if (std::abs(1.0 + m * lambda) <= kRegressiveTol)
                throw NotRegressive(lambda, static_cast<long>(j));
        }
    }
    return RegressiveConstant{lambda, N};
}

namespace detail {

// h_k by the integral recursion, exact Riemann sums over the grid prefix.
inline double hk_recursive(const TimeScaleSpec& ts, int k, double t, double t0) {
    long jt = grid_index(ts, t), j0 = grid_index(ts, t0);
    if (jt < 0) throw PointNotOnGrid(t);
    if (j0 < 0) throw PointNotOnGrid(t0);
    if (jt < j0) throw Error("hk needs t >= t0");
    std::size_t len = static_cast<std::size_t>(jt - j0) + 1;
    std::vector<double> pts(len);
    for (std::size_t j = 0; j < len; ++j) pts[j] = point_at(ts, j0 + static_cast<long>(j));
    std::vector<double> cur(len, 1.0), nxt(len);
    for (int level = 0; level < k; ++level) {
        nxt[0] = 0.0;
        for (std::size_t j = 0; j + 1 < len; ++j)
            nxt[j + 1] = nxt[j] + cur[j] * (pts[j + 1] - pts[j]);
        cur.swap(nxt);
    }
    return cur[len - 1];
}

}  // namespace detail

// Generalized polynomial h_k(t, t0). Closed forms on Reals and uniform grids,
// the defining recursion elsewhere.
inline double hk(const TimeScaleSpec& ts, int k, double t, double t0 = 0.0) {
    if (k < 0) throw Error("hk needs k >= 0");
    if (ts.kind == TSKind::Reals) {
        double acc = 1.0;
        for (int i = 1; i <= k; ++i) acc *= (t - t0) / i;
        return acc;
    }
    if (ts.kind == TSKind::UniformDiscrete) {
        if (detail::grid_index(ts, t) < 0) throw PointNotOnGrid(t);
        if (detail::grid_index(ts, t0) < 0) throw PointNotOnGrid(t0);
        double acc = 1.0;
        for (int i = 0; i < k; ++i) acc *= (t - t0 - i * ts.h) / (i + 1);
        return acc;
    }
    return detail::hk_recursive(ts, k, t, t0);
}

// Time-scale exponential e_z(t, t0): product of (1 + mu z) along the grid on
// discrete scales, exp(z (t - t0)) on Reals.
inline cplx exp_ts(const TimeScaleSpec& ts, cplx z, double t, double t0 = 0.0) {
    if (ts.kind == TSKind::Reals) return std::exp(z * (t - t0));
    long jt = detail::grid_index(ts, t), j0 = detail::grid_index(ts, t0);
    if (jt < 0) throw PointNotOnGrid(t);
    if (j0 < 0) throw PointNotOnGrid(t0);
    if (jt < j0) throw Error("exp_ts needs t >= t0");
    cplx acc = 1.0;
    for (long j = j0; j < jt; ++j) {
        double m = detail::point_at(ts, j + 1) - detail::point_at(ts, j);
        cplx factor = 1.0 + m * z;
        if (std::abs(factor) <= kRegressiveTol) throw NotRegressive(z, j);
        acc *= factor;
    }
    return acc;
}

}  // namespace tsfrac
