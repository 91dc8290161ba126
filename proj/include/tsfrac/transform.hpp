#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "tsfrac/quadrature.hpp"
#include "tsfrac/special.hpp"
#include "tsfrac/timescale.hpp"
#include "tsfrac/zexpr.hpp"

namespace tsfrac {

using InitialValues = std::vector<cplx>;

struct TransformDiagnostics {
    std::size_t truncation_horizon = 0;
    double tail_bound = std::numeric_limits<double>::infinity();
    double dominance_ratio = std::numeric_limits<double>::infinity();
    // exponential type II estimate |f(t)| <= M e_c(t, 0)
    double growth_M = 0.0;
    double growth_c = 0.0;

    bool reliable() const { return std::isfinite(tail_bound); }
};

// Truncated generalized Laplace transform on a discrete scale:
//   sum_j f(t_j) mu_j prod_{i<=j} (1 + mu_i z)^{-1}
// The tail bound is the geometric estimate from the dominance ratio of the
// last quarter of terms; infinite when no decay is observed there.
inline std::pair<cplx, TransformDiagnostics> forward_transform(const GridFunction& f, cplx z) {
    if (f.ts.classical_mode())
        throw Error("forward_transform expects a discrete scale; use forward_transform_reals");
    std::size_t N = f.horizon();
    if (N < 2) throw HorizonTooSmall("transform needs at least two grid points");
    TransformDiagnostics diag;
    diag.truncation_horizon = N;

    cplx acc = 0.0, running = 1.0;
    std::vector<double> mags(N - 1);
    for (std::size_t j = 0; j + 1 < N; ++j) {
        double m = f.points[j + 1] - f.points[j];
        cplx factor = 1.0 + m * z;
        if (std::abs(factor) <= kRegressiveTol) throw NotRegressive(z, static_cast<long>(j));
        running /= factor;
        cplx term = f.samples[j] * m * running;
        if (!std::isfinite(std::abs(term))) {
            diag.tail_bound = std::numeric_limits<double>::infinity();
            return {acc, diag};
        }
        acc += term;
        mags[j] = std::abs(term);
    }

    std::size_t start = (3 * (N - 1)) / 4;
    double ratio = 0.0;
    for (std::size_t j = start; j + 1 < N - 1; ++j) {
        if (mags[j] == 0.0) {
            if (mags[j + 1] != 0.0) ratio = std::numeric_limits<double>::infinity();
            continue;
        }
        ratio = std::max(ratio, mags[j + 1] / mags[j]);
    }
    diag.dominance_ratio = ratio;
    if (ratio < 1.0)
        diag.tail_bound = mags[N - 2] * ratio / (1.0 - ratio);

    // crude type II constants from the trailing samples
    double rf = 0.0, mu_acc = 0.0;
    std::size_t cnt = 0;
    for (std::size_t j = start; j + 1 < N; ++j) {
        double a = std::abs(f.samples[j]), b = std::abs(f.samples[j + 1]);
        if (a > 0.0) rf = std::max(rf, b / a);
        mu_acc += f.points[j + 1] - f.points[j];
        ++cnt;
    }
    double mu_avg = cnt ? mu_acc / cnt : 1.0;
    diag.growth_c = std::max(0.0, (rf - 1.0) / mu_avg);
    double ec = 1.0;
    for (std::size_t j = 0; j + 1 < N; ++j) {
        double m = f.points[j + 1] - f.points[j];
        ec *= 1.0 + m * diag.growth_c;
        double s = std::abs(f.samples[j + 1]);
        if (std::isfinite(ec) && ec > 0.0) diag.growth_M = std::max(diag.growth_M, s / ec);
    }
    return {acc, diag};
}

// Horizon doubling from N=256 until the tail bound drops under tol (cap 2^16).
// Divergent inputs are cut short once the dominance ratio stays above 1.
inline std::pair<cplx, TransformDiagnostics> forward_transform_auto(
    const TimeScaleSpec& ts, const std::function<cplx(double)>& f, cplx z, double tol,
    std::size_t n_start = 256, std::size_t n_max = 65536) {
    std::pair<cplx, TransformDiagnostics> best;
    int divergent_streak = 0;
    for (std::size_t N = n_start;; N *= 2) {
        if (ts.kind == TSKind::ExplicitGrid) N = std::min(N, ts.pts.size());
        GridFunction g;
        g.ts = ts;
        g.points = make_grid(ts, N);
        g.samples.resize(N);
        bool clipped = false;
        for (std::size_t j = 0; j < N; ++j) {
            cplx v = f(g.points[j]);
            if (!std::isfinite(std::abs(v))) {
                g.points.resize(j);
                g.samples.resize(j);
                clipped = true;
                break;
            }
            g.samples[j] = v;
        }
        best = forward_transform(g, z);
        if (clipped) {
            best.second.tail_bound = std::numeric_limits<double>::infinity();
            return best;
        }
        if (best.second.tail_bound < tol) return best;
        if (!(best.second.dominance_ratio < 1.05)) {
            if (++divergent_streak >= 2) return best;
        } else {
            divergent_streak = 0;
        }
        if (N >= n_max || (ts.kind == TSKind::ExplicitGrid && N >= ts.pts.size())) return best;
    }
}

// Classical Laplace transform on [0, T] by adaptive quadrature with an
// exponential tail estimate from the trailing window.
inline std::pair<cplx, TransformDiagnostics> forward_transform_reals(
    const std::function<cplx(double)>& f, cplx z, double T, double tol = 1e-10) {
    TransformDiagnostics diag;
    double c_est = -std::numeric_limits<double>::infinity();
    double probes[3] = {0.7 * T, 0.85 * T, T};
    for (int i = 0; i + 1 < 3; ++i) {
        double a = std::abs(f(probes[i])), b = std::abs(f(probes[i + 1]));
        if (a > 0.0 && b > 0.0)
            c_est = std::max(c_est, std::log(b / a) / (probes[i + 1] - probes[i]));
    }
    if (!std::isfinite(c_est)) c_est = 0.0;
    diag.growth_c = std::max(0.0, c_est);
    diag.growth_M = std::abs(f(T));
    if (z.real() <= c_est + 1e-9)
        throw TailUnbounded("Re z must exceed the growth-rate estimate " +
                            std::to_string(c_est));
    // Integrate over dyadic panels [0,1],[1,2],[2,4],...  A single adaptive pass
    // over [0,T] can terminate on its first coarse samples when e^{-zt} pushes
    // all the mass into a narrow region near the origin.
    auto g = [&](double t) { return f(t) * std::exp(-z * t); };
    int panels = 2 + static_cast<int>(std::ceil(std::log2(std::max(2.0, T))));
    cplx val = 0.0;
    double lo = 0.0, width = 1.0;
    while (lo < T) {
        double hi = std::min(T, width);
        val += integrate(g, lo, hi, tol / panels);
        lo = hi;
        width *= 2.0;
    }
    diag.tail_bound = std::abs(f(T)) * std::exp(-z.real() * T) / (z.real() - c_est);
    diag.dominance_ratio = std::exp(c_est - z.real());
    return {val, diag};
}

// z^n F - sum_{k<n} z^{n-k-1} iv_k
inline ZExpr transform_of_delta_derivative(const ZExpr& F, const InitialValues& iv, int n) {
    if (n < 1) throw InvalidCount("derivative order must be positive");
    if (iv.size() != static_cast<std::size_t>(n))
        throw ArityMismatch("expected " + std::to_string(n) + " initial values, got " +
                            std::to_string(iv.size()));
    ZExpr out = zexpr_mul_zpow(F, static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        out = zexpr_sub(out, zexpr_term(iv[static_cast<std::size_t>(k)],
                                        static_cast<double>(n - k - 1)));
    return out;
}

// Initial values by the transform limit lim_{z->inf} z (z^k F - ...), decided
// by exact degree analysis on the canonical form.
inline InitialValues initial_values_from_zexpr(const ZExpr& F, int n) {
    InitialValues out;
    ZExpr H = F;
    for (int k = 0; k < n; ++k) {
        ZExpr E = zexpr_mul_zpow(H, 1.0);
        cplx limit = 0.0;
        for (const auto& t : E.terms) {
            double d = detail::term_degree(t);
            if (d > detail::kExpTol) throw NonFiniteInitialValue(k);
            if (std::fabs(d) <= detail::kExpTol) limit += t.coeff;
        }
        out.push_back(limit);
        H = zexpr_sub(E, zexpr_const(limit));
    }
    return out;
}

inline InitialValues initial_values_from_grid(const GridFunction& f, int n) {
    if (f.horizon() < static_cast<std::size_t>(n + 1))
        throw HorizonTooSmall("need horizon >= n+1 for n initial values");
    InitialValues out;
    GridFunction g = f;
    for (int k = 0; k < n; ++k) {
        out.push_back(g.samples[0]);
        if (k + 1 < n) g = delta_derivative(g);
    }
    return out;
}

}  // namespace tsfrac
