#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "tsfrac/gammafn.hpp"
#include "tsfrac/inversion.hpp"
#include "tsfrac/quadrature.hpp"
#include "tsfrac/transform.hpp"

namespace tsfrac {

struct FracOrder {
    double alpha = 0.0;
    int n = 0;  // the bracket: n-1 < alpha <= n

    static FracOrder of(double a) {
        if (!(a >= 0.0) || !std::isfinite(a))
            throw Error("fractional order must be a nonnegative real");
        FracOrder o;
        o.alpha = a;
        o.n = a == 0.0 ? 0 : static_cast<int>(std::ceil(a - 1e-12));
        return o;
    }
};

// Exactly one arm: a transform with optional explicit initial values, or a
// sampled grid function. Initial values never cross arms.
struct FracPipelineInput {
    std::optional<ZExpr> transform;
    std::optional<InitialValues> iv;
    std::optional<GridFunction> samples;

    static FracPipelineInput from_transform(ZExpr F) {
        FracPipelineInput in;
        in.transform = std::move(F);
        return in;
    }
    static FracPipelineInput from_transform(ZExpr F, InitialValues v) {
        FracPipelineInput in;
        in.transform = std::move(F);
        in.iv = std::move(v);
        return in;
    }
    static FracPipelineInput from_samples(GridFunction f) {
        FracPipelineInput in;
        in.samples = std::move(f);
        return in;
    }
    void check() const {
        if (transform.has_value() == samples.has_value())
            throw Error("pipeline input needs exactly one of transform or samples");
        if (iv && !transform) throw Error("explicit initial values require the transform arm");
    }
};

inline ZExpr frac_integral_z(const ZExpr& F, FracOrder o) {
    if (o.alpha == 0.0) return canonicalize(F.terms);
    return zexpr_mul_zpow(F, -o.alpha);
}

inline ZExpr frac_derivative_z(const ZExpr& F, const InitialValues& iv, FracOrder o) {
    if (o.n < 1) throw Error("fractional derivative needs a positive order");
    if (iv.size() != static_cast<std::size_t>(o.n))
        throw ArityMismatch("derivative of order in (n-1,n] needs exactly n initial values");
    ZExpr out = zexpr_mul_zpow(F, o.alpha);
    for (int k = 0; k < o.n; ++k)
        out = zexpr_sub(out, zexpr_term(iv[static_cast<std::size_t>(k)], o.alpha - k - 1));
    return out;
}

namespace detail {

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

}  // namespace detail

// Identify a compact rational transform from grid samples on a uniform scale.
// In the variable w = 1/(1+hz) the truncated transform is h times the
// generating function of the samples, so a rational transform shows up as a
// linear recurrence on the sample sequence. The denominator is fitted by
// least squares over trial orders, converted back to the z variable, and the
// pole coefficients are read off by contour quadrature.
inline ZExpr fit_transform_uniform(const GridFunction& f) {
    if (f.ts.kind != TSKind::UniformDiscrete)
        throw TransformFitFailed("sample identification works on uniform discrete scales only");
    const double h = f.ts.h;
    const std::size_t N = f.samples.size();
    if (N < 8) throw TransformFitFailed("too few samples to identify a transform");

    std::vector<cplx> c(N);
    double maxc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
        c[j] = h * f.samples[j];
        maxc = std::max(maxc, std::abs(c[j]));
    }
    if (maxc == 0.0) return zexpr_zero();

    const std::size_t qmax = std::min<std::size_t>(12, N / 3);
    std::vector<cplx> b;  // denominator in w, b[0] = 1
    bool found = false;
    for (std::size_t q = 1; q <= qmax && !found; ++q) {
        Eigen::MatrixXcd A(N - q, q);
        Eigen::VectorXcd rhs(N - q);
        for (std::size_t j = q; j < N; ++j) {
            for (std::size_t m = 1; m <= q; ++m) A(j - q, m - 1) = c[j - m];
            rhs(j - q) = -c[j];
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::VectorXcd sol = svd.solve(rhs);
        double resid = (A * sol - rhs).cwiseAbs().maxCoeff() / maxc;
        if (resid < 1e-9 && sol.allFinite()) {
            b.assign(q + 1, 0.0);
            b[0] = 1.0;
            for (std::size_t m = 1; m <= q; ++m) b[m] = sol(m - 1);
            found = true;
        }
    }
    if (!found)
        throw TransformFitFailed("samples do not follow a compact rational transform");
    const std::size_t q = b.size() - 1;

    std::vector<cplx> p(q, 0.0);
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t m = 0; m <= j; ++m) p[j] += b[m] * c[j - m];

    // back to z: numerator A(z) = sum p_j (1+hz)^(q-1-j), denominator
    // B(z) = sum b_m (1+hz)^(q-m)
    auto expand = [&](const std::vector<cplx>& coef, std::size_t top) {
        std::vector<cplx> out(top + 1, 0.0);
        for (std::size_t j = 0; j < coef.size(); ++j) {
            std::size_t r = top - j;
            double binom = 1.0, hp = 1.0;
            for (std::size_t k = 0; k <= r; ++k) {
                out[k] += coef[j] * binom * hp;
                binom = binom * static_cast<double>(r - k) / static_cast<double>(k + 1);
                hp *= h;
            }
        }
        return out;
    };
    std::vector<cplx> num = expand(p, q - 1);
    std::vector<cplx> den = expand(b, q);

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(q, q);
    for (std::size_t k = 0; k < q; ++k) comp(k, q - 1) = -den[k] / den[q];
    for (std::size_t k = 1; k < q; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(comp, false);
    std::vector<cplx> roots(q);
    for (std::size_t k = 0; k < q; ++k) roots[k] = eig.eigenvalues()(k);

    std::vector<std::pair<cplx, int>> clusters;
    std::vector<bool> used(q, false);
    for (std::size_t i = 0; i < q; ++i) {
        if (used[i]) continue;
        cplx sum = roots[i];
        int cnt = 1;
        for (std::size_t j = i + 1; j < q; ++j) {
            if (used[j]) continue;
            if (std::abs(roots[j] - roots[i]) <= 1e-4 * (1.0 + std::abs(roots[i]))) {
                sum += roots[j];
                used[j] = true;
                ++cnt;
            }
        }
        clusters.emplace_back(sum / static_cast<double>(cnt), cnt);
    }

    auto F_direct = [&](cplx z) { return detail::poly_eval(num, z) / detail::poly_eval(den, z); };

    std::vector<PowerTerm> terms;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        double radius = 1.0;
        for (std::size_t j = 0; j < clusters.size(); ++j)
            if (j != i)
                radius = std::min(radius, 0.5 * std::abs(clusters[i].first - clusters[j].first));
        for (int m = 1; m <= clusters[i].second; ++m) {
            cplx acc = 0.0;
            const std::size_t M = 512;
            for (std::size_t k = 0; k < M; ++k) {
                double th = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(M);
                cplx offset = radius * std::exp(cplx(0.0, th));
                cplx z = clusters[i].first + offset;
                acc += offset / static_cast<double>(M) * F_direct(z) *
                       std::pow(z - clusters[i].first, m - 1);
            }
            PowerTerm t;
            t.coeff = acc;
            t.exponent = 0.0;
            t.poles.push_back(Pole{clusters[i].first, m});
            terms.push_back(std::move(t));
        }
    }
    ZExpr F = canonicalize(std::move(terms));

    for (int j = 0; j < 8; ++j) {
        double th = 2.0 * M_PI * (static_cast<double>(j) + 0.37) / 8.0;
        cplx z = (2.3 * std::exp(cplx(0.0, th)) - 1.0) / h;
        cplx truth = F_direct(z);
        if (std::abs(zexpr_eval(F, z) - truth) > 1e-6 * std::max(1.0, std::abs(truth)))
            throw TransformFitFailed("identified transform failed its evaluation check");
    }
    return F;
}

namespace detail {

inline ZExpr resolve_transform(const FracPipelineInput& in) {
    in.check();
    if (in.transform) return *in.transform;
    return fit_transform_uniform(*in.samples);
}

inline InitialValues resolve_iv(const FracPipelineInput& in, const ZExpr& F, int n) {
    if (in.samples) return initial_values_from_grid(*in.samples, static_cast<std::size_t>(n));
    if (in.iv) {
        if (in.iv->size() != static_cast<std::size_t>(n))
            throw ArityMismatch("explicit initial values do not match the order bracket");
        return *in.iv;
    }
    return initial_values_from_zexpr(F, static_cast<std::size_t>(n));
}

}  // namespace detail

inline InverseResult frac_integral(const FracPipelineInput& in, FracOrder o,
                                   const TimeScaleSpec& ts, std::size_t N,
                                   bool allow_collocation = false,
                                   const CollocationOptions& copts = {}) {
    ZExpr F = detail::resolve_transform(in);
    return invert_auto(frac_integral_z(F, o), ts, N, allow_collocation, copts);
}

inline InverseResult frac_derivative(const FracPipelineInput& in, FracOrder o,
                                     const TimeScaleSpec& ts, std::size_t N,
                                     bool allow_collocation = false,
                                     const CollocationOptions& copts = {}) {
    ZExpr F = detail::resolve_transform(in);
    InitialValues iv = detail::resolve_iv(in, F, o.n);
    return invert_auto(frac_derivative_z(F, iv, o), ts, N, allow_collocation, copts);
}

namespace detail {

template <typename Fn>
inline double diff_at(Fn&& f, double t) {
    // step near cbrt(eps) balances truncation against cancellation noise
    double e = 6e-6 * std::max(1.0, std::fabs(t));
    // both stencils are second order, so the integrands built on top of this
    // stay continuous to O(e^2) across the switch; a first-order boundary
    // stencil would plant an O(e) jump that adaptive quadrature chases forever
    if (t - e < 0.0) return (-3.0 * f(t) + 4.0 * f(t + e) - f(t + 2.0 * e)) / (2.0 * e);
    return (f(t + e) - f(t - e)) / (2.0 * e);
}

}  // namespace detail

// Caputo derivative of order alpha in (0,1) at t, with the endpoint
// singularity removed by the substitution u = (t-tau)^(1-alpha) on the last
// slice of the interval.
template <typename Fn>
inline double caputo_reals(Fn&& f, double alpha, double t) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("caputo_reals covers orders strictly between 0 and 1");
    if (t < 0.0) throw Error("caputo_reals needs t >= 0");
    if (t == 0.0) return 0.0;
    double delta = 1e-3 * t;
    double outer = integrate_real(
        [&](double tau) { return detail::diff_at(f, tau) * std::pow(t - tau, -alpha); }, 0.0,
        t - delta, 1e-8);
    double u_top = std::pow(delta, 1.0 - alpha);
    double inner = integrate_real(
        [&](double u) {
            double tau = t - std::pow(u, 1.0 / (1.0 - alpha));
            return detail::diff_at(f, tau) / (1.0 - alpha);
        },
        0.0, u_top, 1e-8);
    return (outer + inner) / gamma_fn(1.0 - alpha);
}

// Riemann-Liouville derivative via the equivalent kernel form: the boundary
// term plus the Caputo integral.
template <typename Fn>
inline double rl_derivative_reals(Fn&& f, double alpha, double t) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("rl_derivative_reals covers orders strictly between 0 and 1");
    if (!(t > 0.0)) throw Error("rl_derivative_reals needs t > 0");
    double boundary = f(0.0) * std::pow(t, -alpha) / gamma_fn(1.0 - alpha);
    return boundary + caputo_reals(f, alpha, t);
}

struct Prop1Report {
    double horizon = 0.0;
    double max_rel_error = 0.0;
    bool pass = false;
    std::vector<std::pair<cplx, double>> per_sample;
};

// Checks the transform rule for the Caputo derivative on the real line:
// L[caputo f](z) against z^alpha L[f](z) - f(0) z^(alpha-1), both sides by
// quadrature at the given sample points.
template <typename Fn>
inline Prop1Report prop1_check(Fn&& f, double alpha, const std::vector<cplx>& zs,
                               double tol = 1e-3) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("prop1_check covers orders strictly between 0 and 1");
    if (zs.empty()) throw InvalidCount("prop1_check needs at least one sample point");
    double min_re = zs[0].real();
    for (const auto& z : zs) min_re = std::min(min_re, z.real());
    if (min_re <= 0.0)
        throw HypothesisViolated("sample points must sit in the right half plane");
    double T = std::max(20.0, 30.0 / min_re);

    double peak = 0.0;
    for (int j = 0; j <= 400; ++j) peak = std::max(peak, std::abs(f(T * j / 400.0)));
    if (std::abs(f(T)) > 1e-3 * std::max(peak, 1e-30) || std::abs(f(T)) > std::abs(f(0.5 * T)))
        throw HypothesisViolated("function does not decay over the transform horizon");

    Prop1Report rep;
    rep.horizon = T;
    for (const auto& z : zs) {
        cplx lhs, rhs;
        try {
            lhs = forward_transform_reals(
                      [&](double tau) { return cplx(caputo_reals(f, alpha, tau), 0.0); }, z, T,
                      1e-7)
                      .first;
            cplx Fz = forward_transform_reals([&](double tau) { return cplx(f(tau), 0.0); }, z,
                                              T, 1e-9)
                          .first;
            rhs = std::pow(z, alpha) * Fz - f(0.0) * std::pow(z, alpha - 1.0);
        } catch (const TailUnbounded&) {
            throw HypothesisViolated("transform tail does not converge at a sample point");
        }
        double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-12);
        rep.per_sample.emplace_back(z, rel);
        rep.max_rel_error = std::max(rep.max_rel_error, rel);
    }
    rep.pass = rep.max_rel_error <= tol;
    return rep;
}

// Discrete time-scale convolution against a shift kernel g(t, s):
// (f*g)(t) = sum over grid points below t of f(tau) g(t, sigma(tau)) mu(tau).
inline GridFunction convolve(const GridFunction& f,
                             const std::function<cplx(double, double)>& g,
                             const TimeScaleSpec& ts, std::size_t N) {
    if (ts.classical_mode())
        throw InvalidTimeScale("convolve implements the discrete variant");
    if (f.samples.size() < N) throw HorizonTooSmall("convolution needs N samples of f");
    auto grid = make_grid(ts, N);
    for (std::size_t j = 0; j < N; ++j)
        if (!detail::approx_on(f.points[j], grid[j]))
            throw InvalidTimeScale("sample grid does not match the requested scale");
    GridFunction out;
    out.ts = ts;
    out.points = grid;
    out.samples.assign(N, 0.0);
    for (std::size_t j = 1; j < N; ++j) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < j; ++i)
            acc += f.samples[i] * g(grid[j], grid[i + 1]) * (grid[i + 1] - grid[i]);
        out.samples[j] = acc;
    }
    return out;
}

}  // namespace tsfrac
