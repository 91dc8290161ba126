#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include "tsfrac/gammafn.hpp"
#include "tsfrac/special.hpp"
#include "tsfrac/timescale.hpp"
#include "tsfrac/transform.hpp"
#include "tsfrac/zexpr.hpp"

namespace tsfrac {

enum class InverseMethod { residue, reals_closed_form, collocation };

inline const char* method_name(InverseMethod m) {
    switch (m) {
        case InverseMethod::residue: return "residue";
        case InverseMethod::reals_closed_form: return "reals_closed_form";
        case InverseMethod::collocation: return "collocation";
    }
    return "?";
}

struct PoleInfo {
    cplx loc;
    int order;
    bool regressive;
};

struct InverseResult {
    GridFunction values;
    InverseMethod method = InverseMethod::residue;
    std::optional<double> residual;
    std::vector<PoleInfo> pole_report;
};

// Raised when a non-rational transform on a discrete scale needs the
// collocation surrogate and the caller has not opted in. Carries the symbolic
// result so callers can still show it.
struct NeedsCollocation : Error {
    explicit NeedsCollocation(ZExpr F)
        : Error("inverse is not rational on a discrete scale; the collocation surrogate "
                "must be enabled explicitly"),
          transform(std::move(F)) {}
    ZExpr transform;
};

namespace detail {

inline std::vector<PoleInfo> distinct_poles(const ZExpr& F) {
    std::vector<PoleInfo> out;
    for (const auto& t : F.terms)
        for (const auto& p : t.poles) {
            bool found = false;
            for (auto& q : out)
                if (same_loc(q.loc, p.loc)) {
                    q.order = std::max(q.order, p.order);
                    found = true;
                }
            if (!found) out.push_back(PoleInfo{p.loc, p.order, true});
        }
    return out;
}

// e_z(t_j, 0) for every grid prefix, one running product per contour node.
inline void exp_row(const std::vector<double>& grid, cplx z, std::vector<cplx>& out) {
    out.resize(grid.size());
    cplx acc = 1.0;
    out[0] = acc;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        acc *= 1.0 + (grid[j + 1] - grid[j]) * z;
        out[j + 1] = acc;
    }
}

// Residues of e_z(t_j,0) F(z) at pole, for all grid points at once, by the
// trapezoid rule on a circle. Spectrally accurate since the integrand is
// rational in z; nodes are doubled until the values settle.
inline void add_residues(const ZExpr& F, const std::vector<double>& grid, cplx pole,
                         double radius, std::vector<cplx>& acc) {
    std::size_t N = grid.size();
    std::vector<cplx> prev, cur, erow;
    for (std::size_t M = 64;; M *= 2) {
        cur.assign(N, 0.0);
        for (std::size_t m = 0; m < M; ++m) {
            double th = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(M);
            cplx offset = radius * std::exp(cplx(0.0, th));
            cplx z = pole + offset;
            cplx w = offset / static_cast<double>(M);
            cplx Fz = zexpr_eval(F, z);
            exp_row(grid, z, erow);
            for (std::size_t j = 0; j < N; ++j) cur[j] += w * erow[j] * Fz;
        }
        if (!prev.empty()) {
            double worst = 0.0;
            for (std::size_t j = 0; j < N; ++j)
                worst = std::max(worst,
                                 std::abs(cur[j] - prev[j]) / std::max(1.0, std::abs(cur[j])));
            if (worst < 1e-12) break;
        }
        if (M >= 8192)
            throw QuadratureFailure("residue contour quadrature did not settle");
        prev = cur;
    }
    for (std::size_t j = 0; j < N; ++j) acc[j] += cur[j];
}

}  // namespace detail

// Residue inversion for strictly proper rational transforms on discrete
// scales. Pure pole-at-zero terms map to h_k and single simple poles to e_z
// in closed form; every remaining term goes through contour quadrature.
inline InverseResult invert_rational(const ZExpr& F, const TimeScaleSpec& ts, std::size_t N) {
    if (ts.classical_mode())
        throw InvalidTimeScale("invert_rational expects a discrete scale");
    if (!zexpr_is_rational(F)) throw NotRational("transform has fractional powers of z");
    if (!zexpr_is_strictly_proper(F))
        throw NotStrictlyProper("transform must vanish as z grows");

    InverseResult out;
    out.method = InverseMethod::residue;
    out.values.ts = ts;
    out.values.points = make_grid(ts, N);
    out.values.samples.assign(N, 0.0);
    const auto& grid = out.values.points;

    out.pole_report = detail::distinct_poles(F);
    for (auto& p : out.pole_report) {
        for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
            double m = grid[j + 1] - grid[j];
            if (std::abs(1.0 + m * p.loc) <= kRegressiveTol) {
                p.regressive = false;
                throw NotRegressive(p.loc, static_cast<long>(j));
            }
        }
    }

    ZExpr quad_part;
    for (const auto& t : F.terms) {
        if (t.poles.size() == 1 && t.exponent == 0.0) {
            const Pole& p = t.poles[0];
            if (detail::same_loc(p.loc, 0.0)) {
                for (std::size_t j = 0; j < N; ++j)
                    out.values.samples[j] += t.coeff * hk(ts, p.order - 1, grid[j]);
                continue;
            }
            if (p.order == 1) {
                for (std::size_t j = 0; j < N; ++j)
                    out.values.samples[j] += t.coeff * exp_ts(ts, p.loc, grid[j]);
                continue;
            }
        }
        quad_part.terms.push_back(t);
    }

    if (!quad_part.terms.empty()) {
        auto poles = detail::distinct_poles(quad_part);
        // Keep the contour tight enough that e_z varies by at most ~e^2.5
        // around it; large swings would eat the quadrature's accuracy.
        for (const auto& p : poles) {
            double half_dist = std::numeric_limits<double>::infinity();
            for (const auto& q : poles)
                if (!detail::same_loc(p.loc, q.loc))
                    half_dist = std::min(half_dist, 0.5 * std::abs(p.loc - q.loc));
            double sensitivity = 0.0;
            for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
                double m = grid[j + 1] - grid[j];
                sensitivity += m / std::abs(1.0 + m * p.loc);
            }
            double radius = std::min({1.0, half_dist, 2.5 / std::max(sensitivity, 1e-30)});
            detail::add_residues(quad_part, grid, p.loc, radius, out.values.samples);
        }
    }
    return out;
}

// Classical inverse on the Reals mesh: z^(-beta) -> t^(beta-1)/Gamma(beta),
// single poles -> t^(m-1) e^(lambda t)/(m-1)!, multi-pole rational terms by
// the same contour-quadrature residues with e^(zt).
inline InverseResult invert_on_reals_closed_form(const ZExpr& F, const TimeScaleSpec& ts,
                                                 std::size_t N) {
    if (!ts.classical_mode())
        throw InvalidTimeScale("closed-form inversion lives on the Reals variant");
    InverseResult out;
    out.method = InverseMethod::reals_closed_form;
    out.values.ts = ts;
    out.values.points = make_grid(ts, N);
    out.values.samples.assign(N, 0.0);
    out.pole_report = detail::distinct_poles(F);
    const auto& grid = out.values.points;

    ZExpr quad_part;
    for (const auto& t : F.terms) {
        if (t.poles.empty()) {
            if (t.exponent >= 0.0)
                throw NotInvertibleTerm("nonnegative exponent has no classical inverse: " +
                                        detail::fmt_real(t.exponent));
            double beta = -t.exponent;
            double g = gamma_fn(beta);
            for (std::size_t j = 0; j < N; ++j) {
                double tv = grid[j];
                if (tv == 0.0) {
                    if (beta > 1.0)
                        ;  // t^(beta-1) vanishes
                    else if (beta == 1.0)
                        out.values.samples[j] += t.coeff;
                    else
                        out.values.samples[j] = cplx(std::numeric_limits<double>::infinity(), 0);
                    continue;
                }
                out.values.samples[j] += t.coeff * std::pow(tv, beta - 1.0) / g;
            }
            continue;
        }
        if (!detail::is_int(t.exponent) || t.exponent > 0.0)
            throw NotInvertibleTerm(
                "mixed fractional power with poles has no closed-form classical inverse");
        if (t.poles.size() == 1) {
            const Pole& p = t.poles[0];
            int m = p.order;
            double fact = 1.0;
            for (int i = 2; i < m; ++i) fact *= i;
            for (std::size_t j = 0; j < N; ++j) {
                double tv = grid[j];
                cplx tp = m == 1 ? cplx(1.0) : cplx(std::pow(tv, m - 1) / fact, 0.0);
                out.values.samples[j] += t.coeff * tp * std::exp(p.loc * tv);
            }
            continue;
        }
        quad_part.terms.push_back(t);
    }

    if (!quad_part.terms.empty()) {
        auto poles = detail::distinct_poles(quad_part);
        double tmax = grid.back();
        for (const auto& p : poles) {
            double half_dist = std::numeric_limits<double>::infinity();
            for (const auto& q : poles)
                if (!detail::same_loc(p.loc, q.loc))
                    half_dist = std::min(half_dist, 0.5 * std::abs(p.loc - q.loc));
            double radius = std::min({1.0, half_dist, 2.5 / std::max(tmax, 1e-30)});
            std::vector<cplx> acc(N, 0.0);
            std::vector<cplx> prev, cur;
            for (std::size_t M = 64;; M *= 2) {
                cur.assign(N, 0.0);
                for (std::size_t m = 0; m < M; ++m) {
                    double th = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(M);
                    cplx offset = radius * std::exp(cplx(0.0, th));
                    cplx z = p.loc + offset;
                    cplx w = offset / static_cast<double>(M);
                    cplx Fz = zexpr_eval(quad_part, z);
                    for (std::size_t j = 0; j < N; ++j)
                        cur[j] += w * std::exp(z * grid[j]) * Fz;
                }
                if (!prev.empty()) {
                    double worst = 0.0;
                    for (std::size_t j = 0; j < N; ++j)
                        worst = std::max(
                            worst, std::abs(cur[j] - prev[j]) / std::max(1.0, std::abs(cur[j])));
                    if (worst < 1e-12) break;
                }
                if (M >= 8192)
                    throw QuadratureFailure("residue contour quadrature did not settle");
                prev = cur;
            }
            for (std::size_t j = 0; j < N; ++j) out.values.samples[j] += cur[j];
        }
    }
    return out;
}

struct CollocationOptions {
    double z0 = 0.5;
    double r = 1.35;
    // The solving ladder caps its span at this many decades; the documented
    // default ratio above applies only when it stays inside that window.
    double window_decades = 1.0;
    double circle_margin = 1.6;
    std::size_t min_buffer = 48;
};

namespace detail {

inline std::vector<double> grid_steps(const std::vector<double>& grid) {
    std::vector<double> mus(grid.size() - 1);
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) mus[j] = grid[j + 1] - grid[j];
    return mus;
}

template <typename Scalar>
inline void model_row(const std::vector<double>& mus, std::complex<Scalar> z,
                      std::vector<std::complex<Scalar>>& row) {
    std::complex<Scalar> run(1.0, 0.0);
    row.resize(mus.size());
    for (std::size_t j = 0; j < mus.size(); ++j) {
        run /= std::complex<Scalar>(1.0, 0.0) + Scalar(mus[j]) * z;
        row[j] = Scalar(mus[j]) * run;
    }
}

}  // namespace detail

// Least-squares collocation inverse. The same linear system
//   sum_j f(t_j) mu_j prod_{i<=j} (1+mu_i z)^{-1} = F(z)
// is solved on two node families: a circle |1+z| = R for pole-only
// transforms (near-unitary system, pointwise-accurate), and a positive real
// ladder for branch-cut transforms, where the window is capped and the solve
// runs in extended precision. Unknowns are buffered past the requested
// horizon so the truncation tail stays below the residual floor.
inline InverseResult invert_collocation(const ZExpr& F, const TimeScaleSpec& ts, std::size_t N,
                                        const CollocationOptions& opts = {}) {
    if (ts.classical_mode())
        throw InvalidTimeScale("collocation inverse is for discrete scales");
    if (N < 2) throw InvalidCount("collocation needs a horizon of at least 2");

    std::size_t M = std::max(2 * N, opts.min_buffer);
    if (!zexpr_is_rational(F)) M = std::max(M, std::size_t{64});
    if (ts.kind == TSKind::ExplicitGrid) M = std::min(M, ts.pts.size() - 1);
    if (M < N) throw HorizonExceeded("grid too short for the requested horizon");
    // M unknowns need M graininess steps, hence M+1 grid points
    auto grid = make_grid(ts, M + 1);
    auto mus = detail::grid_steps(grid);
    double mu_min = *std::min_element(mus.begin(), mus.end());
    double mu_max = *std::max_element(mus.begin(), mus.end());

    auto poles = detail::distinct_poles(F);
    for (auto& p : poles) {
        p.regressive = true;
        for (std::size_t j = 0; j < mus.size(); ++j)
            if (std::abs(1.0 + mus[j] * p.loc) <= kRegressiveTol) p.regressive = false;
    }

    InverseResult out;
    out.method = InverseMethod::collocation;
    out.pole_report = poles;
    out.values.ts = ts;
    out.values.points.assign(grid.begin(), grid.begin() + static_cast<long>(N));
    out.values.samples.assign(N, 0.0);

    std::size_t K = 2 * M;

    if (zexpr_is_rational(F)) {
        double R = 2.0;
        for (const auto& p : poles)
            for (double m : {mu_min, mu_max})
                R = std::max(R, ((1.0 - m) + opts.circle_margin * (1.0 + m * std::abs(p.loc))) / m);
        for (int guard = 0; guard < 40; ++guard) {
            bool clear = true;
            for (const auto& p : poles)
                if (std::fabs(std::abs(p.loc + 1.0) - R) <= 1e-6 * (1.0 + std::abs(p.loc)))
                    clear = false;
            if (clear) break;
            R *= 1.07;
        }

        Eigen::MatrixXcd A(K, M);
        Eigen::VectorXcd b(K);
        std::vector<cplx> row;
        for (std::size_t k = 0; k < K; ++k) {
            double th = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(K);
            cplx z = -1.0 + R * std::exp(cplx(0.0, th));
            detail::model_row<double>(mus, z, row);
            for (std::size_t j = 0; j < M; ++j) A(k, j) = row[j];
            b(k) = zexpr_eval(F, z);
        }
        Eigen::VectorXd colnorm = A.colwise().norm();
        for (std::size_t j = 0; j < M; ++j)
            if (colnorm(j) == 0.0) colnorm(j) = 1.0;
        Eigen::MatrixXcd As = A * colnorm.cwiseInverse().asDiagonal();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd.setThreshold(1e-12);
        if (svd.rank() == 0) throw IllConditioned("collocation system has numerical rank 0");
        Eigen::VectorXcd x = colnorm.cwiseInverse().asDiagonal() * svd.solve(b);
        if (!x.allFinite()) throw IllConditioned("collocation solve produced non-finite values");

        double worst = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
            double th = 2.0 * M_PI * (static_cast<double>(k) + 0.5) / static_cast<double>(K);
            cplx z = -1.0 + R * std::exp(cplx(0.0, th));
            detail::model_row<double>(mus, z, row);
            cplx model = 0.0;
            for (std::size_t j = 0; j < M; ++j) model += row[j] * x(j);
            cplx truth = zexpr_eval(F, z);
            worst = std::max(worst, std::abs(model - truth) / std::max(std::abs(truth), 1e-300));
        }
        out.residual = worst;
        for (std::size_t j = 0; j < N; ++j) out.values.samples[j] = x(j);
        return out;
    }

    // branch-cut target: capped real ladder, extended-precision least squares
    using Scalar = long double;
    using cplxl = std::complex<Scalar>;
    double z_start = opts.z0;
    for (const auto& p : poles)
        for (double m : {mu_min, mu_max})
            z_start = std::max(z_start, (1.45 * (1.0 + m * std::abs(p.loc)) - 1.0) / m);
    double r_eff = std::min(opts.r, std::pow(10.0, opts.window_decades /
                                                       static_cast<double>(K - 1)));

    using MatL = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using VecL = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    MatL A(K, M);
    VecL bre(K), bim(K);
    std::vector<cplxl> rowl;
    std::vector<double> ladder(K);
    for (std::size_t k = 0; k < K; ++k) {
        ladder[k] = z_start * std::pow(r_eff, static_cast<double>(k));
        cplxl z(static_cast<Scalar>(ladder[k]), 0.0L);
        detail::model_row<Scalar>(mus, z, rowl);
        for (std::size_t j = 0; j < M; ++j) A(k, j) = rowl[j].real();
        cplxl v = zexpr_eval_ld(F, z);
        bre(k) = v.real();
        bim(k) = v.imag();
    }
    // No column scaling here: the truncated pseudoinverse must pick the
    // minimum-norm representative in the raw sample variable, or the weakly
    // determined tail coefficients blow up and oscillate. Truncating at 1e-12
    // also keeps the condition of the solved subsystem within the 1e12
    // budget that IllConditioned polices.
    Eigen::JacobiSVD<MatL> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(Scalar(1e-12));
    if (svd.rank() < static_cast<long>(std::min<std::size_t>(N, 8)))
        throw IllConditioned("collocation ladder carries too little usable information");
    VecL xre = svd.solve(bre);
    VecL xim = svd.solve(bim);
    if (!xre.allFinite() || !xim.allFinite())
        throw IllConditioned("collocation solve produced non-finite values");

    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t k = (K - 2) * i / (N - 1);
        double zm = z_start * std::pow(r_eff, static_cast<double>(k) + 0.5);
        cplxl z(static_cast<Scalar>(zm), 0.0L);
        detail::model_row<Scalar>(mus, z, rowl);
        cplxl model = 0.0L;
        for (std::size_t j = 0; j < M; ++j)
            model += rowl[j] * cplxl(xre(j), xim(j));
        cplxl truth = zexpr_eval_ld(F, z);
        long double err = std::abs(model - truth) /
                          std::max(std::abs(truth), (long double)1e-300);
        worst = std::max(worst, static_cast<double>(err));
    }
    out.residual = worst;
    for (std::size_t j = 0; j < N; ++j)
        out.values.samples[j] = cplx(static_cast<double>(xre(j)), static_cast<double>(xim(j)));
    return out;
}

// Routing policy shared by the fractional operators and the CLI.
inline InverseResult invert_auto(const ZExpr& F, const TimeScaleSpec& ts, std::size_t N,
                                 bool allow_collocation,
                                 const CollocationOptions& opts = {}) {
    if (ts.classical_mode()) return invert_on_reals_closed_form(F, ts, N);
    if (zexpr_is_rational(F)) return invert_rational(F, ts, N);
    if (!allow_collocation) throw NeedsCollocation(F);
    return invert_collocation(F, ts, N, opts);
}

}  // namespace tsfrac
