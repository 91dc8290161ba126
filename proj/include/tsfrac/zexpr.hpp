#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "tsfrac/errors.hpp"

namespace tsfrac {

using cplx = std::complex<double>;

struct Pole {
    cplx loc;
    int order = 1;
};

// One additive term c * z^p * prod_j (z - loc_j)^(-order_j).
// Canonical form keeps p either a nonnegative integer or a non-integer real;
// integer p <= -1 is folded into a pole at 0.
struct PowerTerm {
    cplx coeff = 0.0;
    double exponent = 0.0;
    std::vector<Pole> poles;
};

struct ZExpr {
    std::vector<PowerTerm> terms;
    bool is_zero() const { return terms.empty(); }
};

namespace detail {

inline constexpr double kExpTol = 1e-9;    // exponent comparison / integer snapping
inline constexpr double kPoleTol = 1e-12;  // pole location comparison

inline bool is_int(double p) { return p == std::round(p); }

inline bool same_loc(cplx a, cplx b) {
    return std::abs(a - b) <= kPoleTol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline bool pole_less(const Pole& a, const Pole& b) {
    if (a.loc.real() != b.loc.real()) return a.loc.real() < b.loc.real();
    if (a.loc.imag() != b.loc.imag()) return a.loc.imag() < b.loc.imag();
    return a.order < b.order;
}

inline int sum_orders(const PowerTerm& t) {
    int s = 0;
    for (const auto& p : t.poles) s += p.order;
    return s;
}

// exponent minus total pole order; the behaviour of the term as z -> infinity
inline double term_degree(const PowerTerm& t) { return t.exponent - sum_orders(t); }

inline void snap_exponent(PowerTerm& t) {
    double r = std::round(t.exponent);
    if (std::fabs(t.exponent - r) <= kExpTol) t.exponent = r;
}

// Merge duplicate pole locations, strip the pole at 0 into the exponent, sort.
inline void normalize_poles(PowerTerm& t) {
    std::vector<Pole> merged;
    for (const auto& p : t.poles) {
        if (same_loc(p.loc, 0.0)) {
            t.exponent -= p.order;
            continue;
        }
        bool found = false;
        for (auto& q : merged)
            if (same_loc(q.loc, p.loc)) {
                q.order += p.order;
                found = true;
                break;
            }
        if (!found) merged.push_back(p);
    }
    std::sort(merged.begin(), merged.end(), pole_less);
    t.poles = std::move(merged);
    snap_exponent(t);
}

inline bool poles_equal(const std::vector<Pole>& a, const std::vector<Pole>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].order != b[i].order || !same_loc(a[i].loc, b[i].loc)) return false;
    return true;
}

inline bool term_before(const PowerTerm& a, const PowerTerm& b) {
    if (a.exponent != b.exponent) return a.exponent > b.exponent;
    if (a.poles.size() != b.poles.size()) return a.poles.size() < b.poles.size();
    for (std::size_t i = 0; i < a.poles.size(); ++i) {
        if (a.poles[i].loc.real() != b.poles[i].loc.real())
            return a.poles[i].loc.real() < b.poles[i].loc.real();
        if (a.poles[i].loc.imag() != b.poles[i].loc.imag())
            return a.poles[i].loc.imag() < b.poles[i].loc.imag();
        if (a.poles[i].order != b.poles[i].order) return a.poles[i].order < b.poles[i].order;
    }
    return false;
}

}  // namespace detail

// Total canonicalization. Terms are rewritten until each is either a pure
// power c z^p or a single-location c z^p/(z-a)^m with p in [0,1); negative
// integer pure powers are stored as poles at 0. That is the (fractional-power
// extended) partial-fraction basis, so equal expressions cancel exactly.
inline ZExpr canonicalize(std::vector<PowerTerm> raw) {
    using namespace detail;
    std::vector<PowerTerm> done;
    while (!raw.empty()) {
        PowerTerm t = std::move(raw.back());
        raw.pop_back();
        if (t.coeff == 0.0) continue;
        normalize_poles(t);
        // distinct pole locations split apart:
        // 1/((z-a)(z-b)) = (1/(a-b)) (1/(z-a) - 1/(z-b))
        if (t.poles.size() >= 2) {
            cplx d = t.poles[0].loc - t.poles[1].loc;
            PowerTerm u = t, v = t;
            u.coeff = t.coeff / d;
            if (u.poles[1].order == 1)
                u.poles.erase(u.poles.begin() + 1);
            else
                u.poles[1].order -= 1;
            v.coeff = -t.coeff / d;
            if (v.poles[0].order == 1)
                v.poles.erase(v.poles.begin());
            else
                v.poles[0].order -= 1;
            raw.push_back(std::move(u));
            raw.push_back(std::move(v));
            continue;
        }
        // powers p >= 1 reduce against the pole, for any real p:
        // z^p/(z-a)^m = z^(p-1)/(z-a)^(m-1) + a z^(p-1)/(z-a)^m
        if (t.exponent >= 1.0 - kExpTol && !t.poles.empty()) {
            PowerTerm a = t, b = t;
            a.exponent -= 1.0;
            if (a.poles[0].order == 1)
                a.poles.erase(a.poles.begin());
            else
                a.poles[0].order -= 1;
            b.exponent -= 1.0;
            b.coeff *= t.poles[0].loc;
            raw.push_back(std::move(a));
            raw.push_back(std::move(b));
            continue;
        }
        // negative powers against a pole raise back into [0,1), the same
        // identity read the other way round:
        // z^p/(z-a)^m = (1/a)(z^(p+1)/(z-a)^m - z^p/(z-a)^(m-1))
        if (t.exponent < -kExpTol && !t.poles.empty()) {
            cplx a = t.poles[0].loc;
            PowerTerm u = t, v = t;
            u.coeff = t.coeff / a;
            u.exponent += 1.0;
            v.coeff = -t.coeff / a;
            if (v.poles[0].order == 1)
                v.poles.erase(v.poles.begin());
            else
                v.poles[0].order -= 1;
            raw.push_back(std::move(u));
            raw.push_back(std::move(v));
            continue;
        }
        if (is_int(t.exponent) && t.exponent <= -1.0) {
            t.poles.push_back(Pole{0.0, static_cast<int>(-t.exponent)});
            t.exponent = 0.0;
            std::sort(t.poles.begin(), t.poles.end(), pole_less);
        }
        done.push_back(std::move(t));
    }
    std::sort(done.begin(), done.end(), term_before);
    ZExpr out;
    for (auto& t : done) {
        bool merged = false;
        for (auto it = out.terms.rbegin(); it != out.terms.rend(); ++it) {
            if (std::fabs(it->exponent - t.exponent) > kExpTol) break;
            if (poles_equal(it->poles, t.poles)) {
                it->coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if (!merged) out.terms.push_back(std::move(t));
    }
    out.terms.erase(std::remove_if(out.terms.begin(), out.terms.end(),
                                   [](const PowerTerm& t) { return t.coeff == 0.0; }),
                    out.terms.end());
    return out;
}

inline ZExpr zexpr_zero() { return ZExpr{}; }

inline ZExpr zexpr_term(cplx c, double exponent, std::vector<Pole> poles = {}) {
    return canonicalize({PowerTerm{c, exponent, std::move(poles)}});
}

inline ZExpr zexpr_const(cplx c) { return zexpr_term(c, 0.0); }

// c / (z - loc)^order
inline ZExpr zexpr_pole(cplx c, cplx loc, int order = 1) {
    return zexpr_term(c, 0.0, {Pole{loc, order}});
}

inline ZExpr zexpr_add(const ZExpr& a, const ZExpr& b) {
    std::vector<PowerTerm> all = a.terms;
    all.insert(all.end(), b.terms.begin(), b.terms.end());
    return canonicalize(std::move(all));
}

inline ZExpr zexpr_scale(const ZExpr& a, cplx c) {
    std::vector<PowerTerm> all = a.terms;
    for (auto& t : all) t.coeff *= c;
    return canonicalize(std::move(all));
}

inline ZExpr zexpr_sub(const ZExpr& a, const ZExpr& b) {
    return zexpr_add(a, zexpr_scale(b, -1.0));
}

namespace detail {

// Exponent with the pole at 0 unfolded back, plus the remaining poles.
inline std::pair<double, std::vector<Pole>> unfold_zero_pole(const PowerTerm& t) {
    double p = t.exponent;
    std::vector<Pole> rest;
    for (const auto& q : t.poles) {
        if (same_loc(q.loc, 0.0))
            p -= q.order;
        else
            rest.push_back(q);
    }
    return {p, rest};
}

}  // namespace detail

// Multiply by z^alpha.
inline ZExpr zexpr_mul_zpow(const ZExpr& a, double alpha) {
    std::vector<PowerTerm> all;
    all.reserve(a.terms.size());
    for (const auto& t : a.terms) {
        auto [p, rest] = detail::unfold_zero_pole(t);
        all.push_back(PowerTerm{t.coeff, p + alpha, std::move(rest)});
    }
    return canonicalize(std::move(all));
}

inline ZExpr zexpr_mul(const ZExpr& a, const ZExpr& b) {
    std::vector<PowerTerm> all;
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) {
            auto [pa, ra] = detail::unfold_zero_pole(ta);
            auto [pb, rb] = detail::unfold_zero_pole(tb);
            ra.insert(ra.end(), rb.begin(), rb.end());
            all.push_back(PowerTerm{ta.coeff * tb.coeff, pa + pb, std::move(ra)});
        }
    return canonicalize(std::move(all));
}

inline double zexpr_max_coeff(const ZExpr& a) {
    double m = 0.0;
    for (const auto& t : a.terms) m = std::max(m, std::abs(t.coeff));
    return m;
}

// Max leftover coefficient of a - b; the symbolic-identity metric.
inline double zexpr_diff_norm(const ZExpr& a, const ZExpr& b) {
    return zexpr_max_coeff(zexpr_sub(a, b));
}

inline bool zexpr_is_rational(const ZExpr& a) {
    for (const auto& t : a.terms)
        if (!detail::is_int(t.exponent)) return false;
    return true;
}

// Decays to zero as |z| grows. Independent of rationality: z^0.5/(z-2) is
// strictly proper even though no residue expansion exists for it.
inline bool zexpr_is_strictly_proper(const ZExpr& a) {
    for (const auto& t : a.terms)
        if (detail::term_degree(t) >= -1e-12) return false;
    return true;
}

namespace detail {

inline cplx ipow(cplx base, int n) {
    cplx acc = 1.0;
    for (int i = 0; i < n; ++i) acc *= base;
    return acc;
}

}  // namespace detail

// Principal-branch evaluation. Non-integer powers reject the branch cut
// (negative real axis); pole proximity rejects within 1e-12.
inline cplx zexpr_eval(const ZExpr& a, cplx z) {
    cplx acc = 0.0;
    for (const auto& t : a.terms) {
        cplx v = t.coeff;
        if (detail::is_int(t.exponent)) {
            int p = static_cast<int>(t.exponent);
            if (p >= 0)
                v *= detail::ipow(z, p);
            else {
                if (std::abs(z) <= detail::kPoleTol) throw PoleEvaluation(z);
                v /= detail::ipow(z, -p);
            }
        } else {
            if (z.imag() == 0.0 && z.real() < 0.0) throw BranchCut(z);
            if (std::abs(z) <= detail::kPoleTol) throw PoleEvaluation(z);
            v *= std::pow(z, cplx(t.exponent));
        }
        for (const auto& p : t.poles) {
            cplx d = z - p.loc;
            if (std::abs(d) <= detail::kPoleTol * std::max(1.0, std::abs(p.loc)))
                throw PoleEvaluation(z);
            v /= detail::ipow(d, p.order);
        }
        acc += v;
    }
    return acc;
}

// Long-double evaluation used by the collocation ray solver.
inline std::complex<long double> zexpr_eval_ld(const ZExpr& a, std::complex<long double> z) {
    using cplxl = std::complex<long double>;
    cplxl acc = 0.0L;
    for (const auto& t : a.terms) {
        cplxl v(static_cast<long double>(t.coeff.real()),
                static_cast<long double>(t.coeff.imag()));
        if (detail::is_int(t.exponent)) {
            int p = static_cast<int>(t.exponent);
            cplxl zp = 1.0L;
            for (int i = 0; i < std::abs(p); ++i) zp *= z;
            v = p >= 0 ? v * zp : v / zp;
        } else {
            v *= std::pow(z, cplxl(static_cast<long double>(t.exponent)));
        }
        for (const auto& p : t.poles) {
            cplxl d = z - cplxl(static_cast<long double>(p.loc.real()),
                                static_cast<long double>(p.loc.imag()));
            for (int i = 0; i < p.order; ++i) v /= d;
        }
        acc += v;
    }
    return acc;
}

// ---- canonical printing ---------------------------------------------------

namespace detail {

inline std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_complex_bare(cplx v) {
    // "a", "a+bi" or "a-bi"; used inside pole factors
    if (v.imag() == 0.0) return fmt_real(v.real());
    std::string s = fmt_real(v.real());
    s += v.imag() < 0 ? "-" : "+";
    s += fmt_real(std::fabs(v.imag()));
    s += "i";
    return s;
}

inline std::string fmt_term(const PowerTerm& t, bool strip_sign) {
    cplx c = t.coeff;
    if (strip_sign) c = -c;
    std::string s;
    bool unit = c == cplx(1.0);
    bool neg_unit = c == cplx(-1.0);
    if (neg_unit) s += "-";
    if (!unit && !neg_unit) {
        if (c.imag() == 0.0)
            s += fmt_real(c.real());
        else
            s += "(" + fmt_complex_bare(c) + ")";
        s += "*";
    }
    if (t.exponent == 0.0)
        s += "1";
    else if (t.exponent == 1.0)
        s += "z";
    else
        s += "z^" + fmt_real(t.exponent);
    if (!t.poles.empty()) {
        s += "/";
        std::string zero_part;
        for (const auto& p : t.poles) {
            if (same_loc(p.loc, 0.0)) {
                zero_part = p.order == 1 ? "z" : "z^" + std::to_string(p.order);
                continue;
            }
            if (p.loc.imag() == 0.0 && p.loc.real() < 0.0)
                s += "(z+" + fmt_real(-p.loc.real()) + ")";
            else
                s += "(z-" + fmt_complex_bare(p.loc) + ")";
            if (p.order > 1) s += "^" + std::to_string(p.order);
        }
        s += zero_part;
    }
    return s;
}

}  // namespace detail

// Deterministic, parseable rendering of the canonical form.
inline std::string zexpr_print(const ZExpr& a) {
    if (a.terms.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto& t = a.terms[i];
        bool neg_real = t.coeff.imag() == 0.0 && t.coeff.real() < 0.0;
        if (i == 0) {
            s += detail::fmt_term(t, false);
        } else if (neg_real) {
            s += " - " + detail::fmt_term(t, true);
        } else {
            s += " + " + detail::fmt_term(t, false);
        }
    }
    return s;
}

}  // namespace tsfrac
