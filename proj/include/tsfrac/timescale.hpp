#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "tsfrac/errors.hpp"

namespace tsfrac {

using cplx = std::complex<double>;

enum class TSKind { Reals, UniformDiscrete, QScale, ExplicitGrid };

// Descriptor of the time scale. Reals carries an evaluation mesh step for the
// numeric paths; the discrete variants generate their grids on demand.
struct TimeScaleSpec {
    TSKind kind = TSKind::UniformDiscrete;
    double h = 1.0;                // UniformDiscrete step
    double q = 2.0, t0 = 1.0;      // QScale ratio and first positive point
    std::vector<double> pts;       // ExplicitGrid points
    double mesh = 1e-3;            // Reals evaluation mesh step

    bool classical_mode() const { return kind == TSKind::Reals; }

    static TimeScaleSpec reals(double mesh_step = 1e-3) {
        if (!(mesh_step > 0))
            throw InvalidTimeScale("reals mesh step must be positive");
        TimeScaleSpec ts;
        ts.kind = TSKind::Reals;
        ts.mesh = mesh_step;
        return ts;
    }
    static TimeScaleSpec uniform(double step) {
        if (!(step > 0))
            throw InvalidTimeScale("uniform step must be positive");
        TimeScaleSpec ts;
        ts.kind = TSKind::UniformDiscrete;
        ts.h = step;
        return ts;
    }
    static TimeScaleSpec integers() { return uniform(1.0); }
    static TimeScaleSpec qscale(double ratio, double start) {
        if (!(ratio > 1.0))
            throw InvalidTimeScale("qscale ratio must exceed 1");
        if (!(start > 0))
            throw InvalidTimeScale("qscale start must be positive");
        TimeScaleSpec ts;
        ts.kind = TSKind::QScale;
        ts.q = ratio;
        ts.t0 = start;
        return ts;
    }
    static TimeScaleSpec grid(std::vector<double> points) {
        if (points.empty() || points.front() != 0.0)
            throw InvalidTimeScale("explicit grid must start at 0");
        for (std::size_t j = 0; j + 1 < points.size(); ++j)
            if (!(points[j] < points[j + 1]))
                throw InvalidTimeScale("explicit grid points must be strictly increasing");
        TimeScaleSpec ts;
        ts.kind = TSKind::ExplicitGrid;
        ts.pts = std::move(points);
        return ts;
    }
};

namespace detail {

inline bool approx_on(double a, double b) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= 1e-9 * scale;
}

// Index of t on the grid of ts, or -1. Discrete variants only.
inline long grid_index(const TimeScaleSpec& ts, double t) {
    switch (ts.kind) {
        case TSKind::UniformDiscrete: {
            double k = t / ts.h;
            double kr = std::round(k);
            if (kr < 0 || !approx_on(kr * ts.h, t)) return -1;
            return static_cast<long>(kr);
        }
        case TSKind::QScale: {
            if (approx_on(t, 0.0)) return 0;
            if (t < 0) return -1;
            double k = std::log(t / ts.t0) / std::log(ts.q);
            double kr = std::round(k);
            if (kr < 0 || !approx_on(ts.t0 * std::pow(ts.q, kr), t)) return -1;
            return static_cast<long>(kr) + 1;  // index 0 is the prepended origin
        }
        case TSKind::ExplicitGrid: {
            for (std::size_t j = 0; j < ts.pts.size(); ++j)
                if (approx_on(ts.pts[j], t)) return static_cast<long>(j);
            return -1;
        }
        default:
            return -1;
    }
}

inline double point_at(const TimeScaleSpec& ts, long j) {
    switch (ts.kind) {
        case TSKind::UniformDiscrete:
            return static_cast<double>(j) * ts.h;
        case TSKind::QScale:
            return j == 0 ? 0.0 : ts.t0 * std::pow(ts.q, static_cast<double>(j - 1));
        case TSKind::ExplicitGrid:
            if (j >= static_cast<long>(ts.pts.size()))
                throw HorizonExceeded("explicit grid has no point at index " + std::to_string(j));
            return ts.pts[static_cast<std::size_t>(j)];
        case TSKind::Reals:
            return static_cast<double>(j) * ts.mesh;
    }
    return 0.0;
}

}  // namespace detail

inline double sigma(const TimeScaleSpec& ts, double t) {
    if (ts.kind == TSKind::Reals) return t;
    long j = detail::grid_index(ts, t);
    if (j < 0) throw PointNotOnGrid(t);
    if (ts.kind == TSKind::ExplicitGrid && j + 1 >= static_cast<long>(ts.pts.size()))
        throw HorizonExceeded("sigma at the last grid point");
    return detail::point_at(ts, j + 1);
}

inline double mu(const TimeScaleSpec& ts, double t) {
    if (ts.kind == TSKind::Reals) return 0.0;
    return sigma(ts, t) - t;
}

// First N grid points from 0. On Reals this is the evaluation mesh.
inline std::vector<double> make_grid(const TimeScaleSpec& ts, std::size_t N) {
    if (N == 0) throw InvalidCount("grid needs at least one point");
    if (ts.kind == TSKind::ExplicitGrid && N > ts.pts.size())
        throw HorizonExceeded("explicit grid has only " + std::to_string(ts.pts.size()) +
                              " points, " + std::to_string(N) + " requested");
    std::vector<double> g(N);
    for (std::size_t j = 0; j < N; ++j) g[j] = detail::point_at(ts, static_cast<long>(j));
    return g;
}

struct GridFunction {
    TimeScaleSpec ts;
    std::vector<double> points;
    std::vector<cplx> samples;

    std::size_t horizon() const { return points.size(); }
};

inline GridFunction make_grid_function(const TimeScaleSpec& ts, std::size_t N,
                                       const std::function<cplx(double)>& f) {
    GridFunction g;
    g.ts = ts;
    g.points = make_grid(ts, N);
    g.samples.resize(N);
    for (std::size_t j = 0; j < N; ++j) g.samples[j] = f(g.points[j]);
    return g;
}

// g(t_j) = (f(t_{j+1}) - f(t_j)) / mu(t_j) on discrete scales (one point shorter);
// on Reals a same-length mesh derivative by central differences, one-sided at the ends.
inline GridFunction delta_derivative(const GridFunction& f) {
    std::size_t N = f.horizon();
    if (N < 2) throw HorizonTooSmall("delta derivative needs at least two samples");
    GridFunction g;
    g.ts = f.ts;
    if (f.ts.classical_mode()) {
        double h = f.ts.mesh;
        g.points = f.points;
        g.samples.resize(N);
        g.samples[0] = (-3.0 * f.samples[0] + 4.0 * f.samples[1] - f.samples[2]) / (2 * h);
        for (std::size_t j = 1; j + 1 < N; ++j)
            g.samples[j] = (f.samples[j + 1] - f.samples[j - 1]) / (2 * h);
        g.samples[N - 1] =
            (3.0 * f.samples[N - 1] - 4.0 * f.samples[N - 2] + f.samples[N - 3]) / (2 * h);
        return g;
    }
    g.points.assign(f.points.begin(), f.points.end() - 1);
    g.samples.resize(N - 1);
    for (std::size_t j = 0; j + 1 < N; ++j) {
        double step = f.points[j + 1] - f.points[j];
        g.samples[j] = (f.samples[j + 1] - f.samples[j]) / step;
    }
    return g;
}

// Delta integral over [a, b): exact Riemann sum on discrete scales, composite
// trapezoid on the Reals mesh.
inline cplx delta_integral(const GridFunction& f, double a, double b) {
    auto find = [&](double t) -> std::size_t {
        for (std::size_t j = 0; j < f.points.size(); ++j)
            if (detail::approx_on(f.points[j], t)) return j;
        throw PointNotOnGrid(t);
    };
    std::size_t ia = find(a), ib = find(b);
    if (ia > ib) throw Error("delta integral needs a <= b");
    cplx acc = 0.0;
    if (f.ts.classical_mode()) {
        for (std::size_t j = ia; j < ib; ++j) {
            double w = f.points[j + 1] - f.points[j];
            acc += 0.5 * w * (f.samples[j] + f.samples[j + 1]);
        }
        return acc;
    }
    for (std::size_t j = ia; j < ib; ++j)
        acc += f.samples[j] * (f.points[j + 1] - f.points[j]);
    return acc;
}

// Textual form used by the CLI: reals | int | uniform:<h> | qscale:<q>:<t0> | grid:<p0,p1,...>
inline TimeScaleSpec parse_timescale(const std::string& text, double reals_mesh = 1e-3) {
    if (text == "reals") return TimeScaleSpec::reals(reals_mesh);
    if (text == "int") return TimeScaleSpec::integers();
    auto num = [&](const std::string& s, const char* what) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw InvalidTimeScale(std::string("bad ") + what + " in time scale spec: '" + s + "'");
        }
    };
    if (text.rfind("uniform:", 0) == 0) return TimeScaleSpec::uniform(num(text.substr(8), "step"));
    if (text.rfind("qscale:", 0) == 0) {
        std::string rest = text.substr(7);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw InvalidTimeScale("qscale spec needs qscale:<q>:<t0>");
        return TimeScaleSpec::qscale(num(rest.substr(0, colon), "ratio"),
                                     num(rest.substr(colon + 1), "start"));
    }
    if (text.rfind("grid:", 0) == 0) {
        std::vector<double> pts;
        std::stringstream ss(text.substr(5));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) pts.push_back(num(item, "grid point"));
        return TimeScaleSpec::grid(std::move(pts));
    }
    throw InvalidTimeScale("unknown time scale spec: '" + text + "'");
}

}  // namespace tsfrac
