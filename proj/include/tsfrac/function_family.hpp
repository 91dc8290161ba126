#pragma once

#include <cstddef>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tsfrac/special.hpp"
#include "tsfrac/timescale.hpp"
#include "tsfrac/zexpr.hpp"

namespace tsfrac {

namespace detail {

// Accepts "2", "-0.5", "1e-3", "1+1i", "2-0.25i", "0.5i", "i", "-i".
inline cplx parse_complex_literal(const std::string& text) {
    const char* p = text.c_str();
    double re = 0.0, im = 0.0;
    bool seen_re = false, seen_im = false;
    auto bad = [&]() { throw ParseError("bad complex literal '" + text + "'", 0); };
    while (*p) {
        const char* q = p;
        double sign = 1.0;
        if (*q == '+' || *q == '-') {
            sign = *q == '-' ? -1.0 : 1.0;
            ++q;
        }
        if (*q == 'i' || *q == 'I') {  // bare imaginary unit
            if (seen_im) bad();
            im += sign;
            seen_im = true;
            p = q + 1;
            continue;
        }
        char* end = nullptr;
        double v = std::strtod(p, &end);
        if (end == p) bad();
        p = end;
        if (*p == 'i' || *p == 'I') {
            if (seen_im) bad();
            im += v;
            seen_im = true;
            ++p;
        } else {
            if (seen_re) bad();
            re += v;
            seen_re = true;
        }
    }
    if (!seen_re && !seen_im) bad();
    return cplx(re, im);
}

}  // namespace detail

// A named test function bound to a time scale: pointwise values, the shifted
// two-argument kernel form used by convolution, and the exact transform when
// the family has one.
struct FunctionFamily {
    std::string text;
    std::optional<ZExpr> transform;              // with lower limit 0
    std::function<cplx(double)> value;           // f(t)
    std::function<cplx(double, double)> kernel;  // g(t, s); empty for samples
    std::optional<GridFunction> grid;            // the samples arm
    bool sampled() const { return grid.has_value(); }
};

// Reads a t,re[,im] CSV and checks the t column against the time scale's grid.
inline GridFunction read_samples_csv(const std::string& path, const TimeScaleSpec& ts) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open samples file '" + path + "'");
    std::vector<double> tcol;
    std::vector<cplx> vals;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (first && !cells.empty() && cells[0].find_first_not_of("+-.0123456789eE") !=
                                           std::string::npos) {
            first = false;  // header row
            continue;
        }
        first = false;
        if (cells.size() < 2)
            throw Error("samples row needs t and re columns: '" + line + "'");
        try {
            tcol.push_back(std::stod(cells[0]));
            double re = std::stod(cells[1]);
            double im = cells.size() > 2 && !cells[2].empty() ? std::stod(cells[2]) : 0.0;
            vals.emplace_back(re, im);
        } catch (const std::exception&) {
            throw Error("bad samples row: '" + line + "'");
        }
    }
    if (tcol.size() < 2) throw Error("samples file needs at least two rows");
    std::vector<double> expected = make_grid(ts, tcol.size());
    for (std::size_t j = 0; j < tcol.size(); ++j)
        if (!detail::approx_on(tcol[j], expected[j]))
            throw Error("samples t column does not follow the time scale at row " +
                        std::to_string(j));
    GridFunction f;
    f.ts = ts;
    f.points = std::move(expected);
    f.samples = std::move(vals);
    return f;
}

// Grammar: hk:<k> | exp:<lambda> | const:<m> | poly:<c0,c1,...> | samples:<path.csv>
inline FunctionFamily parse_function_family(const std::string& spec, const TimeScaleSpec& ts) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParseError("function spec needs the form name:args, got '" + spec + "'", 0);
    std::string name = spec.substr(0, colon), args = spec.substr(colon + 1);
    FunctionFamily fam;
    fam.text = spec;
    if (name == "hk") {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(args, &used);
            if (used != args.size() || k < 0) throw std::invalid_argument(args);
        } catch (const std::exception&) {
            throw ParseError("hk:<k> needs a nonnegative integer, got '" + args + "'", colon + 1);
        }
        fam.transform = zexpr_term(1.0, -(k + 1.0));
        fam.value = [ts, k](double t) { return cplx(hk(ts, k, t), 0.0); };
        fam.kernel = [ts, k](double t, double s) { return cplx(hk(ts, k, t, s), 0.0); };
    } else if (name == "exp") {
        cplx lam = detail::parse_complex_literal(args);
        fam.transform = zexpr_pole(1.0, lam);
        fam.value = [ts, lam](double t) { return exp_ts(ts, lam, t); };
        fam.kernel = [ts, lam](double t, double s) { return exp_ts(ts, lam, t, s); };
    } else if (name == "const") {
        cplx m = detail::parse_complex_literal(args);
        fam.transform = zexpr_term(m, -1.0);
        fam.value = [m](double) { return m; };
        fam.kernel = [m](double, double) { return m; };
    } else if (name == "poly") {
        std::vector<cplx> coef;
        std::stringstream ss(args);
        std::string item;
        while (std::getline(ss, item, ',')) coef.push_back(detail::parse_complex_literal(item));
        if (coef.empty()) throw ParseError("poly needs at least one coefficient", colon + 1);
        ZExpr F = zexpr_zero();
        for (std::size_t k = 0; k < coef.size(); ++k)
            F = zexpr_add(F, zexpr_term(coef[k], -(static_cast<double>(k) + 1.0)));
        fam.transform = F;
        fam.value = [ts, coef](double t) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < coef.size(); ++k)
                acc += coef[k] * hk(ts, static_cast<int>(k), t);
            return acc;
        };
        fam.kernel = [ts, coef](double t, double s) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < coef.size(); ++k)
                acc += coef[k] * hk(ts, static_cast<int>(k), t, s);
            return acc;
        };
    } else if (name == "samples") {
        fam.grid = read_samples_csv(args, ts);
        const GridFunction& g = *fam.grid;
        fam.value = [g](double t) {
            for (std::size_t j = 0; j < g.points.size(); ++j)
                if (detail::approx_on(g.points[j], t)) return g.samples[j];
            throw PointNotOnGrid(t);
        };
        // no kernel: samples carry no two-argument shift structure
    } else {
        throw ParseError("unknown function family '" + name + "'", 0);
    }
    return fam;
}

}  // namespace tsfrac
