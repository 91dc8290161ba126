#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsfrac/fracops.hpp"
#include "tsfrac/function_family.hpp"
#include "tsfrac/verify.hpp"
#include "tsfrac/zexpr_parse.hpp"

namespace {

using tsfrac::cplx;

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_scalar(cplx v) {
    if (v.imag() == 0.0) return fmt17(v.real());
    std::string s = fmt17(v.real());
    std::string im = fmt17(v.imag());
    if (!im.empty() && im[0] != '-') s += '+';
    return s + im + "i";
}

struct OutSpec {
    std::string format;  // "csv", "json", or "plain"
    std::string path;    // empty means stdout
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(),
                                                  suffix) == 0;
}

// --out takes a path, or the literal format name as a shorthand for stdout;
// an explicit --format always wins.
OutSpec resolve_out(const std::string& out, const std::string& format,
                    const std::string& dflt) {
    OutSpec o;
    o.format = format.empty() ? dflt : format;
    if (out.empty()) return o;
    if (out == "csv" || out == "json") {
        if (format.empty()) o.format = out;
        return o;
    }
    o.path = out;
    if (format.empty()) {
        if (ends_with(out, ".json")) o.format = "json";
        else if (ends_with(out, ".csv")) o.format = "csv";
    }
    return o;
}

void emit(const OutSpec& o, const std::string& payload) {
    if (o.path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(o.path, std::ios::binary);
    if (!f) throw tsfrac::Error("cannot open output file '" + o.path + "'");
    f << payload;
}

std::string series_csv(const tsfrac::GridFunction& g) {
    std::string s = "t,re,im\n";
    for (std::size_t j = 0; j < g.points.size() && j < g.samples.size(); ++j)
        s += fmt17(g.points[j]) + "," + fmt17(g.samples[j].real()) + "," +
             fmt17(g.samples[j].imag()) + "\n";
    return s;
}

nlohmann::ordered_json series_values(const tsfrac::GridFunction& g) {
    auto arr = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < g.points.size() && j < g.samples.size(); ++j) {
        nlohmann::ordered_json row;
        row["t"] = g.points[j];
        row["re"] = g.samples[j].real();
        row["im"] = g.samples[j].imag();
        arr.push_back(row);
    }
    return arr;
}

struct SeriesMeta {
    std::string ts;
    std::optional<std::string> method;
    std::optional<double> residual;
    std::optional<std::string> transform;
    std::optional<double> alpha;
    std::vector<cplx> iv;
};

// CSV keeps the fixed t,re,im layout, so the labeling goes to stderr there;
// JSON carries the same fields inline.
void emit_series(const OutSpec& o, const tsfrac::GridFunction& g, const SeriesMeta& meta) {
    if (o.format == "csv") {
        if (meta.method) {
            std::cerr << "method: " << *meta.method;
            if (meta.residual) std::cerr << " residual: " << fmt17(*meta.residual);
            std::cerr << "\n";
        }
        if (meta.transform) std::cerr << "transform: " << *meta.transform << "\n";
        emit(o, series_csv(g));
        return;
    }
    if (o.format != "json") throw UsageError("series output supports csv or json");
    nlohmann::ordered_json j;
    j["schema"] = "1";
    j["ts"] = meta.ts;
    if (meta.alpha) j["alpha"] = *meta.alpha;
    if (meta.transform) j["transform"] = *meta.transform;
    if (!meta.iv.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (cplx v : meta.iv) {
            nlohmann::ordered_json e;
            e["re"] = v.real();
            e["im"] = v.imag();
            arr.push_back(e);
        }
        j["iv"] = arr;
    }
    if (meta.method) j["method"] = *meta.method;
    j["residual"] = nullptr;
    if (meta.residual) j["residual"] = *meta.residual;
    j["values"] = series_values(g);
    emit(o, j.dump(2) + "\n");
}

void emit_scalar(const OutSpec& o, cplx value, const std::string& what, double at) {
    if (o.format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = "1";
        j["what"] = what;
        j["t"] = at;
        j["re"] = value.real();
        j["im"] = value.imag();
        emit(o, j.dump(2) + "\n");
    } else if (o.format == "csv") {
        emit(o, "t,re,im\n" + fmt17(at) + "," + fmt17(value.real()) + "," +
                    fmt17(value.imag()) + "\n");
    } else {
        emit(o, fmt_scalar(value) + "\n");
    }
}

struct SharedFlags {
    std::string ts_text = "int";
    std::string out;
    std::string format;
    std::optional<std::uint64_t> horizon;
    std::optional<double> tmax;
    double mesh = 1e-3;
    bool allow_collocation = false;
    std::uint64_t seed = 1;
    std::optional<double> tol;
};

void add_shared(CLI::App* cmd, SharedFlags& fl) {
    cmd->add_option("--ts", fl.ts_text,
                    "time scale: reals | int | uniform:<h> | qscale:<q>:<t0> | grid:<t0,...>");
    cmd->add_option("--out", fl.out, "output path, or literal csv/json for stdout");
    cmd->add_option("--format", fl.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--horizon", fl.horizon, "number of grid points");
    cmd->add_option("--tmax", fl.tmax, "largest time to cover (alternative to --horizon)");
    cmd->add_option("--mesh", fl.mesh, "grid step used on the real line");
    cmd->add_flag("--allow-collocation", fl.allow_collocation,
                  "opt in to the collocation surrogate for non-rational transforms");
    cmd->add_option("--seed", fl.seed, "random seed (verify suites)");
    cmd->add_option("--tol", fl.tol, "numeric tolerance where the subcommand has one");
}

std::size_t resolve_horizon(const tsfrac::TimeScaleSpec& ts, const SharedFlags& fl,
                            std::size_t dflt = 64) {
    if (fl.horizon && fl.tmax) throw UsageError("--horizon and --tmax are exclusive");
    if (fl.horizon) {
        if (*fl.horizon < 1) throw UsageError("--horizon needs at least one point");
        if (ts.kind == tsfrac::TSKind::ExplicitGrid && *fl.horizon > ts.pts.size())
            throw UsageError("--horizon exceeds the explicit grid");
        return static_cast<std::size_t>(*fl.horizon);
    }
    if (fl.tmax) {
        double T = *fl.tmax;
        if (T < 0.0) throw UsageError("--tmax needs a nonnegative time");
        std::size_t n = 1;
        for (long j = 1;; ++j) {
            double t;
            try {
                t = tsfrac::detail::point_at(ts, j);
            } catch (const std::exception&) {
                break;
            }
            if (t > T * (1.0 + 1e-12) + 1e-12) break;
            n = static_cast<std::size_t>(j) + 1;
        }
        return n;
    }
    if (ts.kind == tsfrac::TSKind::Reals)
        return static_cast<std::size_t>(std::floor(1.0 / ts.mesh + 1e-9)) + 1;
    if (ts.kind == tsfrac::TSKind::ExplicitGrid) return std::min<std::size_t>(dflt, ts.pts.size());
    return dflt;
}

std::vector<cplx> parse_complex_list(const std::vector<std::string>& items) {
    std::vector<cplx> out;
    for (const auto& s : items) out.push_back(tsfrac::detail::parse_complex_literal(s));
    return out;
}

SeriesMeta meta_for(const tsfrac::InverseResult& r, const tsfrac::TimeScaleSpec&,
                    const std::string& ts_text) {
    SeriesMeta m;
    m.ts = ts_text;
    m.method = tsfrac::method_name(r.method);
    if (r.residual) m.residual = *r.residual;
    return m;
}

void check_collocation_tol(const tsfrac::InverseResult& r, const SharedFlags& fl) {
    double bar = fl.tol.value_or(1e-6);
    if (r.method == tsfrac::InverseMethod::collocation && r.residual && *r.residual > bar) {
        std::ostringstream os;
        os << "collocation residual " << fmt17(*r.residual) << " exceeds tolerance "
           << fmt17(bar);
        throw tsfrac::Error(os.str());
    }
}

int run_verify(const SharedFlags& fl, const std::string& suite, const std::string& report) {
    if (report != "json" || (!fl.format.empty() && fl.format != "json"))
        throw UsageError("the verification report is JSON; use --report json");
    tsfrac::VerifyReport rep = tsfrac::run_suite(suite, fl.seed);
    OutSpec o = resolve_out(fl.out, "json", "json");
    emit(o, tsfrac::report_json(rep).dump(2) + "\n");
    std::cerr << "suite " << suite << ": " << rep.entries.size() << " entries, wall "
              << rep.wall_seconds << " s\n";
    return rep.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional calculus on time scales via the generalized Laplace transform"};
    app.require_subcommand(1);

    SharedFlags fl;

    auto* c_hk = app.add_subcommand("hk", "evaluate the generalized polynomial h_k(t, t0)");
    int hk_k = 0;
    double hk_t = 0.0, hk_t0 = 0.0;
    c_hk->add_option("--k", hk_k, "polynomial index")->required();
    c_hk->add_option("--t", hk_t, "evaluation point")->required();
    c_hk->add_option("--t0", hk_t0, "lower limit");
    add_shared(c_hk, fl);

    auto* c_exp = app.add_subcommand("exp", "evaluate the time-scale exponential e_lambda");
    std::string exp_lambda;
    std::optional<double> exp_t;
    c_exp->add_option("--lambda", exp_lambda, "regressive constant (complex literal)")
        ->required();
    c_exp->add_option("--t", exp_t, "single evaluation point; omit for a series");
    add_shared(c_exp, fl);

    auto* c_tr = app.add_subcommand("transform", "numeric generalized Laplace transform");
    std::string tr_f;
    std::vector<std::string> tr_z;
    c_tr->add_option("--f", tr_f, "function family: hk:<k> | exp:<l> | const:<m> | "
                                  "poly:<c0,...> | samples:<path.csv>")
        ->required();
    c_tr->add_option("--z", tr_z, "sample points (complex literals)")
        ->required()
        ->delimiter(';');
    add_shared(c_tr, fl);

    auto* c_inv = app.add_subcommand("invert", "residue / closed-form inverse transform");
    std::string inv_expr;
    c_inv->add_option("--zexpr", inv_expr, "transform expression in z")->required();
    add_shared(c_inv, fl);

    auto* c_fi = app.add_subcommand("fracint", "fractional integral of order alpha");
    auto* c_fd = app.add_subcommand("fracderiv", "fractional derivative of order alpha");
    std::string fi_f, fi_expr, fd_f, fd_expr;
    double fi_alpha = 0.0, fd_alpha = 0.0;
    std::vector<std::string> fd_iv;
    c_fi->add_option("--f", fi_f, "function family input");
    c_fi->add_option("--zexpr", fi_expr, "symbolic transform input");
    c_fi->add_option("--alpha", fi_alpha, "order, >= 0")->required();
    add_shared(c_fi, fl);
    c_fd->add_option("--f", fd_f, "function family input");
    c_fd->add_option("--zexpr", fd_expr, "symbolic transform input");
    c_fd->add_option("--alpha", fd_alpha, "order, > 0")->required();
    c_fd->add_option("--iv", fd_iv, "initial values f^(delta^k)(0), k=0..n-1")
        ->delimiter(',');
    add_shared(c_fd, fl);

    auto* c_cv = app.add_subcommand("convolve", "time-scale convolution with a shift kernel");
    std::string cv_f, cv_g;
    c_cv->add_option("--f", cv_f, "function family for f")->required();
    c_cv->add_option("--g", cv_g, "kernel family for g(t, s); samples not allowed")
        ->required();
    add_shared(c_cv, fl);

    auto* c_vf = app.add_subcommand("verify", "run the verification suites");
    std::string vf_suite, vf_report = "json";
    c_vf->add_option("--suite", vf_suite,
                     "polynomials | transform | inversion | propositions | reals-oracle | "
                     "convolution | all")
        ->required();
    c_vf->add_option("--report", vf_report, "report format (json)");
    add_shared(c_vf, fl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        tsfrac::TimeScaleSpec ts = tsfrac::parse_timescale(fl.ts_text, fl.mesh);

        if (app.got_subcommand(c_hk)) {
            double v = tsfrac::hk(ts, hk_k, hk_t, hk_t0);
            emit_scalar(resolve_out(fl.out, fl.format, "plain"), v, "hk", hk_t);
            return 0;
        }

        if (app.got_subcommand(c_exp)) {
            cplx lam = tsfrac::detail::parse_complex_literal(exp_lambda);
            if (exp_t) {
                cplx v = tsfrac::exp_ts(ts, lam, *exp_t);
                emit_scalar(resolve_out(fl.out, fl.format, "plain"), v, "exp", *exp_t);
                return 0;
            }
            std::size_t N = resolve_horizon(ts, fl);
            auto g = tsfrac::make_grid_function(
                ts, N, [&](double t) { return tsfrac::exp_ts(ts, lam, t); });
            SeriesMeta meta;
            meta.ts = fl.ts_text;
            emit_series(resolve_out(fl.out, fl.format, "csv"), g, meta);
            return 0;
        }

        if (app.got_subcommand(c_tr)) {
            tsfrac::FunctionFamily fam = tsfrac::parse_function_family(tr_f, ts);
            std::vector<cplx> zs = parse_complex_list(tr_z);
            double tol = fl.tol.value_or(1e-10);
            std::string csv = "z_re,z_im,re,im,tail_bound\n";
            auto arr = nlohmann::ordered_json::array();
            for (cplx z : zs) {
                cplx val;
                double tail;
                if (fam.sampled()) {
                    auto [v, diag] = tsfrac::forward_transform(*fam.grid, z);
                    val = v;
                    tail = diag.tail_bound;
                } else {
                    auto [v, diag] = tsfrac::forward_transform_auto(ts, fam.value, z, tol);
                    val = v;
                    tail = diag.tail_bound;
                }
                csv += fmt17(z.real()) + "," + fmt17(z.imag()) + "," + fmt17(val.real()) +
                       "," + fmt17(val.imag()) + "," + fmt17(tail) + "\n";
                nlohmann::ordered_json row;
                row["z_re"] = z.real();
                row["z_im"] = z.imag();
                row["re"] = val.real();
                row["im"] = val.imag();
                row["tail_bound"] = tail;
                arr.push_back(row);
            }
            OutSpec o = resolve_out(fl.out, fl.format, "csv");
            if (o.format == "json") {
                nlohmann::ordered_json j;
                j["schema"] = "1";
                j["ts"] = fl.ts_text;
                j["f"] = tr_f;
                j["points"] = arr;
                emit(o, j.dump(2) + "\n");
            } else {
                emit(o, csv);
            }
            return 0;
        }

        if (app.got_subcommand(c_inv)) {
            tsfrac::ZExpr F = tsfrac::zexpr_parse(inv_expr);
            std::size_t N = resolve_horizon(ts, fl);
            tsfrac::InverseResult r =
                tsfrac::invert_auto(F, ts, N, fl.allow_collocation);
            check_collocation_tol(r, fl);
            SeriesMeta meta = meta_for(r, ts, fl.ts_text);
            meta.transform = tsfrac::zexpr_print(F);
            emit_series(resolve_out(fl.out, fl.format, "csv"), r.values, meta);
            return 0;
        }

        if (app.got_subcommand(c_fi) || app.got_subcommand(c_fd)) {
            bool deriv = app.got_subcommand(c_fd);
            const std::string& fam_text = deriv ? fd_f : fi_f;
            const std::string& expr_text = deriv ? fd_expr : fi_expr;
            double alpha = deriv ? fd_alpha : fi_alpha;
            if (fam_text.empty() == expr_text.empty())
                throw UsageError("give exactly one of --f or --zexpr");
            if (deriv && alpha <= 0.0) throw UsageError("fracderiv needs alpha > 0");
            if (alpha < 0.0) throw UsageError("alpha must be nonnegative");

            tsfrac::FracPipelineInput in;
            if (!expr_text.empty()) {
                in = tsfrac::FracPipelineInput::from_transform(tsfrac::zexpr_parse(expr_text));
            } else {
                tsfrac::FunctionFamily fam = tsfrac::parse_function_family(fam_text, ts);
                if (fam.sampled())
                    in = tsfrac::FracPipelineInput::from_samples(*fam.grid);
                else
                    in = tsfrac::FracPipelineInput::from_transform(*fam.transform);
            }
            if (deriv && !fd_iv.empty()) {
                if (!in.transform)
                    throw UsageError("--iv applies to the symbolic arm only");
                in.iv = parse_complex_list(fd_iv);
            }

            tsfrac::FracOrder o = tsfrac::FracOrder::of(alpha);
            std::size_t N = resolve_horizon(ts, fl);
            tsfrac::ZExpr base = tsfrac::detail::resolve_transform(in);
            tsfrac::InitialValues iv;
            tsfrac::ZExpr Fz;
            if (deriv) {
                iv = tsfrac::detail::resolve_iv(in, base, o.n);
                Fz = tsfrac::frac_derivative_z(base, iv, o);
            } else {
                Fz = tsfrac::frac_integral_z(base, o);
            }
            tsfrac::InverseResult r;
            try {
                r = tsfrac::invert_auto(Fz, ts, N, fl.allow_collocation);
            } catch (const tsfrac::NeedsCollocation& e) {
                std::cerr << e.what() << "\n"
                          << "transform: " << tsfrac::zexpr_print(Fz) << "\n";
                return 1;
            }
            check_collocation_tol(r, fl);
            SeriesMeta meta = meta_for(r, ts, fl.ts_text);
            meta.transform = tsfrac::zexpr_print(Fz);
            meta.alpha = alpha;
            meta.iv = iv;
            emit_series(resolve_out(fl.out, fl.format, "csv"), r.values, meta);
            return 0;
        }

        if (app.got_subcommand(c_cv)) {
            tsfrac::FunctionFamily ff = tsfrac::parse_function_family(cv_f, ts);
            tsfrac::FunctionFamily fg = tsfrac::parse_function_family(cv_g, ts);
            if (!fg.kernel) throw UsageError("--g needs a kernel family, not samples");
            std::size_t N = resolve_horizon(ts, fl);
            tsfrac::GridFunction f =
                ff.sampled() ? *ff.grid : tsfrac::make_grid_function(ts, N, ff.value);
            tsfrac::GridFunction out = tsfrac::convolve(f, fg.kernel, ts, N);
            SeriesMeta meta;
            meta.ts = fl.ts_text;
            emit_series(resolve_out(fl.out, fl.format, "csv"), out, meta);
            return 0;
        }

        if (app.got_subcommand(c_vf)) return run_verify(fl, vf_suite, vf_report);

        throw UsageError("no subcommand selected");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const tsfrac::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const tsfrac::InvalidTimeScale& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const tsfrac::NeedsCollocation& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
