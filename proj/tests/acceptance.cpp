// Acceptance gate: one check per shipping criterion, one PASS/FAIL line each.
// Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <tsfrac/special.hpp>
#include <tsfrac/timescale.hpp>
#include <tsfrac/transform.hpp>
#include <tsfrac/verify.hpp>

using namespace tsfrac;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double rel_err(cplx got, cplx want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", x);
    return buf;
}

// --- criterion 1: h_k recursion vs closed forms on Reals and unit steps ---

bool crit1(std::string& note) {
    auto t0 = clock_type::now();
    double worst = 0.0;

    auto zs = parse_timescale("int");
    for (int k = 0; k <= 6; ++k)
        for (int t = 0; t <= 20; ++t) {
            double closed = 1.0;  // binomial C(t, k), product form
            for (int i = 0; i < k; ++i) closed *= static_cast<double>(t - i) / (i + 1);
            double lib = hk(zs, k, t);
            double rec = detail::hk_recursive(zs, k, t, 0.0);
            double scale = std::max(1.0, std::abs(closed));
            worst = std::max(worst, std::abs(lib - closed) / scale);
            worst = std::max(worst, std::abs(rec - closed) / scale);
        }

    // Reals: run the integral recursion exactly in monomial coefficients.
    auto rs = parse_timescale("reals");
    std::vector<double> coef = {1.0};
    for (int k = 0; k <= 6; ++k) {
        for (double t : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
            double rec = 0.0;
            for (std::size_t i = coef.size(); i-- > 0;) rec = rec * t + coef[i];
            double lib = hk(rs, k, t);
            worst = std::max(worst, std::abs(lib - rec) / std::max(1.0, std::abs(rec)));
        }
        std::vector<double> next(coef.size() + 1, 0.0);
        for (std::size_t i = 0; i < coef.size(); ++i) next[i + 1] = coef[i] / (i + 1.0);
        coef = next;
    }

    double secs = seconds_since(t0);
    note = "max rel " + fmt(worst) + ", " + fmt(secs) + " s";
    return worst <= 1e-12 && secs < 1.0;
}

// --- criterion 2: forward transform of h_k equals z^-(k+1) ---

bool crit2(std::string& note) {
    auto t0 = clock_type::now();
    double worst = 0.0, worst_tail = 0.0;
    const std::vector<cplx> zs = {1.0, 2.0, cplx(1.0, 1.0)};
    for (const char* spec : {"int", "uniform:0.5"}) {
        auto ts = parse_timescale(spec);
        for (int k = 0; k <= 4; ++k) {
            auto f = [&ts, k](double t) { return cplx(hk(ts, k, t)); };
            for (cplx z : zs) {
                auto [val, diag] = forward_transform_auto(ts, f, z, 1e-12);
                cplx want = std::pow(z, -(k + 1.0));
                worst = std::max(worst, rel_err(val, want));
                worst_tail = std::max(worst_tail, diag.tail_bound);
            }
        }
    }
    double secs = seconds_since(t0);
    note = "max rel " + fmt(worst) + ", max tail " + fmt(worst_tail) + ", " + fmt(secs) + " s";
    return worst <= 1e-8 && worst_tail < 1e-10 && secs < 2.0;
}

// --- criterion 3: numeric L[f^delta] = z F(z) - f(0) on unit steps ---

bool crit3(std::string& note) {
    auto ts = parse_timescale("int");
    const std::vector<cplx> zs = {3.0, 5.0, cplx(4.0, 3.0)};
    std::vector<std::function<cplx(double)>> fs = {
        [&ts](double t) { return cplx(hk(ts, 1, t)); },
        [&ts](double t) { return cplx(hk(ts, 2, t)); },
        [&ts](double t) { return exp_ts(ts, 2.0, t); },
    };
    double worst = 0.0;
    for (const auto& f : fs) {
        auto df = [&f](double t) { return f(t + 1.0) - f(t); };
        for (cplx z : zs) {
            cplx F = forward_transform_auto(ts, f, z, 1e-12).first;
            cplx G = forward_transform_auto(ts, df, z, 1e-12).first;
            worst = std::max(worst, rel_err(G, z * F - f(0.0)));
        }
    }
    note = "max rel " + fmt(worst);
    return worst <= 1e-8;
}

// --- criteria 4 + 8 share the inversion suite report ---

bool suite_pass(const VerifyReport& rep, const std::string& prefix, std::size_t expect_count,
                std::string& note) {
    std::size_t count = 0;
    double worst = 0.0;
    bool ok = true;
    for (const auto& e : rep.entries) {
        if (e.id.rfind(prefix, 0) != 0) continue;
        ++count;
        worst = std::max(worst, e.max_error);
        ok = ok && e.pass;
    }
    note = std::to_string(count) + " entries, max err " + fmt(worst);
    return ok && count >= expect_count;
}

// --- criterion 9: CLI determinism ---

bool crit9(std::string& note) {
    auto t0 = clock_type::now();
    std::string a = "/tmp/tsfrac_accept_a.json", b = "/tmp/tsfrac_accept_b.json";
    std::string base = std::string("'") + TSFRAC_CLI_PATH +
                       "' verify --suite all --seed 3 --report json --out ";
    if (std::system((base + a + " 2> /dev/null").c_str()) != 0) {
        note = "verify run failed";
        return false;
    }
    if (std::system((base + b + " 2> /dev/null").c_str()) != 0) {
        note = "verify rerun failed";
        return false;
    }
    auto slurp = [](const std::string& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    std::string ja = slurp(a), jb = slurp(b);
    std::remove(a.c_str());
    std::remove(b.c_str());
    double secs = seconds_since(t0);
    note = std::to_string(ja.size()) + " bytes, " + (ja == jb ? "identical" : "DIFFER") +
           ", " + fmt(secs) + " s for two runs";
    return !ja.empty() && ja == jb && secs < 60.0;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&failures](int n, const char* label, bool pass, const std::string& note) {
        std::printf("criterion %d: %s  %s (%s)\n", n, pass ? "PASS" : "FAIL", label,
                    note.c_str());
        if (!pass) ++failures;
    };

    std::string note;

    report(1, "polynomial recursion vs closed forms", crit1(note), note);
    report(2, "transform table for h_k", crit2(note), note);
    report(3, "derivative rule in the z-domain", crit3(note), note);

    {
        auto t0 = clock_type::now();
        VerifyReport inv = run_suite("inversion", 1);
        double secs = seconds_since(t0);
        bool ok = suite_pass(inv, "RT-", 26, note);
        note += ", " + fmt(secs) + " s";
        report(4, "seeded inversion round trips", ok && secs < 20.0, note);

        bool coll = suite_pass(inv, "COLL-", 3, note);
        report(8, "collocation self-consistency", coll, note);
    }

    {
        VerifyReport prop = run_suite("propositions", 1);
        std::set<std::string> seen;
        for (const auto& e : prop.entries) seen.insert(e.id);
        bool covered = true;
        for (const char* id : {"P3", "P4", "P5", "P6", "P7a", "P7b", "P7c", "PCOMM", "PID",
                               "PDI"})
            covered = covered && seen.count(id) > 0;
        note = std::to_string(prop.entries.size()) + " entries, " +
               (covered ? "all ids covered" : "ids missing");
        report(5, "proposition suite", prop.all_pass() && covered, note);
    }

    {
        VerifyReport ro = run_suite("reals-oracle", 1);
        bool has_prop1 = false;
        for (const auto& e : ro.entries) has_prop1 = has_prop1 || e.id == "PROP1";
        note = std::to_string(ro.entries.size()) + " entries";
        report(6, "continuous-line oracle", ro.all_pass() && has_prop1, note);
    }

    {
        VerifyReport cv = run_suite("convolution", 1);
        note = std::to_string(cv.entries.size()) + " entries";
        report(7, "convolution identities", cv.all_pass(), note);
    }

    report(9, "verify determinism and budget", crit9(note), note);

    if (failures == 0) std::printf("all criteria passed\n");
    return failures;
}
