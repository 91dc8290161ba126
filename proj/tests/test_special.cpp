#include <catch2/catch_amalgamated.hpp>

#include "tsfrac/gammafn.hpp"
#include "tsfrac/special.hpp"

using namespace tsfrac;
using Catch::Approx;

TEST_CASE("gamma function values") {
    CHECK(gamma_fn(1.0) == Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == Approx(24.0).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(gamma_fn(2.5) == Approx(1.3293403881791370).epsilon(1e-13));
    // reflection-range argument
    CHECK(gamma_fn(-0.5) == Approx(-2.0 * std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("hk closed forms") {
    auto zi = TimeScaleSpec::integers();
    CHECK(hk(zi, 2, 5.0) == 10.0);  // C(5,2)
    CHECK(hk(zi, 3, 6.0) == 20.0);  // C(6,3)
    CHECK(hk(zi, 0, 17.0) == 1.0);
    CHECK(hk(zi, 4, 2.0) == 0.0);  // too few steps

    auto r = TimeScaleSpec::reals();
    CHECK(hk(r, 3, 2.0) == Approx(8.0 / 6.0).epsilon(1e-15));
    CHECK(hk(r, 1, 1.7) == 1.7);

    auto u = TimeScaleSpec::uniform(0.5);
    CHECK(hk(u, 2, 1.0) == Approx(1.0 * 0.5 / 2.0).epsilon(1e-15));

    CHECK_THROWS_AS(hk(zi, -1, 3.0), Error);
    CHECK_THROWS_AS(hk(zi, 2, 2.5), PointNotOnGrid);
}

TEST_CASE("hk recursion agrees with the closed forms") {
    auto zi = TimeScaleSpec::integers();
    auto u = TimeScaleSpec::uniform(0.5);
    for (int k = 0; k <= 6; ++k) {
        for (double t = 0.0; t <= 20.0; t += 1.0) {
            double rec = detail::hk_recursive(zi, k, t, 0.0);
            double ref = hk(zi, k, t);
            CHECK(std::abs(rec - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
        for (double t = 0.0; t <= 20.0; t += 0.5) {
            double rec = detail::hk_recursive(u, k, t, 0.0);
            double ref = hk(u, k, t);
            CHECK(std::abs(rec - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("hk recursion on irregular grids satisfies its derivative rule") {
    auto g = TimeScaleSpec::grid({0.0, 0.5, 1.25, 2.0, 3.5, 5.0, 6.25});
    // h_k stepped through the delta derivative gives h_{k-1}
    for (int k = 1; k <= 4; ++k) {
        auto f = make_grid_function(g, 7, [&](double t) { return cplx(hk(g, k, t), 0.0); });
        auto d = delta_derivative(f);
        for (std::size_t j = 0; j < d.points.size(); ++j)
            CHECK(d.samples[j].real() == Approx(hk(g, k - 1, d.points[j])).margin(1e-12));
    }
}

TEST_CASE("time-scale exponential") {
    auto zi = TimeScaleSpec::integers();
    CHECK(exp_ts(zi, 2.0, 4.0).real() == 81.0);  // 3^4
    CHECK(exp_ts(zi, 2.0, 0.0).real() == 1.0);

    auto u = TimeScaleSpec::uniform(0.5);
    CHECK(exp_ts(u, 2.0, 2.0).real() == Approx(std::pow(2.0, 4)).epsilon(1e-15));

    auto r = TimeScaleSpec::reals();
    CHECK(exp_ts(r, cplx(0.0, 1.0), M_PI).real() == Approx(-1.0).margin(1e-15));

    auto g = TimeScaleSpec::grid({0.0, 1.0, 3.0, 6.0});
    CHECK(exp_ts(g, 1.0, 6.0).real() == Approx(2.0 * 3.0 * 4.0).epsilon(1e-15));

    CHECK_THROWS_AS(exp_ts(zi, -1.0, 3.0), NotRegressive);
}

TEST_CASE("exponential expands as the polynomial series") {
    // e_z(t,0) = sum_k z^k h_k(t,0); on the integers the sum is finite
    auto zi = TimeScaleSpec::integers();
    for (double t = 0.0; t <= 8.0; t += 1.0) {
        for (cplx z : {cplx(0.4, 0.0), cplx(2.0, 0.0), cplx(0.3, 0.7)}) {
            cplx series = 0.0;
            for (int k = 0; k <= static_cast<int>(t); ++k)
                series += std::pow(z, k) * hk(zi, k, t);
            CHECK(std::abs(series - exp_ts(zi, z, t)) <= 1e-10 * std::abs(exp_ts(zi, z, t)));
        }
    }
}

TEST_CASE("regressivity certification") {
    auto zi = TimeScaleSpec::integers();
    CHECK(is_regressive(zi, 2.0, 100).verified_horizon == 100);
    CHECK_THROWS_AS(is_regressive(zi, -1.0, 10), NotRegressive);

    auto g = TimeScaleSpec::grid({0.0, 1.0, 3.0, 6.0});  // mu in {1,2,3}
    CHECK_THROWS_AS(is_regressive(g, -0.5, 3), NotRegressive);
    CHECK(is_regressive(g, 0.5, 4).value == cplx(0.5, 0.0));

    CHECK_THROWS_AS(is_regressive(zi, 2.0, 0), InvalidCount);
}

TEST_CASE("ominus") {
    CHECK(ominus(0.0, 5.0) == cplx(-5.0, 0.0));
    CHECK(ominus(1.0, 1.0) == cplx(-0.5, 0.0));
    CHECK_THROWS_AS(ominus(1.0, -1.0), NotRegressive);

    // ominus inverts the exponential: e_{ominus z} = 1 / e_z on a uniform grid
    auto zi = TimeScaleSpec::integers();
    cplx z = 2.0;
    cplx w = ominus(1.0, z);
    CHECK(std::abs(exp_ts(zi, w, 5.0) * exp_ts(zi, z, 5.0) - 1.0) < 1e-14);
}
