#include <catch2/catch_amalgamated.hpp>

#include "tsfrac/transform.hpp"

using namespace tsfrac;
using Catch::Approx;

TEST_CASE("forward transform on the integers") {
    auto zi = TimeScaleSpec::integers();

    SECTION("constant maps to 1/z") {
        auto f = make_grid_function(zi, 60, [](double) { return cplx(1.0, 0); });
        auto [v, diag] = forward_transform(f, 1.0);
        CHECK(std::abs(v - 1.0) < 1e-12);
        CHECK(diag.reliable());
        CHECK(diag.tail_bound < 1e-10);
    }
    SECTION("identity maps to 1/z^2") {
        auto f = make_grid_function(zi, 80, [](double t) { return cplx(t, 0); });
        auto [v, diag] = forward_transform(f, 1.0);
        CHECK(std::abs(v - 1.0) < 1e-10);
        CHECK(diag.reliable());
    }
    SECTION("exponential maps to its pole term") {
        auto f = make_grid_function(zi, 80, [](double t) { return cplx(std::pow(3.0, t), 0); });
        auto [v, diag] = forward_transform(f, 5.0);
        CHECK(std::abs(v - 1.0 / 3.0) < 1e-10);
        CHECK(diag.reliable());
    }
    SECTION("divergent series reports an unreliable tail") {
        auto f = make_grid_function(zi, 40, [](double t) { return cplx(std::pow(3.0, t), 0); });
        auto [v, diag] = forward_transform(f, 0.5);  // |1+z| < 3: terms grow
        (void)v;
        CHECK_FALSE(diag.reliable());
    }
    SECTION("non-regressive sample point") {
        auto f = make_grid_function(zi, 10, [](double) { return cplx(1.0, 0); });
        CHECK_THROWS_AS(forward_transform(f, cplx(-1.0, 0.0)), NotRegressive);
    }
    SECTION("classical scale is rejected") {
        auto f = make_grid_function(TimeScaleSpec::reals(), 10,
                                    [](double) { return cplx(1.0, 0); });
        CHECK_THROWS_AS(forward_transform(f, 1.0), Error);
    }
}

TEST_CASE("auto transform doubles the horizon until the tail settles") {
    auto zi = TimeScaleSpec::integers();
    auto [v, diag] =
        forward_transform_auto(zi, [](double t) { return cplx(t, 0.0); }, 2.0, 1e-11);
    CHECK(std::abs(v - 0.25) < 1e-10);  // 1/z^2 at z=2
    CHECK(diag.tail_bound < 1e-11);

    auto u = TimeScaleSpec::uniform(0.5);
    auto [w, diag2] =
        forward_transform_auto(u, [](double) { return cplx(1.0, 0.0); }, 3.0, 1e-11);
    CHECK(std::abs(w - 1.0 / 3.0) < 1e-10);
    CHECK(diag2.reliable());
}

TEST_CASE("classical transform by quadrature") {
    SECTION("constant") {
        auto [v, diag] = forward_transform_reals([](double) { return cplx(1.0, 0); }, 2.0, 20.0);
        CHECK(std::abs(v - 0.5) < 1e-8);
        CHECK(diag.reliable());
    }
    SECTION("identity") {
        auto [v, diag] = forward_transform_reals([](double t) { return cplx(t, 0); }, 1.0, 40.0);
        CHECK(std::abs(v - 1.0) < 1e-8);
        (void)diag;
    }
    SECTION("mass concentrated near the origin is not skipped") {
        auto [v, diag] = forward_transform_reals(
            [](double t) { return cplx(t * std::exp(-t), 0); }, 2.0, 30.0, 1e-9);
        CHECK(std::abs(v - 1.0 / 9.0) < 1e-6);
        (void)diag;
    }
    SECTION("growth beyond Re z is refused") {
        CHECK_THROWS_AS(
            forward_transform_reals([](double t) { return cplx(std::exp(2.0 * t), 0); }, 1.0,
                                    20.0),
            TailUnbounded);
    }
}

TEST_CASE("transform of the delta derivative") {
    SECTION("polynomial steps down") {
        auto F = zexpr_pole(1.0, 0.0, 2);  // 1/z^2
        auto G = transform_of_delta_derivative(F, {0.0}, 1);
        CHECK(zexpr_diff_norm(G, zexpr_pole(1.0, 0.0)) == 0.0);
    }
    SECTION("exponential brings down its base") {
        cplx lam(2.0, 0.0);
        auto F = zexpr_pole(1.0, lam);
        auto G = transform_of_delta_derivative(F, {1.0}, 1);
        CHECK(zexpr_diff_norm(G, zexpr_pole(lam, lam)) == 0.0);
    }
    SECTION("zero stays zero") {
        auto G = transform_of_delta_derivative(zexpr_zero(), {0.0, 0.0}, 2);
        CHECK(zexpr_max_coeff(G) == 0.0);
    }
    SECTION("initial-value arity is enforced") {
        CHECK_THROWS_AS(transform_of_delta_derivative(zexpr_pole(1.0, 0.0), {0.0, 0.0}, 1),
                        ArityMismatch);
        CHECK_THROWS_AS(transform_of_delta_derivative(zexpr_pole(1.0, 0.0), {}, 0),
                        InvalidCount);
    }
}

TEST_CASE("initial values from the transform limit") {
    SECTION("exponential starts at one") {
        auto iv = initial_values_from_zexpr(zexpr_pole(1.0, cplx(2.0, 0.0)), 1);
        REQUIRE(iv.size() == 1);
        CHECK(std::abs(iv[0] - 1.0) < 1e-15);
    }
    SECTION("h1 starts flat then rises") {
        auto iv = initial_values_from_zexpr(zexpr_pole(1.0, 0.0, 2), 2);
        REQUIRE(iv.size() == 2);
        CHECK(std::abs(iv[0]) == 0.0);
        CHECK(std::abs(iv[1] - 1.0) < 1e-15);
    }
    SECTION("branch-cut transforms have no finite start") {
        CHECK_THROWS_AS(initial_values_from_zexpr(zexpr_term(1.0, -0.5), 1),
                        NonFiniteInitialValue);
    }
}

TEST_CASE("initial values from grid samples") {
    auto zi = TimeScaleSpec::integers();
    SECTION("h2 vanishes twice") {
        auto f = make_grid_function(zi, 8, [](double t) { return cplx(t * (t - 1) / 2, 0); });
        auto iv = initial_values_from_grid(f, 2);
        CHECK(std::abs(iv[0]) == 0.0);
        CHECK(std::abs(iv[1]) == 0.0);
    }
    SECTION("exponential carries its scaled differences") {
        auto f = make_grid_function(zi, 8, [](double t) { return cplx(std::pow(3.0, t), 0); });
        auto iv = initial_values_from_grid(f, 2);
        CHECK(std::abs(iv[0] - 1.0) == 0.0);
        CHECK(std::abs(iv[1] - 2.0) == 0.0);
    }
    SECTION("constant") {
        auto f = make_grid_function(zi, 4, [](double) { return cplx(5.0, 0); });
        auto iv = initial_values_from_grid(f, 1);
        CHECK(std::abs(iv[0] - 5.0) == 0.0);
    }
}
