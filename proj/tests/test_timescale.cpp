#include <catch2/catch_amalgamated.hpp>

#include "tsfrac/timescale.hpp"

using namespace tsfrac;
using Catch::Approx;

TEST_CASE("parse_timescale grammar") {
    CHECK(parse_timescale("int").kind == TSKind::UniformDiscrete);
    CHECK(parse_timescale("int").h == 1.0);
    CHECK(parse_timescale("reals").kind == TSKind::Reals);
    CHECK(parse_timescale("reals", 1e-2).mesh == 1e-2);
    CHECK(parse_timescale("uniform:0.5").h == 0.5);

    auto q = parse_timescale("qscale:2:1");
    CHECK(q.kind == TSKind::QScale);
    CHECK(q.q == 2.0);
    CHECK(q.t0 == 1.0);

    auto g = parse_timescale("grid:0,1,3,6");
    REQUIRE(g.kind == TSKind::ExplicitGrid);
    REQUIRE(g.pts.size() == 4);
    CHECK(g.pts[2] == 3.0);

    CHECK_THROWS_AS(parse_timescale("lattice"), InvalidTimeScale);
    CHECK_THROWS_AS(parse_timescale("uniform:abc"), InvalidTimeScale);
    CHECK_THROWS_AS(parse_timescale("qscale:2"), InvalidTimeScale);
}

TEST_CASE("spec constructors enforce their invariants") {
    CHECK_THROWS_AS(TimeScaleSpec::uniform(0.0), InvalidTimeScale);
    CHECK_THROWS_AS(TimeScaleSpec::uniform(-1.0), InvalidTimeScale);
    CHECK_THROWS_AS(TimeScaleSpec::qscale(1.0, 1.0), InvalidTimeScale);
    CHECK_THROWS_AS(TimeScaleSpec::qscale(2.0, 0.0), InvalidTimeScale);
    CHECK_THROWS_AS(TimeScaleSpec::grid({1.0, 2.0}), InvalidTimeScale);  // must start at 0
    CHECK_THROWS_AS(TimeScaleSpec::grid({0.0, 2.0, 2.0}), InvalidTimeScale);
    CHECK_THROWS_AS(TimeScaleSpec::grid({0.0, 2.0, 1.0}), InvalidTimeScale);

    CHECK(TimeScaleSpec::reals().classical_mode());
    CHECK_FALSE(TimeScaleSpec::integers().classical_mode());
    CHECK_FALSE(TimeScaleSpec::qscale(2.0, 1.0).classical_mode());
}

TEST_CASE("sigma and mu") {
    auto zi = TimeScaleSpec::integers();
    CHECK(sigma(zi, 3.0) == 4.0);
    CHECK(mu(zi, 5.0) == 1.0);

    auto q = TimeScaleSpec::qscale(2.0, 1.0);
    CHECK(sigma(q, 4.0) == 8.0);
    CHECK(mu(q, 4.0) == 4.0);

    auto r = TimeScaleSpec::reals();
    CHECK(sigma(r, 1.7) == 1.7);
    CHECK(mu(r, 1.7) == 0.0);

    auto g = TimeScaleSpec::grid({0.0, 1.0, 3.0, 6.0});
    CHECK(mu(g, 1.0) == 2.0);
    CHECK(sigma(g, 3.0) == 6.0);

    CHECK_THROWS_AS(sigma(zi, 0.5), PointNotOnGrid);
    CHECK_THROWS_AS(sigma(g, 6.0), HorizonExceeded);
}

TEST_CASE("make_grid prefixes") {
    auto zi = TimeScaleSpec::integers();
    CHECK(make_grid(zi, 4) == std::vector<double>{0.0, 1.0, 2.0, 3.0});

    auto u = make_grid(TimeScaleSpec::uniform(0.5), 3);
    CHECK(u[1] == 0.5);
    CHECK(u[2] == 1.0);

    auto g = TimeScaleSpec::grid({0.0, 1.0, 3.0, 6.0});
    CHECK(make_grid(g, 3) == std::vector<double>{0.0, 1.0, 3.0});
    CHECK_THROWS_AS(make_grid(g, 5), HorizonExceeded);
    CHECK_THROWS_AS(make_grid(zi, 0), InvalidCount);

    auto q = make_grid(TimeScaleSpec::qscale(2.0, 1.0), 4);
    CHECK(q == std::vector<double>{0.0, 1.0, 2.0, 4.0});
}

TEST_CASE("delta derivative on discrete scales") {
    auto zi = TimeScaleSpec::integers();

    SECTION("h2 steps down to h1") {
        auto f = make_grid_function(zi, 10, [](double t) { return cplx(t * (t - 1) / 2, 0); });
        auto d = delta_derivative(f);
        REQUIRE(d.points.size() == 9);
        for (std::size_t j = 0; j < d.points.size(); ++j)
            CHECK(d.samples[j].real() == d.points[j]);
    }
    SECTION("constants go to zero") {
        auto f = make_grid_function(zi, 6, [](double) { return cplx(1.0, 0); });
        auto d = delta_derivative(f);
        for (auto v : d.samples) CHECK(v == cplx(0.0, 0.0));
    }
    SECTION("3^t scales by 2") {
        auto f = make_grid_function(zi, 12, [](double t) { return cplx(std::pow(3.0, t), 0); });
        auto d = delta_derivative(f);
        for (std::size_t j = 0; j < d.points.size(); ++j)
            CHECK(d.samples[j].real() == Approx(2.0 * std::pow(3.0, d.points[j])));
    }
}

TEST_CASE("delta derivative on the reals mesh") {
    auto r = TimeScaleSpec::reals(1e-3);
    auto f = make_grid_function(r, 101, [](double t) { return cplx(t * t, 0); });
    auto d = delta_derivative(f);
    REQUIRE(d.points.size() == f.points.size());
    for (std::size_t j = 0; j < d.points.size(); ++j)
        CHECK(d.samples[j].real() == Approx(2.0 * d.points[j]).margin(1e-9));
}

TEST_CASE("delta integral") {
    auto zi = TimeScaleSpec::integers();
    auto ones = make_grid_function(zi, 8, [](double) { return cplx(1.0, 0); });
    CHECK(delta_integral(ones, 0.0, 5.0).real() == 5.0);

    auto g = TimeScaleSpec::grid({0.0, 1.0, 3.0, 6.0});
    auto f = make_grid_function(g, 4, [](double t) { return cplx(t, 0); });
    CHECK(delta_integral(f, 0.0, 3.0).real() == 2.0);

    auto r = TimeScaleSpec::reals(1e-3);
    auto c = make_grid_function(r, 2001, [](double) { return cplx(1.0, 0); });
    CHECK(delta_integral(c, 0.0, 2.0).real() == Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(delta_integral(ones, 0.0, 7.5), PointNotOnGrid);
}
