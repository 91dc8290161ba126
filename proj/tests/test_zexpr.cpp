#include <catch2/catch_amalgamated.hpp>

#include "tsfrac/zexpr.hpp"
#include "tsfrac/zexpr_parse.hpp"

using namespace tsfrac;
using Catch::Approx;

TEST_CASE("parser accepts the documented grammar") {
    auto a = zexpr_parse("1/z^3");
    REQUIRE(a.terms.size() == 1);
    REQUIRE(a.terms[0].poles.size() == 1);
    CHECK(a.terms[0].poles[0].loc == cplx(0.0, 0.0));
    CHECK(a.terms[0].poles[0].order == 3);
    CHECK(a.terms[0].exponent == 0.0);

    auto b = zexpr_parse("2*z^-0.5 + 1/(z-2)");
    CHECK(b.terms.size() == 2);

    auto c = zexpr_parse("z^0.5/(z-2) - z^-0.5");
    CHECK(c.terms.size() == 2);

    auto d = zexpr_parse("1/(z-1-2i)^2");  // the factor is z minus the literal 1-2i
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].poles[0].loc == cplx(1.0, -2.0));
    CHECK(d.terms[0].poles[0].order == 2);

    auto e = zexpr_parse("(0.5+0.5i)*1/(z-1i)");
    REQUIRE(e.terms.size() == 1);
    CHECK(e.terms[0].coeff == cplx(0.5, 0.5));
    CHECK(e.terms[0].poles[0].loc == cplx(0.0, 1.0));

    CHECK(zexpr_parse("0").terms.empty());
    CHECK(zexpr_parse("3.5").terms.size() == 1);
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(zexpr_parse("1/(z-)"), ParseError);
    CHECK_THROWS_AS(zexpr_parse("z^"), ParseError);
    CHECK_THROWS_AS(zexpr_parse("q+1"), ParseError);
    CHECK_THROWS_AS(zexpr_parse("1/(z-2)^0"), ParseError);
    CHECK_THROWS_AS(zexpr_parse("1/(z-2)^1.5"), ParseError);
    CHECK_THROWS_AS(zexpr_parse("1/z^0.5"), ParseError);  // fractional powers go upstairs
    CHECK_THROWS_AS(zexpr_parse("1 + "), ParseError);
}

TEST_CASE("evaluation") {
    CHECK(zexpr_eval(zexpr_parse("1/z^3"), 2.0).real() == Approx(0.125));
    CHECK(zexpr_eval(zexpr_parse("z^-0.5"), 4.0).real() == Approx(0.5));
    CHECK_THROWS_AS(zexpr_eval(zexpr_parse("1/(z-2)"), cplx(2.0, 0.0)), PoleEvaluation);

    auto F = zexpr_parse("2/(z-1)^2 + 0.5*z^-1.5");
    cplx z(3.0, 1.0);
    cplx direct = 2.0 / std::pow(z - 1.0, 2) + 0.5 * std::pow(z, -1.5);
    CHECK(std::abs(zexpr_eval(F, z) - direct) < 1e-14);

    // extended-precision evaluation agrees with the double path
    std::complex<long double> zl(3.0L, 1.0L);
    CHECK(std::abs(static_cast<cplx>(zexpr_eval_ld(F, zl)) - zexpr_eval(F, z)) < 1e-14);
}

TEST_CASE("algebraic operations") {
    auto one_over_z = zexpr_pole(1.0, 0.0);

    SECTION("additive cancellation leaves the empty expression") {
        CHECK(zexpr_add(one_over_z, zexpr_scale(one_over_z, -1.0)).terms.empty());
        CHECK(zexpr_sub(one_over_z, one_over_z).terms.empty());
    }
    SECTION("power shifts") {
        auto r = zexpr_mul_zpow(zexpr_pole(1.0, 0.0, 2), 2.0);
        REQUIRE(r.terms.size() == 1);
        CHECK(r.terms[0].exponent == 0.0);
        CHECK(r.terms[0].poles.empty());
        CHECK(r.terms[0].coeff == cplx(1.0, 0.0));
    }
    SECTION("products stay in canonical shape") {
        auto p = zexpr_mul(zexpr_pole(1.0, 1.0), zexpr_pole(1.0, 2.0));
        for (const auto& t : p.terms) {
            CHECK(t.poles.size() <= 1);
            if (!t.poles.empty()) {
                CHECK(t.exponent >= 0.0);
                CHECK(t.exponent < 1.0);
            }
        }
        cplx z(4.0, 0.5);
        CHECK(std::abs(zexpr_eval(p, z) - 1.0 / ((z - 1.0) * (z - 2.0))) < 1e-14);
    }
    SECTION("max coefficient and diff norm") {
        CHECK(zexpr_max_coeff(zexpr_zero()) == 0.0);
        CHECK(zexpr_max_coeff(zexpr_pole(3.0, 0.0)) == 3.0);
        CHECK(zexpr_diff_norm(one_over_z, one_over_z) == 0.0);
    }
}

TEST_CASE("canonical form is a true partial-fraction basis") {
    SECTION("multi-location products split") {
        auto raw = zexpr_term(1.0, 0.0, {Pole{1.0, 1}, Pole{2.0, 1}});
        auto expected = zexpr_sub(zexpr_pole(1.0, 2.0), zexpr_pole(1.0, 1.0));
        CHECK(zexpr_diff_norm(raw, expected) == 0.0);
    }
    SECTION("exponents at or above one reduce") {
        auto raw = zexpr_term(1.0, 1.0, {Pole{3.0, 1}});  // z/(z-3)
        auto expected = zexpr_add(zexpr_const(1.0), zexpr_pole(3.0, 3.0));
        CHECK(zexpr_diff_norm(raw, expected) == 0.0);
    }
    SECTION("negative exponents raise") {
        auto raw = zexpr_term(1.0, -0.5, {Pole{2.0, 1}});
        auto expected = zexpr_sub(zexpr_scale(zexpr_term(1.0, 0.5, {Pole{2.0, 1}}), 0.5),
                                  zexpr_term(0.5, -0.5));
        CHECK(zexpr_diff_norm(raw, expected) == 0.0);
        cplx z(5.0, 1.0);
        CHECK(std::abs(zexpr_eval(raw, z) - std::pow(z, -0.5) / (z - 2.0)) < 1e-15);
    }
    SECTION("negative integer pure powers fold into poles at zero") {
        auto raw = zexpr_term(1.0, -3.0);
        REQUIRE(raw.terms.size() == 1);
        REQUIRE(raw.terms[0].poles.size() == 1);
        CHECK(raw.terms[0].poles[0].loc == cplx(0.0, 0.0));
        CHECK(raw.terms[0].poles[0].order == 3);
        CHECK(zexpr_diff_norm(raw, zexpr_pole(1.0, 0.0, 3)) == 0.0);
    }
    SECTION("equal expressions built differently cancel exactly") {
        // (z+1)/((z-1)(z-2)) assembled two ways
        auto a = zexpr_add(zexpr_term(1.0, 1.0, {Pole{1.0, 1}, Pole{2.0, 1}}),
                           zexpr_term(1.0, 0.0, {Pole{1.0, 1}, Pole{2.0, 1}}));
        auto b = zexpr_add(zexpr_pole(-2.0, 1.0), zexpr_pole(3.0, 2.0));
        CHECK(zexpr_diff_norm(a, b) == 0.0);
    }
}

TEST_CASE("rationality and properness predicates") {
    CHECK(zexpr_is_rational(zexpr_parse("1/z + 2/(z-1)^2")));
    CHECK_FALSE(zexpr_is_rational(zexpr_parse("z^-0.5")));
    CHECK(zexpr_is_strictly_proper(zexpr_parse("1/z")));
    CHECK(zexpr_is_strictly_proper(zexpr_parse("z^0.5/(z-2)")));
    CHECK_FALSE(zexpr_is_strictly_proper(zexpr_parse("2")));
    CHECK_FALSE(zexpr_is_strictly_proper(zexpr_parse("z^0.5")));
    CHECK(zexpr_is_strictly_proper(zexpr_zero()));
}

TEST_CASE("print and parse round trip") {
    const char* cases[] = {
        "1/(z-2)^2 + 3/z - 1.5*z^-0.5",
        "z^0.5/(z-2)",
        "1/(z-1-2i)",
        "7",
        "0",
        "2/(z-0.5)^3 + 1/z^2",
        "1/(z+1) + 1/(z+0.25)^2",
    };
    for (const char* text : cases) {
        auto F = zexpr_parse(text);
        auto G = zexpr_parse(zexpr_print(F));
        CHECK(zexpr_diff_norm(F, G) == 0.0);
    }
    CHECK(zexpr_print(zexpr_zero()) == "0");
}
