#include <catch_amalgamated.hpp>

#include <cmath>

#include "hgm/gallery.hpp"
#include "hgm/gm.hpp"
#include "hgm/profile_parse.hpp"
#include "hgm/transforms.hpp"

using namespace hgm;

TEST_CASE("parsed profiles match their catalogue twins") {
    SECTION("unit box with inverse square tail") {
        RadialProfile parsed = parse_profile("0:1 const 1; 1:inf pow 1 -2");
        const RadialProfile& twin = gallery_profile("power_tail_2").profile;
        for (double t : log_grid(1e-3, 1e3, 7)) {
            CHECK(parsed.eval(t) == twin.eval(t));
            // junction derivatives are side conventions; integrals never see them
            if (t != 1.0) CHECK(parsed.deriv(t) == twin.deriv(t));
        }
        REQUIRE(parsed.breakpoints.size() == 1);
        CHECK(parsed.breakpoints[0] == 1.0);
        CHECK(parsed.atoms.empty());  // continuous junction
        REQUIRE(parsed.tail.has_value());
        CHECK(parsed.tail->coef == 1.0);
        CHECK(parsed.tail->exponent == 2.0);
        CHECK(parsed.tail->var_coef == 1.0);
        CHECK(parsed.tail->var_exp() == 2.0);
        REQUIRE(parsed.origin.has_value());
        CHECK(parsed.origin->coef == 1.0);
        CHECK(parsed.origin->exponent == 0.0);

        auto grid = default_gm_grid(parsed);
        CHECK(gm_fit_constant(parsed, 1, grid) ==
              Catch::Approx(gm_fit_constant(twin, 1, grid)).epsilon(1e-13));
    }

    SECTION("truncated exponential") {
        RadialProfile parsed = parse_profile("0:1 exp 1 -1");
        const GalleryEntry& te = gallery_profile("trunc_exp");
        CHECK(parsed.support_end == 1.0);
        REQUIRE(parsed.atoms.size() == 1);
        CHECK(parsed.atoms[0].t == 1.0);
        CHECK(parsed.atoms[0].jump == Catch::Approx(-std::exp(-1.0)).epsilon(1e-15));
        for (double t : {0.1, 0.5, 0.99}) {
            CHECK(parsed.eval(t) == te.profile.eval(t));
            CHECK(parsed.deriv(t) == te.profile.deriv(t));
        }
        CHECK(parsed.eval(1.0) == te.profile.eval(1.0));
        CHECK(parsed.eval(1.5) == 0.0);

        BesselOrder half(-0.5);
        PartialIntegralResult r = partial_hankel(parsed, half, 2.0, 1.0, 1e-10);
        CHECK(r.value == Catch::Approx(te.transform(2.0)).margin(2e-10));
    }

    SECTION("oscillating amplitude") {
        RadialProfile parsed = parse_profile("0:inf cospow 1 -0.5 1");
        const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
        for (double t : log_grid(1e-2, 1e2, 5)) {
            CHECK(parsed.eval(t) == Catch::Approx(cs.profile.eval(t)).margin(1e-15));
            CHECK(parsed.deriv(t) == Catch::Approx(cs.profile.deriv(t)).margin(1e-14));
        }
        CHECK(parsed.osc_freq == 1.0);
        REQUIRE(parsed.origin.has_value());
        CHECK(parsed.origin->exponent == 0.5);
        CHECK(parsed.origin->deriv_coef == 1.5);
        CHECK(parsed.origin->deriv_exponent == 1.5);
        REQUIRE(parsed.tail.has_value());
        CHECK(parsed.tail->exponent == 0.5);
        CHECK(parsed.tail->var_coef < 0.0);  // no integrable variation envelope

        BesselOrder half(-0.5);
        PartialIntegralResult r = hankel_limit(parsed, half, 2.0, 1e-6);
        CHECK(r.value == Catch::Approx(cs.transform(2.0)).margin(3e-6));
    }
}

TEST_CASE("parsed junctions carry jumps and variation") {
    RadialProfile p = parse_profile("0:2 const 1; 2:4 const 0.25; 4:inf pow 100 -3");
    REQUIRE(p.atoms.size() == 2);
    CHECK(p.atoms[0].t == 2.0);
    CHECK(p.atoms[0].jump == Catch::Approx(-0.75).epsilon(1e-15));
    CHECK(p.atoms[1].t == 4.0);
    CHECK(p.atoms[1].jump == Catch::Approx(100.0 / 64.0 - 0.25).epsilon(1e-15));
    CHECK(p.breakpoints == std::vector<double>{2.0, 4.0});

    // jumps plus the smooth tail piece: 0.75 + 1.3125 + 100 (4^-3 - 8^-3)
    CHECK(variation(p, 1.0, 8.0) == Catch::Approx(3.4296875).epsilon(1e-10));

    // side limits land on the correct pieces under the (lo, hi] convention
    CHECK(p.eval(2.0) == 1.0);
    CHECK(p.eval(4.0) == 0.25);
    CHECK(p.eval(4.000000001) == Catch::Approx(100.0 * std::pow(4.000000001, -3.0)));
}

TEST_CASE("profiles without a usable tail envelope") {
    RadialProfile growing = parse_profile("0:inf exp 1 0.5");
    CHECK_FALSE(growing.tail.has_value());
    BesselOrder half(-0.5);
    CHECK_THROWS_AS(hankel_limit(growing, half, 1.0, 1e-6), Error);

    RadialProfile linear = parse_profile("0:inf pow 1 1");
    REQUIRE(linear.tail.has_value());
    CHECK(linear.tail->exponent == -1.0);  // recorded as growth
    CHECK_THROWS_AS(hankel_limit(linear, half, 1.0, 1e-6), DivergenceError);
}

TEST_CASE("decaying exponential tails are certified through a power envelope") {
    RadialProfile p = parse_profile("0:inf exp 1 -1");
    REQUIRE(p.tail.has_value());
    CHECK(p.tail->exponent == 8.0);
    // the envelope must actually dominate: spot check t^8 e^-t <= K
    for (double t : {1.0, 4.0, 8.0, 20.0, 50.0}) {
        CHECK(std::pow(t, 8.0) * std::exp(-t) <= p.tail->coef * (1.0 + 1e-12));
    }
    BesselOrder half(-0.5);
    // cosine transform of e^-t is 1/(1+u^2)
    PartialIntegralResult r = hankel_limit(p, half, 3.0, 1e-8);
    CHECK(r.value == Catch::Approx(0.1).margin(1e-7));
    CHECK(m_weight(p, half) == Catch::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("malformed profile descriptions are rejected") {
    CHECK_THROWS_AS(parse_profile(""), Error);
    CHECK_THROWS_AS(parse_profile("   ;  "), Error);
    CHECK_THROWS_AS(parse_profile("1:2 const 1"), Error);            // must start at 0
    CHECK_THROWS_AS(parse_profile("0:1 const 1; 2:3 const 1"), Error);  // gap
    CHECK_THROWS_AS(parse_profile("0:inf const 1; 1:2 const 1"), Error);  // inf not last
    CHECK_THROWS_AS(parse_profile("0:1 box 1"), Error);              // unknown kind
    CHECK_THROWS_AS(parse_profile("0:1 pow 1"), Error);              // arity
    CHECK_THROWS_AS(parse_profile("0:1 const 1 2"), Error);          // arity
    CHECK_THROWS_AS(parse_profile("0:1 const x"), Error);            // not a number
    CHECK_THROWS_AS(parse_profile("1:1 const 1"), Error);            // empty range
    CHECK_THROWS_AS(parse_profile("0 const 1"), Error);              // missing colon
    CHECK_THROWS_AS(parse_profile("0:1"), Error);                    // missing kind
}

TEST_CASE("separators tolerate blank segments and stray whitespace") {
    RadialProfile a = parse_profile("0:1 const 1; 1:inf pow 1 -2");
    RadialProfile b = parse_profile("  0:1\tconst 1 ;; 1:inf  pow  1  -2 ; ");
    for (double t : {0.5, 1.0, 2.0, 10.0}) CHECK(a.eval(t) == b.eval(t));
    CHECK(b.breakpoints == std::vector<double>{1.0});
}
