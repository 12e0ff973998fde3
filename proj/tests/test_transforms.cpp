#include <catch_amalgamated.hpp>

#include <cmath>

#include "hgm/gallery.hpp"
#include "hgm/transforms.hpp"

using namespace hgm;

namespace {

// e^{-t^2/2}: its order-alpha transform is 2^alpha Gamma(alpha+1) e^{-u^2/2}
// for every alpha, which pins all three kernel orders with one profile
RadialProfile gauss_profile() {
    RadialProfile p;
    p.name = "gauss";
    p.eval = [](double t) { return std::exp(-0.5 * t * t); };
    p.deriv = [](double t) { return -t * std::exp(-0.5 * t * t); };
    p.origin = OriginBound{1.0, 0.0, 1.0, 1.0, 0.0};
    // t^6 e^{-t^2/2} peaks at 6^3 e^{-3}; same cap serves the variation
    p.tail = TailBound{10.75, 6.0, 1.0, 10.75, 6.0};
    return p;
}

double gauss_transform(double alpha, double u) {
    return std::pow(2.0, alpha) * std::tgamma(alpha + 1.0) * std::exp(-0.5 * u * u);
}

}  // namespace

TEST_CASE("partial transforms against closed forms") {
    const GalleryEntry& te = gallery_profile("trunc_exp");
    BesselOrder half(-0.5);

    SECTION("compact support: the partial integral at N = 1 is the transform") {
        for (double u : {0.0, 1.0, 2.0, 7.0}) {
            PartialIntegralResult r = partial_hankel(te.profile, half, u, 1.0, 1e-10);
            INFO("u = " << u);
            CHECK(r.value == Catch::Approx(te.transform(u)).margin(2e-10));
            CHECK(std::abs(r.value - te.transform(u)) <= r.error_estimate + 1e-12);
        }
        // truncating beyond the support changes nothing
        PartialIntegralResult r5 = partial_hankel(te.profile, half, 2.0, 5.0, 1e-10);
        CHECK(r5.value == Catch::Approx(te.transform(2.0)).margin(2e-10));
    }

    SECTION("u = 0 reduces to the plain weighted integral") {
        const GalleryEntry& p32 = gallery_profile("power_tail_3_2");
        PartialIntegralResult r = partial_hankel(p32.profile, half, 0.0, 100.0, 1e-10);
        CHECK(r.value == Catch::Approx(1.0 + 2.0 * (1.0 - std::pow(100.0, -0.5))).epsilon(1e-9));
    }

    SECTION("degenerate windows") {
        CHECK(partial_hankel(te.profile, half, 1.0, 0.0, 1e-10).value == 0.0);
        CHECK_THROWS_AS(partial_hankel(te.profile, half, -1.0, 1.0, 1e-10), Error);
        CHECK_THROWS_AS(partial_hankel(te.profile, half, 1.0, 1.0, 0.0), Error);
    }

    SECTION("nonintegrable origin is rejected") {
        const GalleryEntry& pp2 = gallery_profile("pure_power_2");
        CHECK_THROWS_AS(partial_hankel(pp2.profile, half, 1.0, 10.0, 1e-8), Error);
    }

    SECTION("all kernel orders on the gaussian") {
        RadialProfile g = gauss_profile();
        for (double alpha : {-0.5, 0.0, 1.0}) {
            for (double u : {0.5, 2.0}) {
                // N = 40 leaves a remainder far below the tolerance
                PartialIntegralResult r = partial_hankel(g, BesselOrder(alpha), u, 40.0, 1e-9);
                INFO("alpha = " << alpha << ", u = " << u);
                CHECK(r.value == Catch::Approx(gauss_transform(alpha, u)).margin(1e-8));
            }
        }
    }
}

TEST_CASE("transform limits") {
    BesselOrder half(-0.5);

    SECTION("gaussian, all orders, through the oscillatory cascade") {
        RadialProfile g = gauss_profile();
        for (double alpha : {-0.5, 0.0, 1.0}) {
            for (double u : {0.5, 2.0}) {
                PartialIntegralResult r = hankel_limit(g, BesselOrder(alpha), u, 1e-8);
                INFO("alpha = " << alpha << ", u = " << u);
                CHECK(r.value == Catch::Approx(gauss_transform(alpha, u)).margin(1e-7));
            }
        }
    }

    SECTION("slowly decaying amplitude: values off the singular frequency") {
        const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
        for (double u : {1.5, 2.0, 5.0}) {
            PartialIntegralResult r = hankel_limit(cs.profile, half, u, 1e-6);
            INFO("u = " << u);
            CHECK(r.value == Catch::Approx(cs.transform(u)).margin(3e-6));
        }
        // below the carrier frequency the integral still settles
        PartialIntegralResult r = hankel_limit(cs.profile, half, 0.5, 1e-6);
        CHECK(r.value == Catch::Approx(1.3978902794260023).margin(3e-6));
        PartialIntegralResult r0 = hankel_limit(cs.profile, half, 0.0, 1e-6);
        CHECK(r0.value == Catch::Approx(std::sqrt(pi / 2.0)).margin(3e-6));
    }

    SECTION("resonance at u = 1 diverges") {
        const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
        CHECK_THROWS_AS(hankel_limit(cs.profile, half, 1.0, 1e-6), DivergenceError);
    }

    SECTION("fresnel: sqrt(pi/2) out of a conditionally convergent integral") {
        const GalleryEntry& fr = gallery_profile("fresnel_check");
        PartialIntegralResult r = hankel_limit(fr.profile, half, 1.0, 1e-7);
        CHECK(r.value == Catch::Approx(std::sqrt(pi / 2.0)).margin(1e-6));
        // at u = 0 the oscillation is gone and t^{-1/2} just accumulates
        CHECK_THROWS_AS(hankel_limit(fr.profile, half, 0.0, 1e-6), DivergenceError);
    }

    SECTION("absolutely convergent tails at u = 0") {
        const GalleryEntry& p32 = gallery_profile("power_tail_3_2");
        CHECK(hankel_limit(p32.profile, half, 0.0, 1e-7).value == Catch::Approx(3.0).margin(1e-6));
        const GalleryEntry& p2 = gallery_profile("power_tail_2");
        CHECK(hankel_limit(p2.profile, half, 0.0, 1e-7).value == Catch::Approx(2.0).margin(1e-6));
        const GalleryEntry& ad = gallery_profile("alternating_dyadic");
        CHECK(hankel_limit(ad.profile, half, 0.0, 1e-8).value ==
              Catch::Approx(5.0 / 3.0).margin(1e-7));
    }

    SECTION("compact support short-circuits") {
        const GalleryEntry& te = gallery_profile("trunc_exp");
        PartialIntegralResult r = hankel_limit(te.profile, half, 2.0, 1e-10);
        CHECK(r.value == Catch::Approx(te.transform(2.0)).margin(2e-10));
    }

    SECTION("missing hints are rejected") {
        RadialProfile bare;
        bare.name = "bare";
        bare.eval = [](double t) { return 1.0 / (1.0 + t * t); };
        bare.origin = OriginBound{1.0, 0.0, 1.0, 1.0, 0.0};
        CHECK_THROWS_AS(hankel_limit(bare, half, 1.0, 1e-6), Error);
    }
}

TEST_CASE("uniform tail windows") {
    BesselOrder half(-0.5);

    SECTION("vanishing for an integrable profile") {
        const GalleryEntry& p2 = gallery_profile("power_tail_2");
        double t1 = uniform_tail(p2.profile, half, {0.0, 1.0}, 10.0, 100.0, 1e-10);
        CHECK(t1 == Catch::Approx(0.09).margin(5e-3));
        double t2 = uniform_tail(p2.profile, half, {0.0, 1.0}, 100.0, 1000.0, 1e-10);
        CHECK(t2 < t1);
    }

    SECTION("stuck near 2(sqrt N - sqrt M)/pi-ish at the singular frequency") {
        const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
        double t1 = uniform_tail(cs.profile, half, {1.0}, 100.0, 1000.0, 1e-8);
        CHECK(t1 > 0.1);
        double t2 = uniform_tail(cs.profile, half, {1.0}, 1000.0, 10000.0, 1e-8);
        CHECK(t2 > t1);  // the window mass grows like sqrt(N)
    }

    SECTION("beyond the support the tail is empty") {
        const GalleryEntry& te = gallery_profile("trunc_exp");
        CHECK(uniform_tail(te.profile, half, {0.0, 1.0, 5.0}, 2.0, 10.0, 1e-10) == 0.0);
    }

    SECTION("M = 0 goes through the certified origin cut") {
        const GalleryEntry& te = gallery_profile("trunc_exp");
        double v = uniform_tail(te.profile, half, {0.0}, 0.0, 1.0, 1e-10);
        CHECK(v == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-9));
    }

    CHECK_THROWS_AS(
        uniform_tail(gallery_profile("trunc_exp").profile, half, {1.0}, 5.0, 2.0, 1e-8), Error);
}

TEST_CASE("weight supremum") {
    BesselOrder half(-0.5);

    CHECK(m_weight(gallery_profile("trunc_exp").profile, half) ==
          Catch::Approx(std::exp(-1.0)).epsilon(1e-8));
    CHECK(m_weight(gallery_profile("power_tail_3_2").profile, half) ==
          Catch::Approx(1.0).epsilon(1e-8));
    CHECK(m_weight(gallery_profile("power_tail_2").profile, half) ==
          Catch::Approx(1.0).epsilon(1e-8));
    CHECK(m_weight(gallery_profile("alternating_dyadic").profile, half) ==
          Catch::Approx(2.0).epsilon(1e-6));
    CHECK(m_weight(gauss_profile(), BesselOrder(0.0)) ==
          Catch::Approx(2.0 * std::exp(-1.0)).epsilon(1e-8));

    // sqrt(t): the weighted sup grows without bound
    CHECK_THROWS_AS(m_weight(gallery_profile("fresnel_check").profile, half), DivergenceError);
    // decay exactly matching the weight cannot be certified either way
    CHECK_THROWS_AS(m_weight(gallery_profile("power_tail_2").profile, BesselOrder(0.0)), Error);

    SECTION("reweighting transports the sup exactly") {
        const RadialProfile& base = gallery_profile("power_tail_3_2").profile;
        for (double alpha : {0.0, 1.0}) {
            RadialProfile moved = weighted(base, -(2.0 * alpha + 1.0));
            INFO("alpha = " << alpha);
            CHECK(m_weight(moved, BesselOrder(alpha)) == Catch::Approx(1.0).epsilon(1e-7));
        }
    }
}

TEST_CASE("supremum of the Stieltjes ladder") {
    BesselOrder half(-0.5);

    CHECK(sup_ibp_integral(gallery_profile("trunc_exp").profile, half) ==
          Catch::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
    CHECK(sup_ibp_integral(gallery_profile("power_tail_3_2").profile, half) ==
          Catch::Approx(3.0).epsilon(1e-5));
    // jump ladder: F runs 0 -> -2.5 -> -1.25 -> ... -> -5/3; spread 2.5
    CHECK(sup_ibp_integral(gallery_profile("alternating_dyadic").profile, half) ==
          Catch::Approx(2.5).epsilon(1e-9));
    CHECK(sup_ibp_integral(gauss_profile(), BesselOrder(0.0)) == Catch::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(sup_ibp_integral(gallery_profile("cos_over_sqrt").profile, half), Error);
}

TEST_CASE("boundedness certificates") {
    BesselOrder half(-0.5);
    const GalleryEntry& te = gallery_profile("trunc_exp");
    std::vector<double> u_grid{0.0, 0.5, 1.0, 2.0, 7.0, 40.0};

    auto [stmt, prf] = cossup_bound_both(te.profile, half, 10.0, GMCertificate(te.C, te.nu),
                                         u_grid);
    // at order -1/2 both S conventions hit sup|cos| = sup|sinc| = 1
    CHECK(stmt.S_used == Catch::Approx(1.0).margin(1e-9));
    CHECK(prf.S_used == Catch::Approx(1.0).margin(1e-6));
    CHECK(stmt.lhs == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-6));
    CHECK(stmt.u_at_lhs == 0.0);
    CHECK(stmt.term_boundary == 0.0);  // N = 10 is past the support
    CHECK(stmt.term_partial == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-8));
    CHECK(stmt.term_sup_ibp == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-5));
    CHECK(stmt.M_used == Catch::Approx(std::exp(-1.0)).margin(1e-8));
    // C lambda (2 lambda)^1 / 1 * (lambda^4 / 3 + 1) * M at C=2, lambda=2
    CHECK(stmt.term_constant ==
          Catch::Approx(2.0 * 2.0 * 4.0 * (16.0 / 3.0 + 1.0) * std::exp(-1.0)).epsilon(1e-6));
    CHECK(stmt.pass());
    CHECK(prf.pass());

    SECTION("boundary term appears when N lands inside the support") {
        BoundReport r = cossup_bound(te.profile, half, 0.5, GMCertificate(te.C, te.nu), u_grid);
        CHECK(r.term_boundary ==
              Catch::Approx(0.5 * std::exp(-0.5) / 0.5).epsilon(1e-10));  // N |f(N)| / (a+1)
        CHECK(r.pass());
    }

    SECTION("the two conventions differ away from order -1/2") {
        RadialProfile moved = weighted(gallery_profile("power_tail_3_2").profile, -1.0);
        double fit = gm_fit_constant(moved, 1, log_grid(0.01, 1e3, 6));
        auto [s0, p0] = cossup_bound_both(moved, BesselOrder(0.0), 10.0,
                                          GMCertificate(fit * 1.05, 1), {0.0, 0.5, 1.0, 5.0});
        CHECK(s0.S_used == Catch::Approx(0.7978832978767062).margin(1e-6));
        CHECK(p0.S_used == Catch::Approx(1.6500617911721463).margin(1e-5));
        CHECK(s0.rhs() < p0.rhs());
        CHECK(s0.pass());
        CHECK(p0.pass());
    }

    CHECK_THROWS_AS(
        cossup_bound(te.profile, half, 1.0, GMCertificate(te.C, te.nu), {}), Error);
}

TEST_CASE("default sweep grid") {
    std::vector<double> u = default_u_grid();
    CHECK(u.size() == 152);
    CHECK(u.front() == 0.0);
    CHECK(u[1] == Catch::Approx(1e-3));
    CHECK(u.back() == Catch::Approx(1e3));
}
