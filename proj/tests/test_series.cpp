#include <catch_amalgamated.hpp>

#include <cmath>

#include "hgm/gallery.hpp"
#include "hgm/series.hpp"

using namespace hgm;

TEST_CASE("partial sums") {
    const SequenceEntry& inv2 = gallery_sequence("inv_square");
    // at x = 0 the series telescopes to sum 1/n^2 = pi^2/6 - O(1/N)
    double s = cosine_partial_sum(inv2.seq, 100000, 0.0);
    CHECK(s == Catch::Approx(pi * pi / 6.0).margin(1.1e-5));

    // block sum equals the difference of partial sums
    double x = 0.73;
    double block = partial_sum_block(inv2.seq, 50, 200, x);
    double diff = cosine_partial_sum(inv2.seq, 200, x) - cosine_partial_sum(inv2.seq, 50, x);
    CHECK(block == Catch::Approx(diff).margin(1e-13));

    // finite support truncates silently
    SequenceProfile fin;
    fin.name = "fin";
    fin.term = [](std::size_t) { return 1.0; };
    fin.support_end = 3;
    CHECK(cosine_partial_sum(fin, 100, 0.0) == 4.0);
}

TEST_CASE("dirichlet kernel") {
    // closed form against the explicit sum away from the singular points
    for (double x : {0.3, 1.0, 2.0, 3.1}) {
        std::size_t N = 50;
        KahanSum direct;
        direct.add(1.0);
        for (std::size_t n = 1; n <= N; ++n) direct.add(2.0 * std::cos(double(n) * x));
        CHECK(dirichlet_kernel(N, x) == Catch::Approx(direct.value()).margin(1e-10));
    }
    // at x = 0 the kernel is 2N+1 and the closed form is unusable
    CHECK(dirichlet_kernel(25, 0.0) == 51.0);
    CHECK(dirichlet_kernel(25, 1e-13) == Catch::Approx(51.0).margin(1e-8));
}

TEST_CASE("squared cosine sum identity") {
    // sum cos^2 n = N/2 + (D_N(2) - 1)/4: the compensated direct sum holds
    // this to near machine precision even at N = 10^6
    CHECK(cos_square_sum_identity(100) < 1e-12);
    CHECK(cos_square_sum_identity(100000) < 1e-10);
    CHECK_THROWS_AS(cos_square_sum_identity(0), Error);
}

TEST_CASE("sequence membership") {
    const SequenceEntry& inv2 = gallery_sequence("inv_square");
    std::vector<std::size_t> grid;
    for (std::size_t n = 1; n <= 8192; n *= 2) grid.push_back(n);

    CHECK(gms_verify(inv2.seq, 1.0, 1, grid).pass());
    double fit = gms_fit_constant(inv2.seq, 1, grid);
    CHECK(fit <= 1.0);
    CHECK(fit >= 0.3);

    // alternating harmonic: block variation ~ 2 ln 2, mass ~ 3/(2n)
    const SequenceEntry& alt = gallery_sequence("alt_harmonic");
    CHECK_FALSE(gms_verify(alt.seq, 100.0, 1, {4096}).pass());
    CHECK(gms_fit_constant(alt.seq, 1, {4096}) > 1000.0);

    const SequenceEntry& cw = gallery_sequence("cosn_over_n");
    CHECK_FALSE(gms_verify(cw.seq, 100.0, 1, {4096}).pass());

    CHECK_THROWS_AS(gms_verify(inv2.seq, 1.0, 0, grid), Error);
    CHECK_THROWS_AS(gms_verify(inv2.seq, 1.0, 1, {0}), Error);

    // variation against zero mass: a single spike at n = 9 sits just past
    // the n = 4 mass window [2, 8] while the jump a_8 -> a_9 is inside the
    // variation block [4, 8]
    SequenceProfile spike;
    spike.name = "spike";
    spike.term = [](std::size_t n) { return n == 9 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(gms_fit_constant(spike, 1, {4}), Error);
}

TEST_CASE("sequence decay profiles") {
    const SequenceEntry& inv2 = gallery_sequence("inv_square");
    auto prof = gms_abel_olivier(inv2.seq, {1, 10, 100});
    REQUIRE(prof.size() == 3);
    CHECK(prof[0].sup == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(prof[1].sup == Catch::Approx(0.1).epsilon(1e-6));
    CHECK(prof[2].sup == Catch::Approx(0.01).epsilon(1e-4));
    CHECK(prof[0].tail_certified);

    // (-1)^n/n: n|a_n| = 1 forever; reported as a flat, uncertified profile
    const SequenceEntry& alt = gallery_sequence("alt_harmonic");
    auto aprof = gms_abel_olivier(alt.seq, {1, 1000});
    CHECK(aprof[0].sup == Catch::Approx(1.0));
    CHECK(aprof[1].sup == Catch::Approx(1.0));
    CHECK_FALSE(aprof[0].tail_certified);

    SequenceProfile grow;
    grow.name = "grow";
    grow.term = [](std::size_t n) { return n == 0 ? 0.0 : 1.0 / std::sqrt(double(n)); };
    grow.decay_coef = 1.0;
    grow.decay_exp = 0.5;
    CHECK_THROWS_AS(gms_abel_olivier(grow, {1}), DivergenceError);

    SequenceProfile bare;
    bare.name = "bare";
    bare.term = [](std::size_t n) { return n == 0 ? 0.0 : 1.0 / double(n); };
    CHECK_THROWS_AS(gms_abel_olivier(bare, {1}), Error);
}

TEST_CASE("square wave partial sums") {
    const SequenceEntry& sw = gallery_sequence("square_wave");
    // the series converges pointwise to the indicator of (pi/2, 3pi/2)
    CHECK(std::abs(cosine_partial_sum(sw.seq, 10001, 0.0)) < 1e-3);
    CHECK(cosine_partial_sum(sw.seq, 10001, pi) == Catch::Approx(1.0).margin(1e-3));
    CHECK(cosine_partial_sum(sw.seq, 10001, pi / 2.0) == Catch::Approx(0.5).margin(1e-3));

    SECTION("the overshoot never decays") {
        // straddling grid scaled into the jump: x = pi/2 +- c pi/M
        std::size_t M = 1000, N = 2000;
        std::vector<double> grid;
        for (double c : {0.25, 0.5, 1.0, 2.0, 3.0}) {
            grid.push_back(pi / 2.0 - c * pi / double(M));
            grid.push_back(pi / 2.0 + c * pi / double(M));
        }
        double tail = uniform_tail_series(sw.seq, grid, M, N);
        CHECK(tail == Catch::Approx(0.1947).margin(0.02));
        CHECK(tail >= 0.05);

        // yet partial sums stay bounded: sup |S_N| <= 2 on a dense grid
        double worst = 0.0;
        for (double x : linspace(0.0, pi, 2001))
            worst = std::max(worst, std::abs(cosine_partial_sum(sw.seq, N, x)));
        CHECK(worst <= 2.0);
        CHECK(worst >= 1.0);  // Gibbs pushes past the jump value
    }

    SECTION("a uniformly convergent series has vanishing tails on the same grid") {
        const SequenceEntry& inv2 = gallery_sequence("inv_square");
        std::vector<double> grid;
        for (double c : {0.25, 0.5, 1.0, 2.0, 3.0}) {
            grid.push_back(pi / 2.0 - c * pi / 1000.0);
            grid.push_back(pi / 2.0 + c * pi / 1000.0);
        }
        CHECK(uniform_tail_series(inv2.seq, grid, 1000, 2000) < 1.1e-3);
    }

    CHECK_THROWS_AS(uniform_tail_series(sw.seq, {1.0}, 10, 10), Error);
}

TEST_CASE("logarithmic growth of the divergent example") {
    // sum cos^2(n)/n = (1/2) ln N + O(1): slope against ln N pins the rate
    const SequenceEntry& cw = gallery_sequence("cosn_over_n");
    LineFit fit = partial_sum_growth(cw.seq, 1.0, 1000, 10);
    CHECK(fit.slope == Catch::Approx(0.5).margin(0.01));
    CHECK(fit.stderr_slope < 0.01);

    // the same sequence at a generic x stays bounded: near-zero slope
    LineFit flat = partial_sum_growth(cw.seq, 2.0, 1000, 10);
    CHECK(std::abs(flat.slope) < 0.05);

    CHECK_THROWS_AS(partial_sum_growth(cw.seq, 1.0, 1000, 1), Error);
}

TEST_CASE("sequences embed as step profiles") {
    const SequenceEntry& inv2 = gallery_sequence("inv_square");
    RadialProfile step = to_step_profile(inv2.seq);

    CHECK(step(2.5) == Catch::Approx(0.25));
    CHECK(step(3.0) == Catch::Approx(0.25));   // (2, 3] belongs to a_2
    CHECK(step(3.0001) == Catch::Approx(1.0 / 9.0).epsilon(1e-10));

    auto atoms = step.atoms_in(0.5, 3.5);
    REQUIRE(atoms.size() == 3);
    CHECK(atoms[0].jump == Catch::Approx(1.0));        // a_1 - a_0
    CHECK(atoms[1].jump == Catch::Approx(-0.75));      // a_2 - a_1
    CHECK(atoms[2].jump == Catch::Approx(1.0 / 9.0 - 0.25));

    CHECK(variation(step, 1.5, 3.5) == Catch::Approx(0.75 + 0.25 - 1.0 / 9.0).epsilon(1e-12));

    SECTION("memberships agree within a factor of two") {
        std::vector<std::size_t> n_grid;
        for (std::size_t n = 1; n <= 8192; n *= 2) n_grid.push_back(n);
        double seq_fit = gms_fit_constant(inv2.seq, 1, n_grid);
        double step_fit = gm_fit_constant(step, 1, log_grid(1.0, 1e4, 8));
        CHECK(step_fit <= 2.0 * seq_fit);
        CHECK(seq_fit <= 2.0 * step_fit);
    }

    SECTION("tail metadata carries the slower jump-mass rate") {
        REQUIRE(step.tail.has_value());
        CHECK(step.tail->exponent == Catch::Approx(2.0));
        CHECK(step.tail->var_exp() == Catch::Approx(1.0));
    }
}

TEST_CASE("catalogue integrity") {
    CHECK(gallery_profiles().size() == 9);
    CHECK(gallery_sequences().size() == 4);
    CHECK_THROWS_AS(gallery_profile("no_such_thing"), Error);
    CHECK_THROWS_AS(gallery_sequence("no_such_thing"), Error);

    for (const GalleryEntry& e : gallery_profiles()) {
        INFO(e.profile.name);
        CHECK(!e.profile.name.empty());
        CHECK(e.C > 0.0);
        CHECK(e.nu >= 1);
        if (!e.is_gm) CHECK(e.witness_x > 0.0);
    }

    SECTION("closed form transforms at pinned points") {
        const GalleryEntry& te = gallery_profile("trunc_exp");
        CHECK(te.transform(0.0) == Catch::Approx(0.63212055882855768).epsilon(1e-14));
        CHECK(te.transform(2.0) == Catch::Approx(0.36442310483055016).epsilon(1e-14));
        CHECK(te.transform(7.0) == Catch::Approx(0.048289957990617156).epsilon(1e-13));

        const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
        CHECK(cs.transform(0.5) == Catch::Approx(1.3978902794260023).epsilon(1e-14));
        CHECK(cs.transform(1.5) == Catch::Approx(1.2825596552133591).epsilon(1e-14));
        CHECK(cs.transform(2.0) == Catch::Approx(0.98845769593688396).epsilon(1e-14));
        CHECK(cs.transform(5.0) == Catch::Approx(0.56916021131549718).epsilon(1e-14));

        const GalleryEntry& fr = gallery_profile("fresnel_check");
        CHECK(fr.transform(1.0) == Catch::Approx(1.2533141373155003).epsilon(1e-14));
        CHECK(fr.transform(4.0) == Catch::Approx(1.2533141373155003 / 2.0).epsilon(1e-14));
    }
}
