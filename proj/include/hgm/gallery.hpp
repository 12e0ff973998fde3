#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "hgm/common.hpp"
#include "hgm/gm.hpp"
#include "hgm/profile.hpp"
#include "hgm/series.hpp"

namespace hgm {

// A catalogued test function.  GM entries carry a certificate (C, nu) that
// is re-verified on the default grid the first time the catalogue is
// touched; non-members instead record a witness point at which the declared
// (C, nu) demonstrably fails.  Where the cosine transform (order -1/2) has
// a closed form it is stored with its validity range in u.
struct GalleryEntry {
    RadialProfile profile;
    bool is_gm;
    double C;
    unsigned nu;
    std::string reason;       // for non-members: why no constant can work
    double witness_x = 0.0;   // for non-members: failing grid point
    std::function<double(double)> transform;
    double transform_from = 0.0;
    double transform_to = 0.0;
    std::string notes;
};

struct SequenceEntry {
    SequenceProfile seq;
    bool is_gms;
    double C;
    unsigned nu;
    std::size_t witness_n = 0;  // for non-members
    std::string notes;
};

namespace detail {

inline RadialProfile make_cos_over_sqrt() {
    RadialProfile p;
    p.name = "cos_over_sqrt";
    p.eval = [](double t) { return std::cos(t) / std::sqrt(t); };
    p.deriv = [](double t) {
        return -std::sin(t) / std::sqrt(t) - 0.5 * std::cos(t) / (t * std::sqrt(t));
    };
    p.tail = TailBound{1.0, 0.5, 1.0, -1.0};  // variation per octave grows: no var bound
    p.origin = OriginBound{1.0, 0.5, 1.0, 1.5, 1.5};
    p.osc_freq = 1.0;
    return p;
}

inline RadialProfile make_trunc_exp() {
    RadialProfile p;
    p.name = "trunc_exp";
    p.eval = [](double t) { return (t > 0 && t <= 1.0) ? std::exp(-t) : 0.0; };
    p.deriv = [](double t) { return t < 1.0 ? -std::exp(-t) : 0.0; };
    p.breakpoints = {1.0};
    p.atoms = {{1.0, -std::exp(-1.0)}};
    p.support_end = 1.0;
    p.origin = OriginBound{1.0, 0.0, 1.0, 1.0, 0.0};
    return p;
}

inline RadialProfile make_power_tail(double pw, const std::string& name) {
    RadialProfile p;
    p.name = name;
    p.eval = [pw](double t) { return t <= 1.0 ? 1.0 : std::pow(t, -pw); };
    p.deriv = [pw](double t) { return t < 1.0 ? 0.0 : -pw * std::pow(t, -pw - 1.0); };
    p.breakpoints = {1.0};
    p.tail = TailBound{1.0, pw, 1.0, 1.0, pw};  // int_T |f'| = T^{-pw} for T >= 1
    p.origin = OriginBound{1.0, 0.0, 1.0, 0.0, 0.0};
    return p;
}

inline RadialProfile make_pure_power(double pw, const std::string& name) {
    RadialProfile p;
    p.name = name;
    p.eval = [pw](double t) { return std::pow(t, -pw); };
    p.deriv = [pw](double t) { return -pw * std::pow(t, -pw - 1.0); };
    p.tail = TailBound{1.0, pw, 1.0, 1.0, pw};
    p.origin = OriginBound{1.0, pw, 1.0, pw, pw + 1.0};
    return p;
}

inline RadialProfile make_alternating_dyadic() {
    RadialProfile p;
    p.name = "alternating_dyadic";
    p.eval = [](double t) {
        if (t <= 0) return 0.0;
        if (t < 2.0) return 1.0;
        int k = int(std::floor(std::log2(t)));
        double v = std::pow(4.0, -k);
        return (k & 1) ? -v : v;
    };
    p.deriv = nullptr;  // constant on each dyadic block
    p.breakpoint_gen = [](double a, double b) {
        std::vector<double> v;
        for (int k = 1; k < 1024; ++k) {
            double t = std::ldexp(1.0, k);
            if (t >= b) break;
            if (t > a) v.push_back(t);
        }
        return v;
    };
    p.atom_gen = [](double a, double b) {
        // jump at 2^k: (-1)^k 4^{-k} - (-1)^{k-1} 4^{-(k-1)} = (-1)^k 5 * 4^{-k}
        std::vector<JumpAtom> v;
        for (int k = 1; k < 1024; ++k) {
            double t = std::ldexp(1.0, k);
            if (t > b) break;
            if (t <= a) continue;
            double j = 5.0 * std::pow(4.0, -k);
            v.push_back({t, (k & 1) ? -j : j});
        }
        return v;
    };
    p.tail = TailBound{4.0, 2.0, 1.0, 20.0 / 3.0, 2.0};
    p.origin = OriginBound{1.0, 0.0, 1.0, 0.0, 0.0};
    return p;
}

inline RadialProfile make_fresnel_check() {
    RadialProfile p;
    p.name = "fresnel_check";
    p.eval = [](double t) { return 1.0 / std::sqrt(t); };
    p.deriv = [](double t) { return -0.5 / (t * std::sqrt(t)); };
    p.tail = TailBound{1.0, 0.5, 1.0, 1.0, 0.5};
    p.origin = OriginBound{1.0, 0.5, 1.0, 0.5, 1.5};
    return p;
}

inline std::vector<GalleryEntry> make_profile_entries() {
    std::vector<GalleryEntry> v;
    double rpi2 = std::sqrt(pi / 2.0);

    {
        GalleryEntry e;
        e.profile = make_cos_over_sqrt();
        e.is_gm = false;
        e.C = 10.0;
        e.nu = 1;
        e.witness_x = 1000.0;
        e.reason = "variation per octave grows like sqrt(x) while the surrounding mass decays like 1/sqrt(x)";
        e.transform = [rpi2](double u) {
            return 0.5 * rpi2 * (1.0 / std::sqrt(1.0 + u) + 1.0 / std::sqrt(std::abs(1.0 - u)));
        };
        e.transform_from = 0.0;
        e.transform_to = std::numeric_limits<double>::infinity();
        e.notes = "cosine transform has a pole at u = 1; the integral diverges there";
        v.push_back(std::move(e));
    }
    {
        GalleryEntry e;
        e.profile = make_trunc_exp();
        e.is_gm = true;
        e.C = 2.0;
        e.nu = 1;
        e.transform = [](double u) {
            double e1 = std::exp(-1.0);
            return (1.0 - e1 * std::cos(u) + e1 * u * std::sin(u)) / (1.0 + u * u);
        };
        e.transform_from = 0.0;
        e.transform_to = std::numeric_limits<double>::infinity();
        e.notes = "compactly supported, jump of size e^{-1} at t = 1";
        v.push_back(std::move(e));
    }
    for (auto [pw, name] : {std::pair<double, const char*>{1.5, "power_tail_3_2"},
                            {2.0, "power_tail_2"},
                            {3.0, "power_tail_3"}}) {
        GalleryEntry e;
        e.profile = make_power_tail(pw, name);
        e.is_gm = true;
        e.C = 1.0;
        e.nu = 1;
        e.notes = "1 on (0,1], then t^{-" + std::to_string(pw).substr(0, 3) + "}";
        v.push_back(std::move(e));
    }
    {
        GalleryEntry e;
        e.profile = make_alternating_dyadic();
        e.is_gm = true;
        e.C = 2.0;
        e.nu = 1;
        e.notes = "(-1)^k 4^{-k} on [2^k, 2^{k+1}); sign-alternating with one jump per block";
        v.push_back(std::move(e));
    }
    {
        GalleryEntry e;
        e.profile = make_fresnel_check();
        e.is_gm = true;
        e.C = 1.0;
        e.nu = 1;
        e.transform = [rpi2](double u) { return rpi2 / std::sqrt(u); };
        e.transform_from = 0.0;
        e.transform_to = std::numeric_limits<double>::infinity();
        e.notes = "int_0^inf cos(t)/sqrt(t) dt = sqrt(pi/2); transform diverges at u = 0";
        v.push_back(std::move(e));
    }
    {
        GalleryEntry e;
        e.profile = make_pure_power(2.0, "pure_power_2");
        e.is_gm = true;
        e.C = 1.0;
        e.nu = 1;
        e.notes = "t^{-2} on all of (0,inf): every dyadic window is good with B_n = 2^{4nu} A_n exactly";
        v.push_back(std::move(e));
    }
    {
        GalleryEntry e;
        e.profile = make_pure_power(3.0, "pure_power_3");
        e.is_gm = true;
        e.C = 1.0;
        e.nu = 1;
        e.notes = "t^{-3} on all of (0,inf): every window n >= 1 is bad, B_n = 2^{6nu} A_n";
        v.push_back(std::move(e));
    }
    return v;
}

inline std::vector<SequenceEntry> make_sequence_entries() {
    std::vector<SequenceEntry> v;
    {
        SequenceEntry e;
        e.seq.name = "cosn_over_n";
        e.seq.term = [](std::size_t n) { return n == 0 ? 0.0 : std::cos(double(n)) / double(n); };
        e.seq.decay_coef = 1.0;
        e.seq.decay_exp = 1.0;
        e.is_gms = false;
        e.C = 100.0;
        e.nu = 1;
        e.witness_n = 4096;
        e.notes = "block variation stays of order 1 while the mass term decays like 1/n";
        v.push_back(std::move(e));
    }
    {
        SequenceEntry e;
        e.seq.name = "square_wave";
        // indicator of (pi/2, 3pi/2) mod 2pi: 1/2 + (2/pi) sum (-1)^m cos((2m-1)x)/(2m-1)
        e.seq.term = [](std::size_t n) {
            if (n == 0) return 0.5;
            if (n % 2 == 0) return 0.0;
            std::size_t m = (n + 1) / 2;
            double a = 2.0 / (pi * double(n));
            return (m & 1) ? -a : a;
        };
        e.seq.decay_coef = 2.0 / pi;
        e.seq.decay_exp = 1.0;
        e.is_gms = false;
        e.C = 100.0;
        e.nu = 1;
        e.witness_n = 4096;
        e.notes = "Fourier series of a step; the Gibbs overshoot never leaves";
        v.push_back(std::move(e));
    }
    {
        SequenceEntry e;
        e.seq.name = "inv_square";
        e.seq.term = [](std::size_t n) { return n == 0 ? 0.0 : 1.0 / (double(n) * double(n)); };
        e.seq.decay_coef = 1.0;
        e.seq.decay_exp = 2.0;
        e.is_gms = true;
        e.C = 1.0;
        e.nu = 1;
        e.notes = "monotone with summable tail; the series converges uniformly";
        v.push_back(std::move(e));
    }
    {
        SequenceEntry e;
        e.seq.name = "alt_harmonic";
        e.seq.term = [](std::size_t n) {
            if (n == 0) return 0.0;
            return (n & 1) ? -1.0 / double(n) : 1.0 / double(n);
        };
        e.seq.decay_coef = 1.0;
        e.seq.decay_exp = 1.0;
        e.is_gms = false;
        e.C = 100.0;
        e.nu = 1;
        e.witness_n = 4096;
        e.notes = "n|a_n| = 1 for all n: decay fails but stays bounded";
        v.push_back(std::move(e));
    }
    return v;
}

inline void verify_entry(const GalleryEntry& e) {
    if (e.is_gm) {
        GMCertificate c = gm_verify(e.profile, GMCertificate(e.C, e.nu), default_gm_grid(e.profile));
        if (!c.pass())
            throw Error("gallery: " + e.profile.name + " failed its membership certificate");
    } else {
        GMCertificate c = gm_verify(e.profile, GMCertificate(e.C, e.nu), {e.witness_x});
        if (c.pass())
            throw Error("gallery: " + e.profile.name +
                        " unexpectedly satisfies its declared (C, lambda) at the witness point");
    }
}

inline void verify_entry(const SequenceEntry& e) {
    if (e.is_gms) {
        std::vector<std::size_t> grid;
        for (std::size_t n = 1; n <= 4096; n *= 2) grid.push_back(n);
        if (!gms_verify(e.seq, e.C, e.nu, grid).pass())
            throw Error("gallery: " + e.seq.name + " failed its membership certificate");
    } else {
        if (gms_verify(e.seq, e.C, e.nu, {e.witness_n}).pass())
            throw Error("gallery: " + e.seq.name +
                        " unexpectedly satisfies its declared (C, lambda) at the witness index");
    }
}

}  // namespace detail

// The catalogue; every entry's membership status is re-verified on first
// access, so a regression in the analysis machinery (or a miscatalogued
// entry) fails loudly rather than silently poisoning downstream results.
inline const std::vector<GalleryEntry>& gallery_profiles() {
    static const std::vector<GalleryEntry> entries = [] {
        std::vector<GalleryEntry> v = detail::make_profile_entries();
        for (const GalleryEntry& e : v) detail::verify_entry(e);
        return v;
    }();
    return entries;
}

inline const std::vector<SequenceEntry>& gallery_sequences() {
    static const std::vector<SequenceEntry> entries = [] {
        std::vector<SequenceEntry> v = detail::make_sequence_entries();
        for (const SequenceEntry& e : v) detail::verify_entry(e);
        return v;
    }();
    return entries;
}

inline const GalleryEntry& gallery_profile(const std::string& name) {
    for (const GalleryEntry& e : gallery_profiles())
        if (e.profile.name == name) return e;
    throw Error("gallery: unknown profile '" + name + "'");
}

inline const SequenceEntry& gallery_sequence(const std::string& name) {
    for (const SequenceEntry& e : gallery_sequences())
        if (e.seq.name == name) return e;
    throw Error("gallery: unknown sequence '" + name + "'");
}

}  // namespace hgm
