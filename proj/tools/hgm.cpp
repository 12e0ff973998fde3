// Command-line driver. Every knob is a global flag so a flat key=value
// config file can set any of them; subcommands pick the ones they need.
//
// Exit codes: 0 all asserted inequalities hold, 1 an assertion failed
// (failures listed on stderr with the offending grid point), 2 bad
// configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hgm/bessel.hpp"
#include "hgm/gallery.hpp"
#include "hgm/gm.hpp"
#include "hgm/profile_parse.hpp"
#include "hgm/series.hpp"
#include "hgm/transforms.hpp"

using nlohmann::json;
using namespace hgm;

namespace {

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Tabular report: fixed column order, cells are numbers, booleans or
// strings. Reruns must be byte-identical apart from the timestamp line.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
    std::map<std::string, json> meta;  // deterministic extras (fitted constants, ...)

    void add(std::vector<json> cells) { rows.push_back(std::move(cells)); }
};

std::string cell_csv(const json& c) {
    if (c.is_number_float()) return fmt17(c.get<double>());
    if (c.is_boolean()) return c.get<bool>() ? "1" : "0";
    if (c.is_string()) return c.get<std::string>();
    if (c.is_null()) return "nan";
    return c.dump();
}

void write_table(std::ostream& os, const Table& t, const std::string& format,
                 const std::string& subcommand) {
    if (format == "csv") {
        os << "# generated " << iso_timestamp() << "\n";
        for (const auto& [k, v] : t.meta) os << "# " << k << " " << cell_csv(v) << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_csv(row[i]);
            os << "\n";
        }
    } else {
        json doc;
        doc["subcommand"] = subcommand;
        doc["generated"] = iso_timestamp();
        doc["columns"] = t.columns;
        if (!t.meta.empty()) doc["meta"] = t.meta;
        doc["rows"] = t.rows;
        os << doc.dump(2) << "\n";
    }
}

struct Checks {
    int total = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++total;
        if (!ok) failures.push_back(what);
    }
};

// All options live here; each subcommand reads its slice.
struct Opts {
    double alpha = -0.5;
    std::string function;
    std::string profile_desc;
    std::string sequence;
    double lambda = 2.0;
    double c_const = 0.0;  // 0: fit from the data
    double u_min = 1e-3, u_max = 1e3;
    int u_per_decade = 25;
    std::vector<double> u_list;
    std::vector<double> x_list;
    double x_min = 0.0, x_max = 40.0;
    int points = 401;
    double n_max = 0.0;
    int n_min = 0;
    int envelope_m = -1;
    bool s_table = false;
    std::vector<double> big_n{1.0, 10.0, 100.0, 1000.0};
    double tol = 1e-8;
    std::string format;  // empty: subcommand default
    std::string out;
    std::string out_dir;
    std::string experiment;
};

unsigned nu_from_lambda(double lambda) {
    int k = int(std::lround(std::log2(lambda)));
    if (k < 1 || std::abs(std::ldexp(1.0, k) - lambda) > 1e-9 * lambda)
        throw Error("--lambda must be a power of two >= 2");
    return unsigned(k);
}

RadialProfile resolve_profile(const Opts& o, const GalleryEntry** entry_out = nullptr) {
    if (!o.function.empty() && !o.profile_desc.empty())
        throw Error("give --function or --profile-desc, not both");
    if (!o.function.empty()) {
        const GalleryEntry& e = gallery_profile(o.function);
        if (entry_out) *entry_out = &e;
        return e.profile;
    }
    if (!o.profile_desc.empty()) return parse_profile(o.profile_desc);
    throw Error("needs --function or --profile-desc");
}

std::vector<double> resolve_u_grid(const Opts& o) {
    if (!o.u_list.empty()) return o.u_list;
    if (!(o.u_min > 0 && o.u_max > o.u_min && o.u_per_decade >= 1))
        throw Error("need 0 < --u-min < --u-max and --u-per-decade >= 1");
    return log_grid(o.u_min, o.u_max, o.u_per_decade);
}

// ---------------------------------------------------------------- bessel

void run_bessel(const Opts& o, Table& t, Checks& ck) {
    BesselOrder ord(o.alpha);
    if (o.s_table) {
        t.columns = {"alpha", "s_const", "x_max"};
        double xm = default_s_xmax(o.alpha);
        t.add({o.alpha, compute_S(ord), xm});
        return;
    }
    std::vector<double> xs = o.x_list;
    if (xs.empty()) {
        if (!(o.points >= 2 && o.x_max > o.x_min)) throw Error("bad --x-min/--x-max/--points");
        for (int i = 0; i < o.points; ++i)
            xs.push_back(o.x_min + (o.x_max - o.x_min) * double(i) / double(o.points - 1));
    }
    bool env = o.envelope_m >= 0;
    t.columns = {"alpha", "x", "value"};
    if (env) {
        t.columns.push_back("envelope_lower");
        t.columns.push_back("envelope_upper");
        t.columns.push_back("envelope_valid");
    }
    for (double x : xs) {
        double v = eval_j(ord, x);
        std::ostringstream at;
        at << "alpha=" << o.alpha << " x=" << x;
        ck.expect(std::abs(v) <= 1.0 + 1e-13, "|j| <= 1 violated at " + at.str());
        if (env) {
            EnvelopePair e = envelope_bounds(ord, x, unsigned(o.envelope_m));
            if (e.valid)
                ck.expect(e.lower <= v + 1e-13 && v <= e.upper + 1e-13,
                          "envelope containment violated at " + at.str());
            t.add({o.alpha, x, v, e.lower, e.upper, e.valid});
        } else {
            t.add({o.alpha, x, v});
        }
    }
}

// --------------------------------------------------------------- gm-check

void run_gm_check(const Opts& o, Table& t, Checks& ck) {
    if (!o.sequence.empty()) {
        const SequenceEntry& e = gallery_sequence(o.sequence);
        unsigned nu = nu_from_lambda(o.lambda);
        std::size_t top = o.n_max > 0 ? std::size_t(o.n_max) : 4096;
        std::vector<std::size_t> grid;
        for (std::size_t n = 1; n <= top; n *= 2) grid.push_back(n);
        if (e.is_gms == false && e.witness_n) grid.push_back(e.witness_n);
        double C = o.c_const;
        if (C <= 0) {
            C = e.C;
            t.meta[e.is_gms ? "declared_c" : "test_c"] = C;
        }
        GmsReport r = gms_verify(e.seq, C, nu, grid);
        t.meta["c"] = C;
        t.columns = {"n", "lhs", "rhs", "ratio", "pass"};
        for (const GmsPoint& p : r.points) {
            double ratio = p.rhs > 0 ? p.lhs / (C * p.rhs) : (p.lhs > 0 ? INFINITY : 0.0);
            t.add({double(p.n), p.lhs, p.rhs, ratio, p.pass});
            std::ostringstream at;
            at << "sequence " << e.seq.name << " block n=" << p.n;
            ck.expect(p.pass, "variation exceeds C * mass at " + at.str());
        }
        return;
    }

    const GalleryEntry* entry = nullptr;
    RadialProfile p = resolve_profile(o, &entry);
    unsigned nu = nu_from_lambda(o.lambda);
    std::vector<double> grid = o.x_list;
    if (grid.empty()) {
        grid = default_gm_grid(p);
        if (p.osc_freq > 0) {
            // each oscillation costs a quadrature panel; keep the default
            // sweep inside the panel budget
            double cap = 2e4 / p.osc_freq;
            std::erase_if(grid, [cap](double x) { return x > cap; });
        }
    }
    if (entry && !entry->is_gm && entry->witness_x > 0) grid.push_back(entry->witness_x);

    double C = o.c_const;
    if (C <= 0) {
        if (entry) {
            C = entry->C;
            t.meta[entry->is_gm ? "declared_c" : "test_c"] = C;
        } else {
            C = gm_fit_constant(p, nu, grid);
            t.meta["fitted_c"] = C;
            if (C == 0.0) C = 1.0;  // identically zero profile: vacuous pass
        }
    }
    t.meta["c"] = C;
    GMCertificate cert = gm_verify(p, GMCertificate(C, nu), grid);
    t.columns = {"x", "lhs", "rhs", "ratio", "pass"};
    for (const CheckedPoint& cp : cert.checked) {
        double ratio = cp.rhs > 0 ? cp.lhs / (C * cp.rhs) : (cp.lhs > 0 ? INFINITY : 0.0);
        t.add({cp.x, cp.lhs, cp.rhs, ratio, cp.pass});
        if (!cp.pass) {
            std::ostringstream at;
            at << "profile " << p.name << " at x=" << fmt17(cp.x);
            ck.expect(false, "variation exceeds C * mass for " + at.str());
        } else {
            ck.expect(true, "");
        }
    }
}

// ------------------------------------------------------------ dyadic-stats

void run_dyadic_stats(const Opts& o, Table& t, Checks&) {
    RadialProfile p = resolve_profile(o);
    unsigned nu = nu_from_lambda(o.lambda);
    int hi = o.n_max > 0 ? int(o.n_max) : 15;
    auto stats = dyadic_stats(p, nu, o.n_min, hi);
    t.meta["nu"] = double(nu);
    t.columns = {"n", "a_n", "b_n", "good", "vacuous"};
    for (const DyadicStats& s : stats) t.add({double(s.n), s.A_n, s.B_n, s.good, s.vacuous});
}

// --------------------------------------------------------------- transform

void run_transform(const Opts& o, Table& t, Checks&) {
    RadialProfile p = resolve_profile(o);
    BesselOrder ord(o.alpha);
    std::vector<double> us = resolve_u_grid(o);
    t.columns = {"alpha", "u", "N", "value", "error_estimate"};
    for (double u : us) {
        if (o.n_max > 0) {
            PartialIntegralResult r = partial_hankel(p, ord, u, o.n_max, o.tol);
            t.add({o.alpha, u, o.n_max, r.value, r.error_estimate});
        } else {
            try {
                PartialIntegralResult r = hankel_limit(p, ord, u, o.tol);
                t.add({o.alpha, u, INFINITY, r.value, r.error_estimate});
            } catch (const DivergenceError& e) {
                std::cerr << "note: u=" << fmt17(u) << ": " << e.what() << "\n";
                t.add({o.alpha, u, INFINITY, NAN, NAN});
            }
        }
    }
}

// ------------------------------------------------------------ bound-report

void run_bound_report(const Opts& o, Table& t, Checks& ck) {
    const GalleryEntry* entry = nullptr;
    RadialProfile p = resolve_profile(o, &entry);
    BesselOrder ord(o.alpha);
    unsigned nu = nu_from_lambda(o.lambda);
    double C = o.c_const;
    if (C <= 0) {
        if (entry && entry->is_gm) {
            C = entry->C;
            t.meta["declared_c"] = C;
        } else {
            C = gm_fit_constant(p, nu, default_gm_grid(p));
            t.meta["fitted_c"] = C;
        }
    }
    std::vector<double> us = o.u_list;
    if (us.empty()) us = default_u_grid();

    t.columns = {"alpha", "N",          "variant",       "lhs",           "u_at_lhs",
                 "term_partial", "term_boundary", "term_constant", "term_sup_ibp",
                 "s_used",       "m_used",        "rhs",           "pass"};
    for (double N : o.big_n) {
        auto [stmt, prf] = cossup_bound_both(p, ord, N, GMCertificate(C, nu), us, o.tol);
        for (const BoundReport* r : {&stmt, &prf}) {
            std::string variant = r->variant == SVariant::statement ? "statement" : "proof";
            t.add({r->alpha, r->N, variant, r->lhs, r->u_at_lhs, r->term_partial,
                   r->term_boundary, r->term_constant, r->term_sup_ibp, r->S_used, r->M_used,
                   r->rhs(), r->pass()});
            std::ostringstream at;
            at << "alpha=" << o.alpha << " N=" << fmt17(N) << " variant=" << variant
               << " (lhs " << fmt17(r->lhs) << " at u=" << fmt17(r->u_at_lhs) << ", rhs "
               << fmt17(r->rhs()) << ")";
            ck.expect(r->pass(), "bound violated at " + at.str());
        }
    }
}

// ------------------------------------------------------------------ series

void run_series(const Opts& o, Table& t, Checks&) {
    if (o.sequence.empty()) throw Error("series: needs --sequence");
    const SequenceEntry& e = gallery_sequence(o.sequence);
    std::vector<double> xs = o.x_list;
    if (xs.empty()) xs = {1.0};
    std::size_t top = o.n_max > 0 ? std::size_t(o.n_max) : 4096;
    t.columns = {"sequence", "x", "N", "partial_sum"};
    for (double x : xs)
        for (std::size_t N = 16; N <= top; N *= 2)
            t.add({e.seq.name, x, double(N), cosine_partial_sum(e.seq, N, x)});
}

// ------------------------------------------------------------- experiments

void run_exp_good_bad(const Opts&, Table& t, Checks& ck) {
    t.columns = {"name", "nu", "n", "a_n", "b_n", "good", "ratio_vs_4nu"};
    struct Want {
        const char* name;
        bool pure;  // exact power: dichotomy equalities hold at every block
    };
    for (Want w : {Want{"pure_power_2", true}, Want{"pure_power_3", true},
                   Want{"power_tail_2", false}, Want{"power_tail_3", false}}) {
        const GalleryEntry& e = gallery_profile(w.name);
        bool heavy = e.profile.tail && e.profile.tail->exponent >= 3.0;
        for (unsigned nu : {1u, 2u}) {
            auto stats = dyadic_stats(e.profile, nu, 0, 20);
            for (const DyadicStats& s : stats) {
                double cap = std::ldexp(1.0, 4 * int(nu)) * s.A_n;
                t.add({std::string(w.name), double(nu), double(s.n), s.A_n, s.B_n, s.good,
                       cap > 0 ? s.B_n / cap : NAN});
                std::ostringstream at;
                at << w.name << " nu=" << nu << " n=" << s.n;
                if (!heavy) {
                    ck.expect(s.good, "expected a good block at " + at.str());
                    if (w.pure)
                        ck.expect(std::abs(s.B_n - cap) <= 1e-9 * cap,
                                  "expected B = 2^{4nu} A exactly at " + at.str());
                } else if (w.pure) {
                    if (s.n >= 1) {
                        ck.expect(!s.good, "expected a bad block at " + at.str());
                        double six = std::ldexp(1.0, 6 * int(nu)) * s.A_n;
                        ck.expect(std::abs(s.B_n - six) <= 1e-9 * six,
                                  "expected B = 2^{6nu} A exactly at " + at.str());
                    }
                } else {
                    // the unit box in the profile head shields the first
                    // windows; beyond them every block is bad
                    if (s.n >= 2 * int(nu) + 1)
                        ck.expect(!s.good, "expected a bad block at " + at.str());
                }
            }
        }
    }
}

void run_exp_abel_olivier(const Opts&, Table& t, Checks& ck) {
    t.columns = {"kind", "name", "T", "sup_tail", "status"};
    std::vector<double> T_grid{1e2, 1e4, 1e6};
    for (const char* name : {"trunc_exp", "power_tail_3_2", "power_tail_2", "power_tail_3",
                             "alternating_dyadic", "pure_power_2", "pure_power_3"}) {
        const GalleryEntry& e = gallery_profile(name);
        auto curve = abel_olivier_profile(e.profile, T_grid);
        for (auto [T, sup] : curve) {
            t.add({std::string("profile"), std::string(name), T, sup, std::string("ok")});
            std::ostringstream at;
            at << name << " T=" << fmt17(T);
            if (T >= 1e4) ck.expect(sup <= 1e-2 * 1.01, "t|f| sup not below 1e-2 at " + at.str());
        }
        if (std::string(name) == "power_tail_3_2") {
            ck.expect(std::abs(curve[1].second - 1e-2) <= 2e-3,
                      "power_tail_3_2 sup at T=1e4 should be ~T^{-1/2}");
            ck.expect(curve[2].second <= 1e-3 * 1.01,
                      "power_tail_3_2 sup not below 1e-3 at T=1e6");
        }
    }
    // negative controls: no decay to find
    try {
        abel_olivier_profile(gallery_profile("cos_over_sqrt").profile, T_grid);
        ck.expect(false, "cos_over_sqrt: expected non-decay of t|f|");
    } catch (const DivergenceError&) {
        t.add({std::string("profile"), std::string("cos_over_sqrt"), NAN, NAN,
               std::string("non-decay")});
        ck.expect(true, "");
    }
    const SequenceEntry& alt = gallery_sequence("alt_harmonic");
    auto seq_curve = gms_abel_olivier(alt.seq, {100, 10000, 1000000});
    for (const SequenceDecayPoint& pt : seq_curve)
        t.add({std::string("sequence"), alt.seq.name, double(pt.m), pt.sup,
               std::string(pt.tail_certified ? "ok" : "uncertified")});
    ck.expect(seq_curve.back().sup >= 0.9,
              "alt_harmonic: n|a_n| should stay near 1 (series converges, sequence not GMS)");
}

void run_exp_sharpness(const Opts& o, Table& t, Checks& ck) {
    const GalleryEntry& cs = gallery_profile("cos_over_sqrt");
    BesselOrder half(-0.5);
    double tol = o.tol < 1e-6 ? 1e-6 : o.tol;
    t.columns = {"u", "value", "diverged", "closed_form"};
    std::vector<double> over{2.0, 1.75, 1.5, 1.35, 1.2, 1.1, 1.05};
    std::vector<double> under{0.25, 0.5, 0.75, 1.0};
    std::map<double, double> got;
    auto run_one = [&](double u) {
        try {
            PartialIntegralResult r = hankel_limit(cs.profile, half, u, tol);
            got[u] = r.value;
            t.add({u, r.value, false, u != 1.0 ? json(cs.transform(u)) : json(NAN)});
        } catch (const DivergenceError& e) {
            std::cerr << "note: u=" << fmt17(u) << ": " << e.what() << "\n";
            t.add({u, NAN, true, json(NAN)});
        }
    };
    for (double u : over) run_one(u);
    for (double u : under) run_one(u);

    for (double u : over) {
        std::ostringstream at;
        at << "u=" << fmt17(u);
        ck.expect(got.count(u) == 1, "no convergence above the carrier at " + at.str());
        if (got.count(u))
            ck.expect(std::abs(got[u] - cs.transform(u)) <= 1e-3 * std::abs(cs.transform(u)),
                      "closed form missed at " + at.str());
    }
    for (std::size_t i = 1; i < over.size(); ++i)
        ck.expect(got.count(over[i]) && got.count(over[i - 1]) &&
                      got[over[i]] > got[over[i - 1]],
                  "transform should grow as u decreases toward 1");
    ck.expect(got.count(1.0) == 0, "expected divergence at u=1");
}

void run_exp_series_divergence(const Opts&, Table& t, Checks& ck) {
    const SequenceEntry& e = gallery_sequence("cosn_over_n");
    t.columns = {"check", "x", "N", "value", "pass"};

    LineFit f1 = partial_sum_growth(e.seq, 1.0, 1000, 10);
    bool ok1 = std::abs(f1.slope - 0.5) <= 0.05;
    t.add({std::string("log_slope"), 1.0, 1024000.0, f1.slope, ok1});
    ck.expect(ok1, "partial sums at x=1 should grow like 0.5 ln N, slope " + fmt17(f1.slope));

    LineFit f2 = partial_sum_growth(e.seq, 2.0, 1000, 10);
    bool ok2 = std::abs(f2.slope) <= 0.05;
    t.add({std::string("log_slope"), 2.0, 1024000.0, f2.slope, ok2});
    ck.expect(ok2, "partial sums at x=2 should stay bounded, slope " + fmt17(f2.slope));

    for (double N : {1e3, 1e4, 1e5, 1e6}) {
        double res = cos_square_sum_identity(std::size_t(N));
        bool ok = std::abs(res) <= 1e-9;
        t.add({std::string("identity_residual"), NAN, N, res, ok});
        ck.expect(ok, "squared-cosine identity residual " + fmt17(res) + " at N=" + fmt17(N));
    }
}

void run_exp_square_wave(const Opts&, Table& t, Checks& ck) {
    const SequenceEntry& e = gallery_sequence("square_wave");
    t.columns = {"M", "N", "tail_sup", "partial_sup"};
    std::vector<double> wide;
    for (int i = 1; i < 2000; ++i) wide.push_back(pi * double(i) / 2000.0);

    for (std::size_t M : {10u, 100u, 1000u, 10000u}) {
        std::size_t N = 2 * M;
        // the overshoot of the block sum hugs the jump of the limit function
        // at pi/2 within a lobe of width ~1/M, so the straddling grid
        // tightens with M
        std::vector<double> near;
        for (int j = -80; j <= 80; ++j) near.push_back(pi / 2.0 + pi * double(j) / (8.0 * double(M)));
        double tail = uniform_tail_series(e.seq, near, M, N);
        double part = 0.0;
        for (double x : wide) part = std::max(part, std::abs(cosine_partial_sum(e.seq, N, x)));
        for (double x : near)
            if (x > 0 && x < pi)
                part = std::max(part, std::abs(cosine_partial_sum(e.seq, N, x)));
        t.add({double(M), double(N), tail, part});
        std::ostringstream at;
        at << "M=" << M;
        ck.expect(tail >= 0.05, "tail sup sank below the overshoot at " + at.str());
        ck.expect(part <= 2.0, "partial sums escaped the uniform bound at " + at.str());
    }
}

// --------------------------------------------------------------- plumbing

std::string resolve_format(const Opts& o, const std::string& sub) {
    if (!o.format.empty()) {
        if (o.format != "csv" && o.format != "json")
            throw Error("--format must be csv or json");
        return o.format;
    }
    if (sub == "bound-report" || sub == "experiment good-bad-dichotomy") return "json";
    return "csv";
}

int emit(const Opts& o, const Table& t, const Checks& ck, const std::string& sub) {
    std::string format = resolve_format(o, sub);
    if (o.out.empty()) {
        write_table(std::cout, t, format, sub);
    } else {
        std::string path = o.out;
        if (!o.out_dir.empty() && path.front() != '/') path = o.out_dir + "/" + path;
        std::ofstream f(path);
        if (!f) throw Error("cannot open output file " + path);
        write_table(f, t, format, sub);
    }
    std::size_t shown = std::min<std::size_t>(ck.failures.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) std::cerr << "FAIL: " << ck.failures[i] << "\n";
    if (shown < ck.failures.size())
        std::cerr << "... and " << (ck.failures.size() - shown) << " more\n";
    if (!ck.failures.empty()) {
        std::cerr << ck.failures.size() << " of " << ck.total << " checks failed\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for transforms of general monotone functions"};
    app.set_config("--config", "", "flat key=value file overriding option defaults");
    Opts o;

    app.add_option("--alpha", o.alpha, "kernel order (>= -0.5; -0.5 is the cosine kernel)");
    app.add_option("--function", o.function, "catalogue profile name");
    app.add_option("--profile-desc", o.profile_desc,
                   "piecewise profile, e.g. '0:1 const 1; 1:inf pow 1 -2'");
    app.add_option("--sequence", o.sequence, "catalogue sequence name");
    app.add_option("--lambda", o.lambda, "window dilation, a power of two");
    app.add_option("--c", o.c_const, "monotonicity constant (0: fit it)");
    app.add_option("--u-min", o.u_min, "frequency grid start");
    app.add_option("--u-max", o.u_max, "frequency grid end");
    app.add_option("--u-per-decade", o.u_per_decade, "frequency grid density");
    app.add_option("--u", o.u_list, "explicit frequency list (overrides the grid)");
    app.add_option("--x", o.x_list, "explicit evaluation points");
    app.add_option("--x-min", o.x_min, "linear grid start (bessel)");
    app.add_option("--x-max", o.x_max, "linear grid end (bessel)");
    app.add_option("--points", o.points, "linear grid size (bessel)");
    app.add_option("--n-max", o.n_max, "truncation / top index, subcommand dependent");
    app.add_option("--n-min", o.n_min, "first dyadic block (dyadic-stats)");
    app.add_option("--envelope-m", o.envelope_m, "also emit partial-sum envelopes of depth m");
    app.add_flag("--s", o.s_table, "emit the sup of x^{a+1/2} |j_a| instead of a value table");
    app.add_option("--big-n", o.big_n, "truncation points N for bound reports");
    app.add_option("--tol", o.tol, "quadrature tolerance");
    app.add_option("--format", o.format, "csv or json");
    app.add_option("--out", o.out, "output file (default: stdout)");
    app.add_option("--out-dir", o.out_dir, "directory for relative --out paths")
        ->envname("HGM_OUT_DIR");

    auto* sub_bessel = app.add_subcommand("bessel", "normalized Bessel kernel tables");
    auto* sub_gm = app.add_subcommand("gm-check", "verify or fit the monotonicity constant");
    auto* sub_dyadic = app.add_subcommand("dyadic-stats", "good/bad dyadic window statistics");
    auto* sub_transform = app.add_subcommand("transform", "partial or limiting transforms");
    auto* sub_bound = app.add_subcommand("bound-report", "boundedness certificate with terms");
    auto* sub_series = app.add_subcommand("series", "cosine partial sum tables");
    auto* sub_exp = app.add_subcommand("experiment", "canned studies");
    sub_exp->add_option("name", o.experiment,
                        "abel-olivier | sharpness-cosine | series-divergence | square-wave | "
                        "good-bad-dichotomy")
        ->required();
    for (CLI::App* s : {sub_bessel, sub_gm, sub_dyadic, sub_transform, sub_bound, sub_series,
                        sub_exp})
        s->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Table t;
        Checks ck;
        std::string sub;
        if (*sub_bessel) {
            sub = "bessel";
            run_bessel(o, t, ck);
        } else if (*sub_gm) {
            sub = "gm-check";
            run_gm_check(o, t, ck);
        } else if (*sub_dyadic) {
            sub = "dyadic-stats";
            run_dyadic_stats(o, t, ck);
        } else if (*sub_transform) {
            sub = "transform";
            run_transform(o, t, ck);
        } else if (*sub_bound) {
            sub = "bound-report";
            run_bound_report(o, t, ck);
        } else if (*sub_series) {
            sub = "series";
            run_series(o, t, ck);
        } else {
            sub = "experiment " + o.experiment;
            if (o.experiment == "good-bad-dichotomy")
                run_exp_good_bad(o, t, ck);
            else if (o.experiment == "abel-olivier")
                run_exp_abel_olivier(o, t, ck);
            else if (o.experiment == "sharpness-cosine")
                run_exp_sharpness(o, t, ck);
            else if (o.experiment == "series-divergence")
                run_exp_series_divergence(o, t, ck);
            else if (o.experiment == "square-wave")
                run_exp_square_wave(o, t, ck);
            else
                throw Error("unknown experiment '" + o.experiment + "'");
        }
        return emit(o, t, ck, sub);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
