#pragma once

// Declarative piecewise profiles.
//
// A profile description is a semicolon-separated list of segments
//
//   lo:hi kind args...
//
// covering (0, support_end] or (0, inf) without gaps:
//
//   const c        f(t) = c
//   pow c p        f(t) = c t^p
//   exp c r        f(t) = c e^{r t}
//   cospow c p w   f(t) = c t^p cos(w t)
//
// "inf" is accepted for the final hi. Example: the unit box with an inverse
// square tail is "0:1 const 1; 1:inf pow 1 -2".
//
// Junction jumps become atoms automatically (side limits of adjacent pieces),
// junction points become breakpoints, and origin / tail envelopes are derived
// from the first and last pieces so the parsed profile can drive the same
// machinery as the built-in catalogue. A growing last piece (pow with p > 0,
// exp with r > 0) yields no usable tail envelope; operations that need one
// reject the profile rather than guess.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hgm/profile.hpp"

namespace hgm {

namespace detail {

enum class PieceKind { constant, power, exponential, cos_power };

struct Piece {
    double lo = 0.0;
    double hi = 0.0;
    PieceKind kind = PieceKind::constant;
    double c = 0.0;  // amplitude
    double p = 0.0;  // power (pow, cospow) or rate (exp)
    double w = 0.0;  // angular frequency (cospow)

    double eval(double t) const {
        switch (kind) {
            case PieceKind::constant: return c;
            case PieceKind::power: return c * std::pow(t, p);
            case PieceKind::exponential: return c * std::exp(p * t);
            case PieceKind::cos_power: return c * std::pow(t, p) * std::cos(w * t);
        }
        return 0.0;
    }

    double deriv(double t) const {
        switch (kind) {
            case PieceKind::constant: return 0.0;
            case PieceKind::power: return c * p * std::pow(t, p - 1.0);
            case PieceKind::exponential: return c * p * std::exp(p * t);
            case PieceKind::cos_power:
                return c * (p * std::pow(t, p - 1.0) * std::cos(w * t) -
                            w * std::pow(t, p) * std::sin(w * t));
        }
        return 0.0;
    }
};

inline double parse_profile_num(const std::string& tok, const std::string& where) {
    if (tok == "inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw Error("profile: expected a number in " + where + ", got '" + tok + "'");
    return v;
}

inline Piece parse_profile_segment(const std::string& text) {
    std::istringstream in(text);
    std::string range, kind;
    if (!(in >> range >> kind)) throw Error("profile: incomplete segment '" + text + "'");
    auto colon = range.find(':');
    if (colon == std::string::npos)
        throw Error("profile: segment must start with lo:hi, got '" + range + "'");

    Piece pc;
    pc.lo = parse_profile_num(range.substr(0, colon), "segment range");
    pc.hi = parse_profile_num(range.substr(colon + 1), "segment range");
    if (!(pc.hi > pc.lo)) throw Error("profile: empty range '" + range + "'");

    std::vector<double> args;
    std::string tok;
    while (in >> tok) args.push_back(parse_profile_num(tok, "'" + kind + "' arguments"));

    auto want = [&](std::size_t n) {
        if (args.size() != n) {
            std::ostringstream msg;
            msg << "profile: '" << kind << "' takes " << n << " argument" << (n == 1 ? "" : "s")
                << ", got " << args.size();
            throw Error(msg.str());
        }
    };
    if (kind == "const") {
        want(1);
        pc.kind = PieceKind::constant;
        pc.c = args[0];
    } else if (kind == "pow") {
        want(2);
        pc.kind = PieceKind::power;
        pc.c = args[0];
        pc.p = args[1];
    } else if (kind == "exp") {
        want(2);
        pc.kind = PieceKind::exponential;
        pc.c = args[0];
        pc.p = args[1];
    } else if (kind == "cospow") {
        want(3);
        pc.kind = PieceKind::cos_power;
        pc.c = args[0];
        pc.p = args[1];
        pc.w = args[2];
    } else {
        throw Error("profile: unknown piece kind '" + kind + "'");
    }
    return pc;
}

// Envelope |f| <= K t^{-q}, |f'| <= Kd t^{-qd} on (0, upto] for one piece.
inline OriginBound piece_origin_bound(const Piece& pc, double upto) {
    OriginBound ob;
    ob.upto = upto;
    switch (pc.kind) {
        case PieceKind::constant:
            ob.coef = std::abs(pc.c);
            ob.exponent = 0.0;
            ob.deriv_coef = 0.0;
            ob.deriv_exponent = 0.0;
            break;
        case PieceKind::power:
            ob.coef = std::abs(pc.c) * (pc.p >= 0.0 ? std::pow(upto, pc.p) : 1.0);
            ob.exponent = std::max(-pc.p, 0.0);
            ob.deriv_coef = std::abs(pc.c * pc.p);
            ob.deriv_exponent = std::max(1.0 - pc.p, 0.0);
            break;
        case PieceKind::exponential: {
            double cap = std::exp(std::max(pc.p, 0.0) * upto);
            ob.coef = std::abs(pc.c) * cap;
            ob.exponent = 0.0;
            ob.deriv_coef = std::abs(pc.c * pc.p) * cap;
            ob.deriv_exponent = 0.0;
            break;
        }
        case PieceKind::cos_power:
            // |f| <= |c| t^p, |f'| <= |c| (|p| t^{p-1} + |w| t^p)
            ob.coef = std::abs(pc.c) * (pc.p >= 0.0 ? std::pow(upto, pc.p) : 1.0);
            ob.exponent = std::max(-pc.p, 0.0);
            ob.deriv_coef = std::abs(pc.c) * (std::abs(pc.p) + std::abs(pc.w) * upto);
            ob.deriv_exponent = std::max(1.0 - pc.p, 0.0);
            break;
    }
    return ob;
}

inline std::optional<TailBound> piece_tail_bound(const Piece& pc) {
    double from = std::max(pc.lo, 1.0);
    TailBound tb;
    tb.from = from;
    switch (pc.kind) {
        case PieceKind::constant:
            tb.coef = std::abs(pc.c);
            tb.exponent = 0.0;
            tb.var_coef = 0.0;
            tb.var_exponent = 0.0;
            return tb;
        case PieceKind::power:
            tb.coef = std::abs(pc.c);
            tb.exponent = -pc.p;
            if (pc.p < 0.0) {
                // int_T |c p| t^{p-1} dt = |c| T^p
                tb.var_coef = std::abs(pc.c);
                tb.var_exponent = -pc.p;
            }
            return tb;
        case PieceKind::exponential: {
            if (pc.p > 0.0) return std::nullopt;
            if (pc.p == 0.0) {
                tb.coef = std::abs(pc.c);
                tb.exponent = 0.0;
                tb.var_coef = 0.0;
                tb.var_exponent = 0.0;
                return tb;
            }
            // cast the exponential under a fixed power envelope: t^8 e^{pt}
            // peaks at t = 8/|p|, so K = |c| max(...) certifies |f| <= K t^{-8}
            double peak = 8.0 / -pc.p;
            double k = std::abs(pc.c) *
                       std::max(std::pow(from, 8.0) * std::exp(pc.p * from),
                                peak >= from ? std::pow(peak, 8.0) * std::exp(-8.0) : 0.0);
            tb.coef = k;
            tb.exponent = 8.0;
            tb.var_coef = k;  // int_T |c p| e^{pt} dt = |c| e^{pT} <= K T^{-8}
            tb.var_exponent = 8.0;
            return tb;
        }
        case PieceKind::cos_power:
            tb.coef = std::abs(pc.c);
            tb.exponent = -pc.p;
            if (pc.p < -1.0) {
                // int_T |c| (|p| t^{p-1} + |w| t^p) dt
                //   <= |c| (1/from + |w|/(-p-1)) T^{p+1}
                tb.var_coef = std::abs(pc.c) * (1.0 / from + std::abs(pc.w) / (-pc.p - 1.0));
                tb.var_exponent = -pc.p - 1.0;
            }
            return tb;
    }
    return std::nullopt;
}

}  // namespace detail

inline RadialProfile parse_profile(const std::string& text) {
    std::vector<detail::Piece> pieces;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        std::string seg = text.substr(start, semi == std::string::npos ? semi : semi - start);
        bool blank = seg.find_first_not_of(" \t\r\n") == std::string::npos;
        if (!blank) pieces.push_back(detail::parse_profile_segment(seg));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (pieces.empty()) throw Error("profile: no segments");
    if (pieces.front().lo != 0.0) throw Error("profile: first segment must start at 0");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (std::isinf(pieces[i].hi)) throw Error("profile: only the last segment may reach inf");
        if (pieces[i].hi != pieces[i + 1].lo) {
            std::ostringstream msg;
            msg << "profile: segments must abut; piece ending at " << pieces[i].hi
                << " is followed by one starting at " << pieces[i + 1].lo;
            throw Error(msg.str());
        }
    }

    RadialProfile p;
    p.name = "custom";
    p.eval = [pieces](double t) {
        for (const auto& pc : pieces)
            if (t <= pc.hi) return pc.eval(t);
        return 0.0;
    };
    p.deriv = [pieces](double t) {
        for (const auto& pc : pieces)
            if (t <= pc.hi) return pc.deriv(t);
        return 0.0;
    };

    // junctions: breakpoints always, atoms where the side limits disagree
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        double x = pieces[i].hi;
        double left = pieces[i].eval(x);
        double right = pieces[i + 1].eval(x);
        p.breakpoints.push_back(x);
        double scale = std::max({std::abs(left), std::abs(right), 1.0});
        if (std::abs(right - left) > 1e-15 * scale) p.atoms.push_back({x, right - left});
    }
    if (!std::isinf(pieces.back().hi)) {
        double x = pieces.back().hi;
        p.support_end = x;
        p.breakpoints.push_back(x);
        double left = pieces.back().eval(x);
        if (std::abs(left) > 1e-15) p.atoms.push_back({x, -left});
    }

    p.origin = detail::piece_origin_bound(pieces.front(), std::min(pieces.front().hi, 1.0));
    if (std::isinf(pieces.back().hi)) p.tail = detail::piece_tail_bound(pieces.back());

    double freq = 0.0;
    for (const auto& pc : pieces)
        if (pc.kind == detail::PieceKind::cos_power) freq = std::max(freq, std::abs(pc.w));
    p.osc_freq = freq;
    return p;
}

}  // namespace hgm
