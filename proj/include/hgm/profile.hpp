#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgm/common.hpp"

namespace hgm {

// A jump of f at t: f(t+) - f(t-).
struct JumpAtom {
    double t;
    double jump;
};

// Certified control at infinity: |f(t)| <= coef * t^{-exponent} for
// t >= from, and, when var_coef >= 0, also
// int_T^inf |df| <= var_coef * T^{-var_exp()} for T >= from.
// The variation rate defaults to the size rate but can be slower: a step
// profile with |a_n| ~ n^{-p} has |f| ~ t^{-p} yet jump mass ~ t^{1-p}.
// var_coef < 0 declares that the tail variation admits no such bound
// (e.g. t^{-1/2} cos t, whose variation per octave grows).
struct TailBound {
    double coef;
    double exponent;
    double from = 1.0;
    double var_coef = -1.0;
    double var_exponent = -1.0;

    double var_exp() const { return var_exponent >= 0.0 ? var_exponent : exponent; }
};

// Certified control at the origin: |f(t)| <= coef * t^{-exponent} and
// |f'(t)| <= deriv_coef * t^{-deriv_exponent} for t <= upto (deriv_coef < 0
// when no density bound is needed, e.g. step profiles).  exponent may be
// negative, meaning f vanishes at 0 at that rate.
struct OriginBound {
    double coef;
    double exponent;
    double upto = 1.0;
    double deriv_coef = -1.0;
    double deriv_exponent = 0.0;
};

// A real function on (0, inf) carrying the analytic metadata that makes
// downstream quantities certifiable: derivative density between
// breakpoints, jump atoms, power-law bounds at both ends, and the
// frequency of an oscillatory factor if there is one.  Self-similar
// profiles (one jump per dyadic block, so infinitely many in total)
// enumerate their breakpoints and atoms on demand via the generators.
struct RadialProfile {
    std::string name;
    std::function<double(double)> eval;
    std::function<double(double)> deriv;  // null: f' == 0 between breakpoints
    std::vector<double> breakpoints;      // ascending
    std::vector<JumpAtom> atoms;
    std::function<std::vector<double>(double, double)> breakpoint_gen;
    std::function<std::vector<JumpAtom>(double, double)> atom_gen;
    double support_end = std::numeric_limits<double>::infinity();
    std::optional<TailBound> tail;
    std::optional<OriginBound> origin;
    double osc_freq = 0.0;  // f = (smooth amplitude) * cos(osc_freq * t) when > 0

    double operator()(double t) const { return eval(t); }

    // Breakpoints strictly inside (a, b), ascending.
    std::vector<double> breakpoints_in(double a, double b) const {
        std::vector<double> v;
        for (double t : breakpoints)
            if (t > a && t < b) v.push_back(t);
        if (breakpoint_gen)
            for (double t : breakpoint_gen(a, b))
                if (t > a && t < b) v.push_back(t);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    // Atoms with location in the half-open window (a, b], matching the
    // variation convention int_a^b |df| over (a, b].
    std::vector<JumpAtom> atoms_in(double a, double b) const {
        std::vector<JumpAtom> v;
        for (const JumpAtom& j : atoms)
            if (j.t > a && j.t <= b) v.push_back(j);
        if (atom_gen)
            for (const JumpAtom& j : atom_gen(a, b))
                if (j.t > a && j.t <= b) v.push_back(j);
        std::sort(v.begin(), v.end(), [](const JumpAtom& x, const JumpAtom& y) { return x.t < y.t; });
        return v;
    }
};

// t^w f(t) with all metadata transported.  GM membership survives this
// reweighting, which is what lets one hypothesis set serve several
// transform orders; the certificates are refit by the caller.
inline RadialProfile weighted(const RadialProfile& p, double w) {
    if (w == 0.0) return p;
    RadialProfile q;
    q.name = p.name + "*t^" + std::to_string(w);
    auto f = p.eval;
    q.eval = [f, w](double t) { return std::pow(t, w) * f(t); };
    auto df = p.deriv;  // may be null
    q.deriv = [f, df, w](double t) {
        double d = w * std::pow(t, w - 1.0) * f(t);
        if (df) d += std::pow(t, w) * df(t);
        return d;
    };
    q.breakpoints = p.breakpoints;
    q.breakpoint_gen = p.breakpoint_gen;
    q.atoms = p.atoms;
    for (JumpAtom& a : q.atoms) a.jump *= std::pow(a.t, w);
    if (p.atom_gen) {
        auto gen = p.atom_gen;
        q.atom_gen = [gen, w](double a, double b) {
            std::vector<JumpAtom> v = gen(a, b);
            for (JumpAtom& j : v) j.jump *= std::pow(j.t, w);
            return v;
        };
    }
    q.support_end = p.support_end;
    q.osc_freq = p.osc_freq;
    if (p.tail) {
        const TailBound& tb = *p.tail;
        if (tb.exponent > w) {
            TailBound nt;
            nt.exponent = tb.exponent - w;
            nt.coef = tb.coef;
            nt.from = std::max(tb.from, 1.0);
            double pv = tb.var_exp();
            if (tb.var_coef >= 0 && (w <= 0.0 || pv > w)) {
                // d(t^w f) = w t^{w-1} f dt + t^w df.  The density piece
                // integrates to |w| coef T^{w-p}/(p-w); the Stieltjes piece,
                // by parts against V(t) <= var_coef t^{-pv}, to
                // var_coef T^{w-pv} (1 + w_+/(pv-w)).
                double ca = std::abs(w) * tb.coef / (tb.exponent - w);
                double cb = tb.var_coef * (1.0 + (w > 0.0 ? w / (pv - w) : 0.0));
                nt.var_coef = ca + cb;
                nt.var_exponent = std::min(tb.exponent - w, pv - w);
            }
            q.tail = nt;
        }
        // otherwise the weighted profile no longer vanishes at infinity;
        // leave the tail hint empty and let consumers reject it.
    }
    if (p.origin) {
        const OriginBound& ob = *p.origin;
        if (ob.upto > 1.0) throw Error("weighted: origin bounds must end at upto <= 1");
        OriginBound no;
        no.coef = ob.coef;
        no.exponent = ob.exponent - w;
        no.upto = ob.upto;
        // |(t^w f)'| <= |w| coef t^{w-1-q} + deriv_coef t^{w-qd}; on t <= 1
        // both are dominated by the larger exponent.
        no.deriv_coef = std::abs(w) * ob.coef + std::max(ob.deriv_coef, 0.0);
        no.deriv_exponent = std::max(ob.exponent + 1.0 - w,
                                     ob.deriv_coef >= 0 ? ob.deriv_exponent - w : 0.0);
        q.origin = no;
    }
    return q;
}

}  // namespace hgm
