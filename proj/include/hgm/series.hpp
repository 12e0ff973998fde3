#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hgm/common.hpp"
#include "hgm/profile.hpp"

namespace hgm {

// A real sequence a_0, a_1, ... with a certified decay rate:
// |a_n| <= decay_coef * n^{-decay_exp} for n >= 1 (decay_coef < 0: no
// certificate).  Finite sequences set support_end.
struct SequenceProfile {
    std::string name;
    std::function<double(std::size_t)> term;
    double decay_coef = -1.0;
    double decay_exp = 0.0;
    std::size_t support_end = std::size_t(-1);  // a_n == 0 for n > support_end

    double operator()(std::size_t n) const {
        return n > support_end ? 0.0 : term(n);
    }
};

// S_N(x) = sum_{n=0}^{N} a_n cos(nx), compensated accumulation.
inline double cosine_partial_sum(const SequenceProfile& s, std::size_t N, double x) {
    KahanSum sum;
    std::size_t top = std::min(N, s.support_end);
    for (std::size_t n = 0; n <= top; ++n) sum.add(s(n) * std::cos(double(n) * x));
    return sum.value();
}

// Partial sums over the tail block only: S_N - S_M without cancellation.
inline double partial_sum_block(const SequenceProfile& s, std::size_t M, std::size_t N, double x) {
    KahanSum sum;
    std::size_t top = std::min(N, s.support_end);
    for (std::size_t n = M + 1; n <= top; ++n) sum.add(s(n) * std::cos(double(n) * x));
    return sum.value();
}

struct GmsPoint {
    std::size_t n;
    double lhs;  // sum_{k=n}^{2n} |a_k - a_{k+1}|
    double rhs;  // sum_{k=ceil(n/lambda)}^{floor(lambda n)} |a_k|/k
    bool pass;
};

struct GmsReport {
    double C;
    unsigned nu;
    double lambda;
    std::vector<GmsPoint> points;
    bool pass() const {
        for (const GmsPoint& p : points)
            if (!p.pass) return false;
        return true;
    }
};

namespace detail {

inline double gms_lhs(const SequenceProfile& s, std::size_t n) {
    KahanSum v;
    for (std::size_t k = n; k <= 2 * n; ++k) v.add(std::abs(s(k) - s(k + 1)));
    return v.value();
}

inline double gms_rhs(const SequenceProfile& s, std::size_t n, double lambda) {
    // integer endpoints: the inclusive reading of the block n/lambda..lambda*n
    std::size_t k0 = std::size_t(std::ceil(double(n) / lambda));
    std::size_t k1 = std::size_t(std::floor(lambda * double(n)));
    KahanSum v;
    for (std::size_t k = std::max<std::size_t>(k0, 1); k <= k1; ++k)
        v.add(std::abs(s(k)) / double(k));
    return v.value();
}

}  // namespace detail

// Sequence analogue of the variation-vs-mass inequality.
inline GmsReport gms_verify(const SequenceProfile& s, double C, unsigned nu,
                            const std::vector<std::size_t>& n_grid) {
    if (nu == 0) throw Error("gms_verify: need nu >= 1");
    GmsReport rep{C, nu, std::ldexp(1.0, int(nu)), {}};
    for (std::size_t n : n_grid) {
        if (n == 0) throw Error("gms_verify: n grid must be positive");
        double lhs = detail::gms_lhs(s, n);
        double rhs = detail::gms_rhs(s, n, rep.lambda);
        bool ok = lhs <= C * rhs * (1.0 + 1e-12) + 1e-15;
        rep.points.push_back({n, lhs, rhs, ok});
    }
    return rep;
}

// Smallest C making the block inequality hold on the grid; zero blocks are
// vacuous, variation against zero mass is rejected.
inline double gms_fit_constant(const SequenceProfile& s, unsigned nu,
                               const std::vector<std::size_t>& n_grid) {
    double lambda = std::ldexp(1.0, int(nu));
    double worst = 0.0;
    for (std::size_t n : n_grid) {
        double lhs = detail::gms_lhs(s, n);
        if (lhs == 0.0) continue;
        double rhs = detail::gms_rhs(s, n, lambda);
        if (rhs == 0.0) throw Error("not GMS on grid: variation without mass at n = " + std::to_string(n));
        worst = std::max(worst, lhs / rhs);
    }
    return worst;
}

struct SequenceDecayPoint {
    std::size_t m;
    double sup;  // max over n in [m, horizon] of n |a_n| (+ certified tail)
    bool tail_certified;
};

// Discrete decay profile m -> sup_{n >= m} n |a_n|.  With decay exponent
// > 1 the tail beyond the horizon is certified analytically; with exponent
// <= 1 the reported sup is the measured horizon max, flagged uncertified
// (e.g. (-1)^n / n sits at exactly 1 forever).  Growth is reported as
// divergence.
inline std::vector<SequenceDecayPoint> gms_abel_olivier(const SequenceProfile& s,
                                                        const std::vector<std::size_t>& m_grid) {
    if (m_grid.empty()) throw Error("gms_abel_olivier: empty grid");
    if (s.decay_coef < 0 && s.support_end == std::size_t(-1))
        throw Error("gms_abel_olivier: no decay hint");
    std::size_t horizon = std::max<std::size_t>(4 * m_grid.back(), 1u << 20);
    if (s.support_end != std::size_t(-1)) horizon = std::min(horizon, s.support_end);
    bool certified = s.support_end != std::size_t(-1) || s.decay_exp > 1.0;
    double tail = 0.0;
    if (s.support_end == std::size_t(-1)) {
        if (certified) {
            tail = s.decay_coef * std::pow(double(horizon), 1.0 - s.decay_exp);
        } else {
            double early = 0.0, late = 0.0;
            for (std::size_t n = std::max<std::size_t>(m_grid.front(), 1); n <= 16 * m_grid.front(); ++n)
                early = std::max(early, double(n) * std::abs(s(n)));
            for (std::size_t n = horizon / 16; n <= horizon; ++n)
                late = std::max(late, double(n) * std::abs(s(n)));
            if (late > 4.0 * early)
                throw DivergenceError("gms_abel_olivier: n|a_n| is unbounded", late);
        }
    }
    // suffix maxima over [m, horizon]
    std::vector<std::size_t> ms = m_grid;
    std::vector<SequenceDecayPoint> out(ms.size());
    double run = tail;
    std::size_t gi = ms.size();
    std::size_t lo = std::max<std::size_t>(ms.front(), 1);
    for (std::size_t n = horizon + 1; n-- > lo;) {
        while (gi > 0 && ms[gi - 1] > n) {
            --gi;
            out[gi] = {ms[gi], run, certified};
        }
        run = std::max(run, double(n) * std::abs(s(n)));
    }
    while (gi > 0) {
        --gi;
        out[gi] = {ms[gi], run, certified};
    }
    return out;
}

// D_N(x) = sum_{n=-N}^{N} e^{inx}; the closed form sin((N+1/2)x)/sin(x/2)
// away from the sine's zeros, the explicit 2N+1-term sum near them.
inline double dirichlet_kernel(std::size_t N, double x) {
    double s = std::sin(0.5 * x);
    if (std::abs(s) > 1e-8)
        return std::sin((double(N) + 0.5) * x) / s;
    KahanSum sum;
    sum.add(1.0);
    for (std::size_t n = 1; n <= N; ++n) sum.add(2.0 * std::cos(double(n) * x));
    return sum.value();
}

// Residual of  sum_{n=1}^N cos^2 n = N/2 + (D_N(2) - 1)/4.
inline double cos_square_sum_identity(std::size_t N) {
    if (N < 1) throw Error("cos_square_sum_identity: need N >= 1");
    KahanSum direct;
    for (std::size_t n = 1; n <= N; ++n) {
        double c = std::cos(double(n));
        direct.add(c * c);
    }
    double closed = 0.5 * double(N) + 0.25 * (dirichlet_kernel(N, 2.0) - 1.0);
    return std::abs(direct.value() - closed);
}

// max over the x grid of |S_N(x) - S_M(x)|: the uniform-convergence
// diagnostic for the series.
inline double uniform_tail_series(const SequenceProfile& s, const std::vector<double>& x_grid,
                                  std::size_t M, std::size_t N) {
    if (!(M < N)) throw Error("uniform_tail_series: need M < N");
    double worst = 0.0;
    for (double x : x_grid) worst = std::max(worst, std::abs(partial_sum_block(s, M, N, x)));
    return worst;
}

// Least-squares trend of S_N(x_0) against ln N over a dyadic ladder
// N = N0 * 2^k; a slope near 1/2 is the logarithmic-divergence signature,
// a slope near 0 with small stderr indicates boundedness.
inline LineFit partial_sum_growth(const SequenceProfile& s, double x, std::size_t N0, int doublings) {
    if (N0 < 1 || doublings < 2) throw Error("partial_sum_growth: need N0 >= 1, >= 3 ladder points");
    std::vector<double> lnN, SN;
    KahanSum sum;
    std::size_t n = 0;
    for (int k = 0; k <= doublings; ++k) {
        std::size_t Nk = N0 << k;
        for (; n <= Nk; ++n) sum.add(s(n) * std::cos(double(n) * x));
        lnN.push_back(std::log(double(Nk)));
        SN.push_back(sum.value());
    }
    return linear_fit(lnN, SN);
}

// The sequence as a function: f(t) = a_n on (n, n+1].  GM and GMS agree
// through this embedding (same constants up to block-edge bookkeeping),
// which is what the cross-membership tests exercise.
inline RadialProfile to_step_profile(const SequenceProfile& s) {
    RadialProfile p;
    p.name = s.name + "_step";
    auto seq = s;
    p.eval = [seq](double t) {
        if (t <= 0) return 0.0;
        double n = std::ceil(t) - 1.0;
        return seq(std::size_t(n));
    };
    p.deriv = nullptr;
    p.breakpoint_gen = [](double a, double b) {
        std::vector<double> v;
        for (double n = std::max(1.0, std::ceil(a)); n < b; n += 1.0) {
            v.push_back(n);
            if (v.size() > 2000000) throw Error("step profile: breakpoint enumeration too large");
        }
        return v;
    };
    p.atom_gen = [seq](double a, double b) {
        std::vector<JumpAtom> v;
        for (double n = std::max(1.0, std::ceil(a)); n <= b; n += 1.0) {
            std::size_t k = std::size_t(n);
            v.push_back({n, seq(k) - seq(k - 1)});
            if (v.size() > 2000000) throw Error("step profile: atom enumeration too large");
        }
        return v;
    };
    if (s.support_end != std::size_t(-1)) p.support_end = double(s.support_end + 1);
    if (s.decay_coef >= 0) {
        TailBound tb;
        // |f(t)| = |a_{ceil t - 1}| <= coef (t-1)^{-p} <= coef 2^p t^{-p} on t >= 2
        tb.coef = s.decay_coef * std::pow(2.0, s.decay_exp);
        tb.exponent = s.decay_exp;
        tb.from = 2.0;
        if (s.decay_exp > 1.0) {
            // jumps: sum_{n >= T} (|a_n| + |a_{n-1}|) <= 2 coef sum n^{-p}
            tb.var_coef = 2.0 * s.decay_coef * std::pow(2.0, s.decay_exp) *
                          (s.decay_exp / (s.decay_exp - 1.0));
            tb.var_exponent = s.decay_exp - 1.0;
        }
        p.tail = tb;
    }
    p.origin = OriginBound{std::abs(s(0)) + std::abs(s(1)), 0.0, 1.0, 0.0, 0.0};
    return p;
}

}  // namespace hgm
