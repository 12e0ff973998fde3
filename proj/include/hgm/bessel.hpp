#pragma once

#include <cmath>
#include <quadmath.h>

#include <vector>

#include "hgm/common.hpp"

namespace hgm {

// Order of the transform kernel.  Orders below -1/2 are rejected up front:
// everything downstream (kernel bound |j| <= 1, weight exponents 2a+1 > -1,
// the S constants) assumes alpha >= -1/2.
struct BesselOrder {
    double alpha;
    explicit BesselOrder(double a) : alpha(a) {
        if (!(a >= -0.5)) throw Error("BesselOrder: alpha must be >= -1/2");
    }
};

namespace detail {

// pi to ~32 significant digits as a head + tail pair of doubles.
inline const __float128 pi_q =
    __float128(3.141592653589793) + __float128(1.2246467991473532e-16);

// Power series for the normalized function: sum of (-1)^n (x/2)^{2n} /
// (n! (alpha+1)_n), i.e. the Bessel series rescaled so the n=0 term is 1.
// Terms are generated by the ratio -(x/2)^2 / ((n+1)(n+alpha+1)); summation
// stops once the terms decrease in magnitude (which certifies the remainder
// by the next term) and the next term is below 1e-18 in both absolute terms
// and relative to the running sum.
template <class T>
T eval_j_series_t(double alpha, double x) {
    const T q = T(0.5 * x) * T(0.5 * x);
    T term = 1, sum = 1;
    for (int n = 0; n < 4000; ++n) {
        term *= -q / (T(n + 1) * (T(n + 1) + T(alpha)));
        sum += term;
        T a = term < 0 ? -term : term;
        T s = sum < 0 ? -sum : sum;
        bool decreasing = q <= T(n + 2) * (T(n + 2) + T(alpha));
        if (decreasing && a < T(1e-18) * (s + T(1))) return sum;
    }
    throw Error("bessel series failed to terminate");  // unreachable for x <= 45
}

inline double eval_j_series(double alpha, double x) {
    // The series loses ~x/ln10 decimal digits to cancellation (largest term
    // grows like e^x / sqrt(x)).  80-bit accumulation holds 1e-13 absolute
    // error to about x = 18; binary128 to about x = 47.
    if (x <= 14.0) return double(eval_j_series_t<long double>(alpha, x));
    return double(eval_j_series_t<__float128>(alpha, x));
}

// Amplitude-phase asymptotic expansion.  With mu = 4 alpha^2 and
// omega = x - (2 alpha + 1) pi/4,
//   J_alpha(x) ~ sqrt(2/(pi x)) [P cos(omega) - Q sin(omega)],
// where P collects the even and Q the odd entries of the sequence
// t_0 = 1, t_{k+1} = t_k (mu - (2k+1)^2) / (8 x (k+1)), with alternating
// signs inside each of P and Q.  The series is truncated at its smallest
// term; if that term is not small enough to certify 1e-13, the point is
// outside this method's reach (x comparable to alpha^2) and we refuse
// rather than return an uncertified value.
inline double eval_j_asymptotic(double alpha, double x) {
    const double mu = 4.0 * alpha * alpha;
    double t = 1.0, P = 0.0, Q = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    // Large mu makes the terms grow before they decay (they are the
    // expansion's actual coefficients, so the growth phase must be summed
    // too); truncate at the first upturn after the decay has begun.
    bool decayed = false;
    for (int k = 0; k < 400; ++k) {
        double at = std::abs(t);
        if (at < 1e-17) { t = 0.0; break; }
        if (at >= prev && decayed) break;  // passed the minimal term
        if (k > 0 && at < prev) decayed = true;
        prev = at;
        int r = k % 4;  // sign/destination cycle: +P, +Q, -P, -Q
        if (r == 0) P += t;
        else if (r == 1) Q += t;
        else if (r == 2) P -= t;
        else Q -= t;
        t *= (mu - double(2 * k + 1) * double(2 * k + 1)) / (8.0 * x * double(k + 1));
    }
    if (std::abs(t) > 1e-13)
        throw Error("bessel asymptotic: cannot certify 1e-13 at this (alpha, x)");
    // Phase in binary128: omega itself is O(x), and the kernel is evaluated
    // at arguments up to ~1e9 in the transform drivers, where double phase
    // arithmetic alone would cost ~1e-7 absolute.
    __float128 omega = __float128(x) - __float128(2.0 * alpha + 1.0) * pi_q / 4;
    double c = double(cosq(omega));
    double s = double(sinq(omega));
    // Normalization Gamma(alpha+1) (2/x)^alpha sqrt(2/(pi x)) via logs; safe
    // since every factor is positive.
    double lg = std::lgamma(alpha + 1.0) + alpha * std::log(2.0 / x)
              + 0.5 * std::log(2.0 / (pi * x));
    return std::exp(lg) * (P * c - Q * s);
}

}  // namespace detail

// j_alpha(x): the Bessel function J_alpha rescaled to j_alpha(0) = 1.
// Absolute error <= 1e-13.  Power series up to x = 45, amplitude-phase
// asymptotic beyond; the two agree to ~1.5e-13 on the overlap [40, 45]
// (checked in the test suite).  alpha = -1/2 reproduces cos x, and gets a
// direct fast path since it is the innermost kernel of the cosine
// transforms; the generic paths are cross-checked against it in tests.
inline double eval_j(BesselOrder order, double x) {
    if (!(x >= 0)) throw Error("eval_j: x must be >= 0");
    if (order.alpha == -0.5) return std::cos(x);
    if (x <= 45.0) return detail::eval_j_series(order.alpha, x);
    return detail::eval_j_asymptotic(order.alpha, x);
}

// Two consecutive partial sums of the power series.  When the terms
// decrease in magnitude from the start (x <= 2 sqrt(alpha+1)) the terms
// alternate in sign, so the odd-index cut lies below the sum and the even
// one above: lower = sum through n = 2m+1, upper = sum through n = 2m.
struct EnvelopePair {
    double lower;
    double upper;
    unsigned order_m;
    bool valid;  // true iff x <= 2 sqrt(alpha+1), the certified bracket range
};

inline EnvelopePair envelope_bounds(BesselOrder order, double x, unsigned m) {
    long double q = (long double)(0.5 * x) * (0.5 * x);
    long double term = 1, sum = 1;
    long double upper = 1;  // running value at the last even cut
    for (unsigned n = 1; n <= 2 * m + 1; ++n) {
        term *= -q / ((long double)n * ((long double)n + (long double)order.alpha));
        sum += term;
        if (n % 2 == 0) upper = sum;
    }
    bool valid = x <= 2.0 * std::sqrt(order.alpha + 1.0);
    return {double(sum), double(upper), m, valid};
}

// Residual of the derivative identity
//   d/dt [ t^{2a+2} j_{a+1}(t) ] = (2a+2) t^{2a+1} j_a(t),
// measured as |central difference at x, step h| - |right-hand side|.
// O(h^2) at smooth points; the identity underlies every
// integration-by-parts step in the transform bounds.
inline double derivative_identity_residual(BesselOrder order, double x, double h) {
    if (!(x > h && h > 0)) throw Error("derivative_identity_residual: need x > h > 0");
    double a = order.alpha;
    BesselOrder up(a + 1.0);
    auto g = [&](double t) { return std::pow(t, 2 * a + 2) * eval_j(up, t); };
    double cd = (g(x + h) - g(x - h)) / (2.0 * h);
    double rhs = (2 * a + 2) * std::pow(x, 2 * a + 1) * eval_j(order, x);
    return std::abs(cd) - std::abs(rhs);
}

inline double default_s_xmax(double alpha) { return 200.0 + 20.0 * alpha; }

// S_alpha restricted to [1, x_max]: the sup of x^{alpha+1/2} |j_alpha(x)|.
// Grid scan at 8 points per oscillation period, then golden-section polish
// of every local maximum.  The tail of the weighted function approaches the
// constant envelope Gamma(alpha+1) 2^alpha sqrt(2/pi); we certify that the
// envelope has flattened out by x_max (last peaks agree to 1e-4) before
// trusting the restricted sup, and report failure otherwise.
inline double compute_S(BesselOrder order, double x_max) {
    if (!(x_max >= 1.0)) throw Error("compute_S: x_max must be >= 1");
    const double a = order.alpha;
    auto w = [&](double x) { return std::pow(x, a + 0.5) * std::abs(eval_j(order, x)); };

    const double step = pi / 8.0;
    std::size_t n = std::size_t((x_max - 1.0) / step) + 2;
    std::vector<double> xs(n), ws(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::min(1.0 + double(i) * step, x_max);
        ws[i] = w(xs[i]);
    }

    double sup = std::max(ws.front(), ws.back());
    std::vector<double> peaks;  // polished local maxima, in x order
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (ws[i] >= ws[i - 1] && ws[i] >= ws[i + 1]) {
            MaxResult r = golden_max(w, xs[i - 1], xs[i + 1]);
            peaks.push_back(r.value);
            sup = std::max(sup, r.value);
        }
    }

    if (peaks.size() < 6 || x_max < 20.0)
        throw Error("compute_S: x_max too small for the tail envelope to stabilize");
    double lo = peaks.back(), hi = peaks.back();
    for (std::size_t i = peaks.size() - 5; i < peaks.size(); ++i) {
        lo = std::min(lo, peaks[i]);
        hi = std::max(hi, peaks[i]);
    }
    if (hi - lo > 1e-4 * sup)
        throw Error("compute_S: tail envelope not stabilized by x_max");
    return sup;
}

inline double compute_S(BesselOrder order) {
    return compute_S(order, default_s_xmax(order.alpha));
}

}  // namespace hgm
