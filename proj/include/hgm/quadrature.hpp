#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "hgm/common.hpp"

namespace hgm {

struct QuadResult {
    double value;
    double error;       // accumulated error estimate
    std::size_t evals;  // integrand evaluations
};

namespace detail {

// Gauss-Kronrod 7/15 pair on [-1, 1], positive half (QUADPACK dqk15).
inline constexpr double gk_xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
inline constexpr double gk_wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double kron = gk_wgk[7] * fc;
    double gauss = gk_wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double x = h * gk_xgk[j];
        double fsum = f(c - x) + f(c + x);
        kron += gk_wgk[j] * fsum;
        if (j % 2 == 1)  // odd Kronrod indices are the embedded Gauss nodes
            gauss += gk_wg[j / 2] * fsum;
    }
    value = kron * h;
    // QUADPACK-style rescaled estimate; much less pessimistic than |K-G|
    // once the panel resolves the integrand, conservative before that.
    double diff = std::abs((kron - gauss) * h);
    double resabs = std::abs(value);
    err = diff;
    if (resabs > 0 && diff > 0) {
        double scaled = std::pow(200.0 * diff / resabs, 1.5) * resabs;
        if (scaled < diff) err = scaled;
    }
}

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over [a, b], refined until the
// accumulated error estimate drops below tol + rel_tol * |integral|.
// `splits` forces initial panel boundaries (integrand kinks, oscillation
// grid); out-of-range entries are ignored.  `max_panels` caps the work;
// exceeding it throws.
template <class F>
QuadResult integrate(F&& f, double a, double b, double tol,
                     const std::vector<double>& splits = {},
                     std::size_t max_panels = 1u << 20,
                     double rel_tol = 0.0) {
    if (!(b > a)) return {0.0, 0.0, 0};
    std::vector<double> edges;
    edges.push_back(a);
    for (double s : splits)
        if (s > a && s < b) edges.push_back(s);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() > max_panels)
        throw Error("integrate: initial split list exceeds panel budget");

    std::priority_queue<detail::Panel> heap;
    std::size_t evals = 0;
    double total = 0, toterr = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        detail::Panel p{edges[i], edges[i + 1], 0, 0};
        detail::gk15(f, p.a, p.b, p.value, p.error);
        evals += 15;
        total += p.value;
        toterr += p.error;
        heap.push(p);
    }
    auto target = [&] { return tol + rel_tol * std::abs(total); };
    while (toterr > target() && heap.size() < max_panels) {
        detail::Panel worst = heap.top();
        if (worst.b - worst.a < 1e-15 * (std::abs(worst.a) + 1.0))
            break;  // panel at double resolution, refining further is noise
        heap.pop();
        total -= worst.value;
        toterr -= worst.error;
        double m = 0.5 * (worst.a + worst.b);
        for (auto [lo, hi] : {std::pair{worst.a, m}, std::pair{m, worst.b}}) {
            detail::Panel p{lo, hi, 0, 0};
            detail::gk15(f, p.a, p.b, p.value, p.error);
            evals += 15;
            total += p.value;
            toterr += p.error;
            heap.push(p);
        }
    }
    if (toterr > target() && heap.size() >= max_panels)
        throw Error("integrate: panel budget exhausted before tolerance");
    // Re-sum panels in magnitude order to shave accumulation error.
    std::vector<detail::Panel> all;
    while (!heap.empty()) { all.push_back(heap.top()); heap.pop(); }
    KahanSum s;
    for (const auto& p : all) s.add(p.value);
    return {s.value(), toterr, evals};
}

}  // namespace hgm
