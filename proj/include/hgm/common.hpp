#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgm {

// Thrown when an operation's numerical contract cannot be met (budget
// exhausted, tolerance unreachable, precondition violated at runtime).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// The quantity being computed is provably or observably infinite /
// non-convergent.  `scale` carries the magnitude reached before giving up,
// so callers can report how fast things blow up.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& msg, double scale_)
        : Error(msg), scale(scale_) {}
    double scale;
};

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Compensated accumulator.  Neumaier's variant of Kahan summation: also
// correct when the next term is larger than the running sum.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = a; return v; }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * double(i) / double(n - 1);
    return v;
}

// n points from a to b, equally spaced in log; a, b > 0.
inline std::vector<double> geomspace(double a, double b, std::size_t n) {
    std::vector<double> v = linspace(std::log(a), std::log(b), n);
    for (double& x : v) x = std::exp(x);
    return v;
}

// Logarithmic evaluation grid: `per_decade` points per factor of 10,
// endpoints included.  The default analysis window is [1e-3, 1e6].
inline std::vector<double> log_grid(double lo, double hi, std::size_t per_decade = 64) {
    double decades = std::log10(hi / lo);
    std::size_t n = std::size_t(std::ceil(decades * double(per_decade))) + 1;
    return geomspace(lo, hi, n < 2 ? 2 : n);
}

struct MaxResult {
    double x;      // argmax
    double value;  // f(x)
};

// Golden-section refinement of a local maximum bracketed by [a, b].
// 80 iterations shrink the bracket by ~1e-16, past double resolution.
template <class F>
MaxResult golden_max(F&& f, double a, double b, int iters = 80) {
    const double invphi = 0.6180339887498948482;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 0.0; ++i) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

// Scan a grid for the global maximum of f, then polish the best bracket.
template <class F>
MaxResult grid_max(F&& f, const std::vector<double>& grid) {
    if (grid.size() < 2) throw Error("grid_max: need at least 2 points");
    std::size_t best = 0;
    double fbest = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double fi = f(grid[i]);
        if (fi > fbest) { fbest = fi; best = i; }
    }
    std::size_t lo = best == 0 ? 0 : best - 1;
    std::size_t hi = best + 1 < grid.size() ? best + 1 : best;
    MaxResult r = golden_max(f, grid[lo], grid[hi]);
    if (fbest > r.value) return {grid[best], fbest};
    return r;
}

struct LineFit {
    double slope;
    double intercept;
    double stderr_slope;  // standard error of the slope estimate
};

// Ordinary least squares y ~ slope*x + intercept.
inline LineFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t n = x.size();
    if (n != y.size() || n < 3) throw Error("linear_fit: need >= 3 matched points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n); my /= double(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw Error("linear_fit: degenerate abscissae");
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - slope * x[i] - intercept;
        rss += r * r;
    }
    double se = std::sqrt(rss / double(n - 2) / sxx);
    return {slope, intercept, se};
}

}  // namespace hgm
