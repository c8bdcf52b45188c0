#pragma once
// Test-side oracles, written independently of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes/weights on [a, b]: Newton on P_n in long double.
inline std::pair<std::vector<double>, std::vector<double>> legendre_rule(int n, double a, double b)
{
    std::vector<double> x(n), w(n);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < n; ++i) {
        long double z = std::cos(pi * (i + 0.75L) / (n + 0.5L)), dp = 0;
        for (int it = 0; it < 100; ++it) {
            long double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1;
            dp = n * (z * p1 - p0) / (z * z - 1);
            const long double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        x[i] = static_cast<double>(0.5L * (b - a) * z + 0.5L * (b + a));
        w[i] = static_cast<double>((b - a) / ((1 - z * z) * dp * dp));
    }
    return {x, w};
}

/// vol(S^{d-1}) \int_0^pi f(cos r) sin^{d-1} r dr.
inline double radial_integral(int d, const std::function<double(double)>& f, int n)
{
    const auto [x, w] = legendre_rule(n, 0.0, std::numbers::pi);
    const double vol_eq = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(std::cos(x[i])) * std::pow(std::sin(x[i]), d - 1);
    return vol_eq * s;
}

/// Normalized Gegenbauer R_l(s) = C_l(s)/C_l(1) from the Legendre/Chebyshev closed forms
/// (d = 2: Legendre by the standard recurrence; d = 3: sin((l+1)r)/((l+1) sin r)).
inline double normalized_profile(int d, int l, double s)
{
    if (d == 3) {
        const double r = std::acos(std::clamp(s, -1.0, 1.0));
        if (std::sin(r) < 1e-12) return (s > 0 || l % 2 == 0) ? 1.0 : -1.0;
        return std::sin((l + 1) * r) / ((l + 1) * std::sin(r));
    }
    long double p0 = 1, p1 = s;
    if (l == 0) return 1.0;
    for (int k = 2; k <= l; ++k) {
        const long double p2 = ((2 * k - 1) * s * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return static_cast<double>(p1);
}

/// Ordinary least squares slope of log y on log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    }
    return sxy / sxx;
}

/// Envelope of an oscillating sequence: per block of consecutive samples, the
/// sample with the largest |y|. Returns (x, |y|) at the block maxima.
inline std::pair<std::vector<double>, std::vector<double>> block_maxima(const std::vector<double>& x,
                                                                          const std::vector<double>& y,
                                                                          std::size_t block)
{
    std::vector<double> bx, by;
    for (std::size_t s = 0; s + block <= x.size(); s += block) {
        std::size_t best = s;
        for (std::size_t i = s; i < s + block; ++i)
            if (std::abs(y[i]) > std::abs(y[best])) best = i;
        bx.push_back(x[best]);
        by.push_back(std::abs(y[best]));
    }
    return {bx, by};
}

}  // namespace oracle
