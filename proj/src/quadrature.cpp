#include "scatterlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace scatterlab {

namespace {

// Orthonormal recurrence for the Gegenbauer weight: x p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
double recurrence_b(double lambda, int k)
{
    return std::sqrt(k * (k + 2.0 * lambda - 1.0) / (4.0 * (k + lambda) * (k + lambda - 1.0)));
}

QuadratureRule build_gauss_gegenbauer(double lambda, int n)
{
    const double mu0 = std::sqrt(std::numbers::pi) * std::exp(std::lgamma(lambda + 0.5) - std::lgamma(lambda + 1.0));
    const double p0 = 1.0 / std::sqrt(mu0);
    std::vector<double> b(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) b[k] = recurrence_b(lambda, k);

    auto eval = [&](double x, double& pn, double& dpn) {
        double pm = 0.0, p = p0, dpm = 0.0, dp = 0.0;
        for (int k = 0; k < n; ++k) {
            const double pnext = (x * p - b[k] * pm) / b[k + 1];
            const double dnext = (p + x * dp - b[k] * dpm) / b[k + 1];
            pm = p;
            p = pnext;
            dpm = dp;
            dp = dnext;
        }
        pn = p;
        dpn = dp;
    };

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int j = 1; j <= half; ++j) {
        // Zeros are symmetric; start from the largest.
        double x = std::cos((0.5 * lambda * std::numbers::pi + (j - 0.5) * std::numbers::pi) / (n + lambda));
        for (int it = 0; it < 100; ++it) {
            double pn, dpn;
            eval(x, pn, dpn);
            const double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        if (n % 2 == 1 && j == half) x = 0.0;
        double sum = 0.0, pm = 0.0, p = p0;
        for (int k = 0; k < n; ++k) {
            sum += p * p;
            const double pnext = (x * p - b[k] * pm) / b[k + 1];
            pm = p;
            p = pnext;
        }
        const double w = 1.0 / sum;
        rule.nodes[j - 1] = x;
        rule.weights[j - 1] = w;
        rule.nodes[n - j] = -x;
        rule.weights[n - j] = w;
    }
    for (int i = 1; i < n; ++i)
        if (!(rule.nodes[i] < rule.nodes[i - 1]))
            throw std::runtime_error("gauss_gegenbauer: Newton iteration failed to separate nodes");
    return rule;
}

}  // namespace

const QuadratureRule& gauss_gegenbauer(double lambda, int n)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("gauss_gegenbauer: lambda must be positive");
    if (n < 1) throw std::invalid_argument("gauss_gegenbauer: need at least one node");
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::unique_ptr<QuadratureRule>> cache;
    const auto key = std::make_pair(lambda, n);
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto rule = std::make_unique<QuadratureRule>(build_gauss_gegenbauer(lambda, n));
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, std::move(rule));
    return *it->second;
}

QuadratureRule gauss_legendre(int n, double a, double b)
{
    const QuadratureRule& ref = gauss_gegenbauer(0.5, n);
    QuadratureRule out;
    out.nodes.resize(ref.size());
    out.weights.resize(ref.size());
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

QuadratureRule periodic_trapezoid(int n, double period, double a)
{
    if (n < 1) throw std::invalid_argument("periodic_trapezoid: need at least one node");
    QuadratureRule out;
    out.nodes.resize(static_cast<std::size_t>(n));
    out.weights.assign(static_cast<std::size_t>(n), period / n);
    for (int i = 0; i < n; ++i) out.nodes[i] = a + period * i / n;
    return out;
}

QuadratureRule direction_cosine_rule(int m, int n)
{
    if (m < 1) throw std::invalid_argument("direction_cosine_rule: sphere dimension must be >= 1");
    QuadratureRule out;
    if (m == 1) {
        const QuadratureRule t = periodic_trapezoid(n, 2.0 * std::numbers::pi);
        for (std::size_t i = 0; i < t.size(); ++i) {
            out.nodes.push_back(std::cos(t.nodes[i]));
            out.weights.push_back(1.0 / n);
        }
        return out;
    }
    // density of u on S^m is proportional to (1-u^2)^((m-2)/2)
    out = gauss_gegenbauer(0.5 * (m - 1), n);
    double total = 0.0;
    for (double w : out.weights) total += w;
    for (double& w : out.weights) w /= total;
    return out;
}

double integrate_radial(const SphereContext& ctx, const std::function<double(double)>& f, int degree)
{
    const int n = degree / 2 + 1;
    const QuadratureRule& r = gauss_gegenbauer(ctx.alpha(), n);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
    return ctx.vol_equator * s;
}

double integrate_biradial(const SphereContext& ctx, double cos_pq,
                          const std::function<double(double, double)>& f, int degree)
{
    const int ns = degree / 2 + 1;
    const int nu = ctx.d == 2 ? degree + 1 : degree / 2 + 1;
    const QuadratureRule& rs = gauss_gegenbauer(ctx.alpha(), ns);
    const QuadratureRule ru = direction_cosine_rule(ctx.d - 1, nu);
    const double sin_pq = std::sqrt(std::max(0.0, 1.0 - cos_pq * cos_pq));
    double total = 0.0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const double s = rs.nodes[i];
        const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
        double inner = 0.0;
        for (std::size_t j = 0; j < ru.size(); ++j)
            inner += ru.weights[j] * f(s, std::clamp(s * cos_pq + c * sin_pq * ru.nodes[j], -1.0, 1.0));
        total += rs.weights[i] * inner;
    }
    return ctx.vol_equator * total;
}

SpherePointRule sphere_rule(int d, int degree)
{
    SpherePointRule out;
    const int m = degree + 1;
    const double two_pi = 2.0 * std::numbers::pi;
    if (d == 2) {
        const QuadratureRule z = gauss_legendre(degree / 2 + 1);
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double c = std::sqrt(std::max(0.0, 1.0 - z.nodes[i] * z.nodes[i]));
            for (int k = 0; k < m; ++k) {
                const double phi = two_pi * k / m;
                out.points.push_back({c * std::cos(phi), c * std::sin(phi), z.nodes[i]});
                out.weights.push_back(z.weights[i] * two_pi / m);
            }
        }
        return out;
    }
    if (d == 3) {
        const QuadratureRule t = gauss_legendre(degree / 4 + 2, 0.0, 1.0);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double a = std::sqrt(t.nodes[i]), b = std::sqrt(1.0 - t.nodes[i]);
            for (int k1 = 0; k1 < m; ++k1) {
                const double p1 = two_pi * k1 / m;
                for (int k2 = 0; k2 < m; ++k2) {
                    const double p2 = two_pi * k2 / m;
                    out.points.push_back({a * std::cos(p1), a * std::sin(p1), b * std::cos(p2), b * std::sin(p2)});
                    out.weights.push_back(0.5 * t.weights[i] * (two_pi / m) * (two_pi / m));
                }
            }
        }
        return out;
    }
    throw std::invalid_argument("sphere_rule: only d = 2 and d = 3 are supported");
}

}  // namespace scatterlab
