#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatterlab/quadrature.hpp"

using namespace scatterlab;
using std::numbers::pi;

namespace {

// \int_{-1}^1 x^{2k} (1-x^2)^{lambda-1/2} dx = B(k+1/2, lambda+1/2).
double gegenbauer_moment(double lambda, int k)
{
    return std::exp(std::lgamma(k + 0.5) + std::lgamma(lambda + 0.5) - std::lgamma(k + lambda + 1.0));
}

// \int_{S^d} x_0^{2a} x_1^{2b} from the Gaussian-integral identity.
double sphere_monomial(int d, int a, int b)
{
    const double n = d + 1;
    const double lg = std::lgamma(a + 0.5) + std::lgamma(b + 0.5) + (n - 2) * std::lgamma(0.5) -
                      std::lgamma(a + b + n / 2);
    return 2.0 * std::exp(lg);
}

}  // namespace

TEST_CASE("Gauss-Gegenbauer is exact to degree 2n-1")
{
    for (double lambda : {0.5, 1.0, 1.5, 0.25})
        for (int n : {1, 5, 17}) {
            const auto& r = gauss_gegenbauer(lambda, n);
            REQUIRE(r.size() == static_cast<std::size_t>(n));
            for (int k = 0; 2 * k <= 2 * n - 1; ++k) {
                double s = 0.0, odd = 0.0;
                for (std::size_t i = 0; i < r.size(); ++i) {
                    s += r.weights[i] * std::pow(r.nodes[i], 2 * k);
                    odd += r.weights[i] * std::pow(r.nodes[i], 2 * k + 1);
                }
                CHECK(s == doctest::Approx(gegenbauer_moment(lambda, k)).epsilon(1e-13));
                if (2 * k + 1 <= 2 * n - 1) CHECK(std::abs(odd) <= 1e-14);
            }
        }
}

TEST_CASE("Gauss-Gegenbauer at large n")
{
    for (double lambda : {0.5, 1.0}) {
        const auto& r = gauss_gegenbauer(lambda, 3000);
        double s = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            s += r.weights[i];
            CHECK(r.weights[i] > 0.0);
            if (i > 0) CHECK(r.nodes[i] < r.nodes[i - 1]);
        }
        CHECK(s == doctest::Approx(gegenbauer_moment(lambda, 0)).epsilon(1e-12));
        double m2 = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
        CHECK(m2 == doctest::Approx(gegenbauer_moment(lambda, 1)).epsilon(1e-12));
    }
    // Cached rules are returned by reference.
    CHECK(&gauss_gegenbauer(1.0, 3000) == &gauss_gegenbauer(1.0, 3000));
}

TEST_CASE("Gauss-Legendre and trapezoid")
{
    const auto g = gauss_legendre(10, 0.0, 2.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 19);
    CHECK(s == doctest::Approx(std::pow(2.0, 20) / 20).epsilon(1e-13));
    const auto t = periodic_trapezoid(16, 2 * pi);
    double c = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) c += t.weights[i] * std::pow(std::cos(t.nodes[i]), 14);
    // \int cos^14 = 2 pi C(14,7)/2^14
    CHECK(c == doctest::Approx(2 * pi * 3432.0 / 16384.0).epsilon(1e-13));
}

TEST_CASE("direction cosine law")
{
    for (int m : {1, 2, 3}) {
        const auto r = direction_cosine_rule(m, 40);
        double w = 0, u2 = 0, u4 = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            w += r.weights[i];
            u2 += r.weights[i] * std::pow(r.nodes[i], 2);
            u4 += r.weights[i] * std::pow(r.nodes[i], 4);
        }
        CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(u2 == doctest::Approx(1.0 / (m + 1)).epsilon(1e-13));
        CHECK(u4 == doctest::Approx(3.0 / ((m + 1) * (m + 3))).epsilon(1e-13));
    }
}

TEST_CASE("radial, biradial and product sphere rules")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        CHECK(integrate_radial(ctx, [](double) { return 1.0; }, 0) == doctest::Approx(ctx.vol_sphere));
        CHECK(integrate_radial(ctx, [](double s) { return s * s; }, 2) ==
              doctest::Approx(sphere_monomial(d, 1, 0)).epsilon(1e-13));
        CHECK(integrate_radial(ctx, [](double s) { return std::pow(s, 8); }, 8) ==
              doctest::Approx(sphere_monomial(d, 4, 0)).epsilon(1e-13));
        const double c = 0.37;
        // \int <x,q><x,p> = c vol/(d+1)
        CHECK(integrate_biradial(ctx, c, [](double s, double t) { return s * t; }, 2) ==
              doctest::Approx(c * ctx.vol_sphere / (d + 1)).epsilon(1e-13));
        CHECK(integrate_biradial(ctx, 1.0, [](double s, double t) { return s * s * t * t; }, 4) ==
              doctest::Approx(sphere_monomial(d, 2, 0)).epsilon(1e-12));

        const auto rule = sphere_rule(d, 8);
        double total = 0, a = 0, b = 0;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
            const auto& x = rule.points[i];
            total += rule.weights[i];
            a += rule.weights[i] * std::pow(x[0], 4) * std::pow(x[1], 2);
            b += rule.weights[i] * std::pow(x[d], 8);
        }
        CHECK(total == doctest::Approx(ctx.vol_sphere).epsilon(1e-13));
        CHECK(a == doctest::Approx(sphere_monomial(d, 2, 1)).epsilon(1e-12));
        CHECK(b == doctest::Approx(sphere_monomial(d, 4, 0)).epsilon(1e-12));
    }
}
