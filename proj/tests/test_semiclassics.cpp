#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scatterlab/semiclassics.hpp"
#include "test_support.hpp"

using namespace scatterlab;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

Point pole(int d) { return Point::basis(d + 1, d); }

// Zonal profiles as Chebyshev series in s = cos r. K is multiplication by s and
// V_h = (h/i) D with D p = -(1 - s^2) p' + (d/2) s p.
using Cheb = std::vector<double>;

Cheb chebyshev_fit(const std::function<double(double)>& f, int n)
{
    Cheb c(n, 0.0);
    for (int j = 0; j < n; ++j) {
        const double th = pi * (j + 0.5) / n;
        const double fx = f(std::cos(th));
        for (int k = 0; k < n; ++k) c[k] += 2.0 / n * fx * std::cos(k * th);
    }
    c[0] *= 0.5;
    return c;
}

Cheb times_s(const Cheb& c)
{
    Cheb out(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k == 0) {
            out[1] += c[0];
            continue;
        }
        out[k + 1] += 0.5 * c[k];
        out[k - 1] += 0.5 * c[k];
    }
    return out;
}

Cheb derivative(const Cheb& c)
{
    const int n = static_cast<int>(c.size());
    Cheb b(n + 1, 0.0);
    for (int k = n - 1; k >= 1; --k) b[k - 1] = (k + 1 < n + 1 ? b[k + 1] : 0.0) + 2.0 * k * c[k];
    b[0] *= 0.5;
    b.resize(std::max(1, n - 1));
    return b;
}

Cheb add(Cheb a, const Cheb& b, double s)
{
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t k = 0; k < b.size(); ++k) a[k] += s * b[k];
    return a;
}

Cheb apply_d(int d, const Cheb& c)
{
    const Cheb dc = derivative(c);
    Cheb out = add(Cheb{}, dc, -1.0);
    out = add(out, times_s(times_s(dc)), 1.0);
    return add(out, times_s(c), 0.5 * d);
}

double clenshaw(const Cheb& c, double x)
{
    double b1 = 0.0, b2 = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const double t = 2.0 * x * b1 - b2 + c[k];
        b2 = b1;
        b1 = t;
    }
    return x * b1 - b2 + c[0];
}

double zonal_profile(int d, int l, double s)
{
    const double m = d == 2 ? 2.0 * l + 1 : (l + 1.0) * (l + 1.0);
    const double vol = d == 2 ? 4 * pi : 2 * pi * pi;
    return std::sqrt(m / vol) * oracle::normalized_profile(d, l, s);
}

cplx word_oracle(int d, int lu, const std::string& word, double h, int lv)
{
    Cheb c = chebyshev_fit([&](double s) { return zonal_profile(d, lv, s); }, lv + 8);
    cplx factor = 1.0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it == 'K') {
            c = times_s(c);
        } else {
            c = apply_d(d, c);
            factor *= -I * h;
        }
    }
    const double v = oracle::radial_integral(
        d, [&](double s) { return zonal_profile(d, lu, s) * clenshaw(c, s); }, 2 * (lu + lv) + 80);
    return factor * v;
}

std::vector<std::string> words_up_to(int n)
{
    std::vector<std::string> out{""};
    std::vector<std::string> layer{""};
    for (int k = 1; k <= n; ++k) {
        std::vector<std::string> next;
        for (const auto& w : layer)
            for (char c : {'K', 'V'}) next.push_back(w + c);
        out.insert(out.end(), next.begin(), next.end());
        layer = next;
    }
    return out;
}

ZonalExpansion unit(const SphereContext& ctx, const Point& q, int l, int lmax)
{
    std::vector<cplx> c(static_cast<std::size_t>(lmax) + 1, 0.0);
    c[l] = 1.0;
    return {ctx, q, c};
}

// Average of cos^a t sin^b t over a full period.
double torus_moment(int a, int b)
{
    const int n = 64;
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * pi * i / n;
        s += std::pow(std::cos(t), a) * std::pow(std::sin(t), b) / n;
    }
    return s;
}

}  // namespace

TEST_CASE("banded operators")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const auto k = multiplication_matrix(ctx, 200);
        const auto v = momentum_matrix(ctx, 0.01, 200);
        CHECK(k.hermiticity_defect() <= 1e-15);
        CHECK(v.hermiticity_defect() <= 1e-15);
        CHECK(k.entry(5, 5) == cplx(0.0));
        CHECK(std::abs(k.entry(200, 199) - 0.5) <= 2.0 / 200);
        if (d == 3)
            for (int l = 0; l < 50; ++l) CHECK(cos_ladder_coeff(ctx, l) == doctest::Approx(0.5).epsilon(1e-15));
        // Banded product agrees with repeated letter application away from the cutoff.
        const auto kv = multiply(k, v);
        std::vector<cplx> x(101, 0.0);
        x[60] = 1.0;
        x[61] = cplx(0.0, 2.0);
        const auto y = apply_word(ctx, "KV", 0.01, x);
        const auto z = kv.apply([&] {
            auto w = x;
            w.resize(201, 0.0);
            return w;
        }());
        for (int l = 0; l <= 100; ++l) CHECK(std::abs(y[l] - z[l]) <= 1e-14);
    }
    CHECK_THROWS(momentum_matrix(SphereContext::make(2), 0.0, 10));
}

TEST_CASE("word matrix elements against the Chebyshev oracle")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const int l = 40;
        const double h = 1.0 / std::sqrt(l * (l + d - 1.0));
        for (const auto& w : words_up_to(4)) {
            for (int lv = l - 2; lv <= l + 2; ++lv) {
                const int lu_lo = std::max(0, lv - static_cast<int>(w.size()));
                for (int lu = lu_lo; lu <= lv + static_cast<int>(w.size()); ++lu) {
                    const cplx got = matrix_element(unit(ctx, pole(d), lu, 60), w, h, unit(ctx, pole(d), lv, 60));
                    const cplx want = word_oracle(d, lu, w, h, lv);
                    INFO("d=" << d << " word=" << w << " lu=" << lu << " lv=" << lv);
                    CHECK(std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)));
                }
            }
        }
    }
}

TEST_CASE("identity word and center mismatch")
{
    const auto ctx = SphereContext::make(2);
    const ZonalExpansion u{ctx, pole(2), {0.5, cplx(0.0, 1.0), 2.0}};
    CHECK(std::abs(matrix_element(u, "", 0.1, u) - u.norm_sq()) <= 1e-15);
    const ZonalExpansion v{ctx, Point::basis(3, 0), {1.0}};
    CHECK_THROWS(matrix_element(u, "K", 0.1, v));
}

TEST_CASE("weak limit of words on z_l")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        for (const auto& w : words_up_to(4)) {
            int a = 0, b = 0;
            for (char c : w) (c == 'K' ? a : b)++;
            const double limit = torus_moment(a, b);
            std::vector<double> ls, errs;
            for (int l : {100, 200, 400, 800, 1600}) {
                const double h = 1.0 / std::sqrt(l * (l + d - 1.0));
                const auto z = unit(ctx, pole(d), l, l + 4);
                const double err = std::abs(matrix_element(z, w, h, z) - limit);
                INFO("d=" << d << " word=" << w << " l=" << l);
                CHECK(err * l <= 5.0);
                ls.push_back(l);
                errs.push_back(err);
            }
            if (*std::min_element(errs.begin(), errs.end()) > 1e-12) CHECK(oracle::loglog_slope(ls, errs) <= -0.85);
        }
    }
}

TEST_CASE("measure integrals")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const Point q = pole(d);
        const MeasureSpec single{ctx, {q}, {1.0}};
        CHECK(std::abs(measure_integral(single, q, "one") - 1.0) <= 1e-12);
        CHECK(std::abs(measure_integral(single, q, "kappa")) <= 1e-14);
        CHECK(std::abs(measure_integral(single, q, "varsigma")) <= 1e-14);
        CHECK(std::abs(measure_integral(single, q, "kappa2") - 0.5) <= 1e-12);

        const MeasureSpec plus{ctx, {q, antipode(q)}, {2.0, 0.0}};
        const MeasureSpec minus{ctx, {q, antipode(q)}, {0.0, 2.0}};
        CHECK(std::abs(measure_integral(plus, q, "varsigma") - 2.0 / pi) <= 1e-12);
        CHECK(std::abs(measure_integral(minus, q, "varsigma") + 2.0 / pi) <= 1e-12);
        CHECK(std::abs(measure_integral(plus, q, "kappa2") - 0.5) <= 1e-12);

        // Half flow-outs.
        auto vs = [](double, double s) { return cplx(s); };
        auto k2 = [](double k, double) { return cplx(k * k); };
        CHECK(std::abs(flowout_integral(ctx, q, q, vs, true) - 1.0 / pi) <= 1e-12);
        CHECK(std::abs(flowout_integral(ctx, antipode(q), q, vs, true) + 1.0 / pi) <= 1e-12);
        CHECK(std::abs(flowout_integral(ctx, q, q, k2, true) - 0.25) <= 1e-12);

        // Cross-center: mean of cos^2 psi over the direction sphere S^{d-1} is 1/d.
        const Point c = Point::normalized([&] {
            std::vector<double> v(d + 1, 0.0);
            v[0] = 0.6;
            v[d] = 0.8;
            return v;
        }());
        const double cd = 0.8, sd2 = 0.36;
        CHECK(std::abs(flowout_integral(ctx, q, c, k2, false) - (0.5 * cd * cd + sd2 / (2.0 * d))) <= 1e-10);
        CHECK(std::abs(flowout_integral(ctx, q, c, k2, true) - (cd * cd + sd2 / d) / 4.0) <= 1e-10);
        CHECK(std::abs(flowout_integral(ctx, q, c, [](double k, double) { return cplx(k); }, false)) <= 1e-12);

        // Witness identity for random weights on the constraint segment.
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> u(0.0, 2.0);
        for (int i = 0; i < 10; ++i) {
            const double mp = u(rng);
            const MeasureSpec m{ctx, {q, antipode(q)}, {mp, 2.0 - mp}};
            CHECK(std::abs(measure_integral(m, q, "varsigma") - (2.0 * mp - 2.0) / pi) <= 1e-12);
            CHECK(std::abs(m.total_mass() - 1.0) <= 1e-12);
        }

        CHECK_THROWS(MeasureSpec{ctx, {q}, {0.5}}.validate());
        CHECK_THROWS(MeasureSpec{ctx, {q, antipode(q)}, {3.0, -1.0}}.validate());
        CHECK_THROWS(measure_integral(MeasureSpec{ctx, {q}, {0.7}}, q, "one"));
    }
}

TEST_CASE("Fourier profiles")
{
    ScenarioClassification c;
    c.scenario = 1;
    c.sigma = 0.5;
    c.beta_q = 1.0;
    c.rho = 1;
    const auto g = fourier_profile(c);
    for (double t : {0.3, 1.0, 2.5, 3.5, 5.0}) CHECK(std::abs(std::norm(g.eval(t)) - 1.0) <= 1e-12);

    const auto [bq, bmq] = choose_beta_for_weights(0.5, 1, 2.0, 0.0);
    CHECK(std::abs(bmq / bq - std::exp(-I * pi / 2.0)) <= 1e-12);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0), sg(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        ScenarioClassification r;
        r.scenario = 1;
        r.sigma = sg(rng);
        r.rho = i % 2 ? 1 : -1;
        r.beta_q = cplx(u(rng), u(rng));
        r.beta_mq = cplx(u(rng), u(rng));
        const auto p = fourier_profile(r);
        const int n = 4000;
        double mass = 0.0;
        for (int k = 0; k < n; ++k) mass += std::norm(p.eval(2 * pi * (k + 0.5) / n)) * 2 * pi / n;
        CHECK(std::abs(mass - 2 * pi) <= 1e-10);
        CHECK(std::abs(std::norm(p.eval(1.0)) - p.m_plus) <= 1e-10);
        CHECK(std::abs(std::norm(p.eval(4.0)) - p.m_minus) <= 1e-10);
        const auto [wp, wm] = scenario1_weights(r.sigma, r.beta_q / std::sqrt(std::norm(r.beta_q) + std::norm(r.beta_mq)),
                                                r.beta_mq / std::sqrt(std::norm(r.beta_q) + std::norm(r.beta_mq)), r.rho);
        CHECK(std::abs(wp - p.m_plus) <= 1e-10);
        CHECK(std::abs(wm - p.m_minus) <= 1e-10);
    }

    ScenarioClassification two;
    two.scenario = 2;
    const auto inv = fourier_profile(two);
    CHECK(inv.m_plus == 1.0);
    CHECK(inv.m_minus == 1.0);
}

TEST_CASE("partial sums and Carleson decrease")
{
    ScenarioClassification c;
    c.scenario = 1;
    c.sigma = 0.5;
    c.beta_q = 1.0;
    c.rho = 1;
    const auto g = fourier_profile(c);
    CHECK(std::abs(g.partial_sum(pi / 2, 10000) - g.eval(pi / 2)) <= 1e-3);
    const auto rows = carleson_check(c, {16, 64, 256});
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].sup_error < rows[0].sup_error);
    CHECK(rows[2].sup_error < rows[1].sup_error);
}

TEST_CASE("momentum witness")
{
    const auto ctx = SphereContext::make(2);
    const auto pt = SemiclassicalPoint::from_ell_sigma(2, 500, 0.5);
    const auto [bq, bmq] = choose_beta_for_weights(0.5, pt.rho, 2.0, 0.0);
    const auto g = build_greens(GreensSpec::pair(ctx, pole(2), bq, bmq, pt));
    CHECK(std::abs(momentum_witness(g) / (2.0 / pi) - 1.0) <= 0.05);
    const auto g0 = build_greens(GreensSpec::pair(ctx, pole(2), 1.0, 0.0, pt));
    CHECK(std::abs(momentum_witness(g0)) <= 0.02);
}
