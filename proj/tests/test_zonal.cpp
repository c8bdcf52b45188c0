#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scatterlab/zonal.hpp"
#include "test_support.hpp"

using namespace scatterlab;
using std::numbers::pi;

namespace {

Point pole(int d) { return Point::basis(d + 1, d); }

Point tilted(int d, double theta)
{
    std::vector<double> v(d + 1, 0.0);
    v[0] = std::sin(theta);
    v[d] = std::cos(theta);
    return Point(v);
}

}  // namespace

TEST_CASE("zonal values")
{
    const auto c2 = SphereContext::make(2);
    const Point q = pole(2);
    CHECK(zonal_eval(c2, q, 7, q) == doctest::Approx(15.0 / (4 * pi)));
    const Point x = tilted(2, 0.9);
    CHECK(zonal_eval(c2, q, 1, x) == doctest::Approx(3.0 / (4 * pi) * std::cos(0.9)));
    for (int l : {3, 8}) {
        const double z = zonal_eval(c2, q, l, antipode(q));
        CHECK(z == doctest::Approx((l % 2 ? -1.0 : 1.0) * (2 * l + 1) / (4 * pi)));
    }
}

TEST_CASE("norms and orthogonality by 1-D quadrature")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        for (int l : {0, 1, 17, 100, 300}) {
            const double m = static_cast<double>(multiplicity(d, l));
            const int n = std::max(200, 2 * l + 20);
            const double nsq = oracle::radial_integral(
                d, [&](double s) { return std::pow(m / ctx.vol_sphere * oracle::normalized_profile(d, l, s), 2); }, n);
            CHECK(std::abs(nsq / zonal_norm_sq(ctx, l) - 1.0) <= 1e-9);
        }
        for (int l : {5, 40, 150})
            for (int lp : {6, 41, 150}) {
                const double ip = oracle::radial_integral(
                    d,
                    [&](double s) {
                        return std::sqrt(zonal_norm_sq(ctx, l) * zonal_norm_sq(ctx, lp)) *
                               oracle::normalized_profile(d, l, s) * oracle::normalized_profile(d, lp, s);
                    },
                    400);
                CHECK(std::abs(ip - (l == lp ? 1.0 : 0.0)) <= 1e-9);
            }
    }
}

TEST_CASE("reproducing property and symmetry")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const Point p = tilted(d, 0.0), q = tilted(d, 1.2);
        for (int l : {2, 25, 120}) {
            // <Z^p, Z^q> by quadrature in the angle about p: the integral over the
            // azimuth of Z^q is vol(S^{d-1}) times the average of its profile.
            const double cpq = std::cos(1.2);
            const double analytic = zonal_inner_product(ctx, p, q, l);
            const double direct = zonal_eval(ctx, q, l, p);
            CHECK(analytic == doctest::Approx(direct).epsilon(1e-12).scale(1.0));
            CHECK(zonal_eval(ctx, p, l, q) == doctest::Approx(zonal_eval(ctx, q, l, p)).epsilon(1e-12).scale(1.0));
            // Funk-Hecke: <Z^p, Z^q> = (m/vol) R_l(cpq) * <Z^p, R_l(<.,p>)> / ... reduces to Z^q(p).
            const double m = static_cast<double>(multiplicity(d, l));
            const double fh = m / ctx.vol_sphere *
                              oracle::radial_integral(
                                  d,
                                  [&](double s) {
                                      return m / ctx.vol_sphere * std::pow(oracle::normalized_profile(d, l, s), 2);
                                  },
                                  std::max(200, 2 * l + 20)) *
                              oracle::normalized_profile(d, l, cpq);
            CHECK(std::abs(fh - analytic) <= 1e-8 * std::max(1.0, std::abs(analytic)));
            CHECK(zonal_inner_product(ctx, p, q, l, true) ==
                  doctest::Approx(oracle::normalized_profile(d, l, cpq)).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("antipodal parity")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const Point q = Point::normalized(std::vector<double>(d + 1, 1.0));
        const Point mq = antipode(q);
        for (int l = 0; l <= 300; l += 13)
            for (double th : {0.3, 1.7}) {
                const Point x = tilted(d, th);
                const double a = zonal_eval(ctx, mq, l, x), b = zonal_eval(ctx, q, l, x);
                CHECK(std::abs(a - (l % 2 ? -b : b)) <= 1e-12 * zonal_norm_sq(ctx, l));
            }
    }
}

TEST_CASE("cross-center decay")
{
    for (int d : {2, 3}) {
        const auto ctx = SphereContext::make(d);
        const Point p = tilted(d, 0.0), q = tilted(d, 1.0);
        std::vector<double> ls, vs;
        for (int l = 50; l <= 800; ++l) {
            ls.push_back(l);
            vs.push_back(zonal_inner_product(ctx, p, q, l, true));
        }
        const auto [bx, by] = oracle::block_maxima(ls, vs, 25);
        const double slope = oracle::loglog_slope(bx, by);
        CHECK(std::abs(slope + 0.5 * (d - 1)) <= 0.15);
    }
}

TEST_CASE("expansions")
{
    const auto ctx = SphereContext::make(2);
    const Point q = pole(2);
    ZonalExpansion u{ctx, q, {1.0, cplx(0.0, 2.0), 0.5}};
    CHECK(u.norm_sq() == doctest::Approx(5.25));
    CHECK(inner_product(u, u).real() == doctest::Approx(5.25));
    // Conjugate-linear in the first slot.
    ZonalExpansion v{ctx, q, {cplx(0.0, 1.0)}};
    CHECK(inner_product(v, u) == cplx(0.0, -1.0));
    // Antipodal center flips odd coefficients.
    ZonalExpansion w{ctx, antipode(q), {1.0, 1.0, 1.0}};
    ZonalExpansion x{ctx, q, {1.0, 1.0, 1.0}};
    CHECK(inner_product(w, x).real() == doctest::Approx(1.0));
    // Evaluation matches the sum of normalized zonals.
    const Point y = tilted(2, 0.4);
    const cplx e = u.eval(y);
    const cplx manual = 1.0 * normalized_zonal_eval(ctx, q, 0, y) + cplx(0, 2) * normalized_zonal_eval(ctx, q, 1, y) +
                        0.5 * normalized_zonal_eval(ctx, q, 2, y);
    CHECK(std::abs(e - manual) <= 1e-13);
}

TEST_CASE("interpolation matrix and Gershgorin certification")
{
    const auto ctx = SphereContext::make(2);
    const Point a = tilted(2, 0.0), b = tilted(2, 1.1), c = Point::normalized({0.2, 0.9, -0.3});
    const auto one = build_interpolation_matrix(ctx, {a}, 9);
    CHECK(one.entries.rows() == 1);
    CHECK(one.entries(0, 0) == doctest::Approx(std::sqrt(19.0 / (4 * pi))));
    CHECK_THROWS(build_interpolation_matrix(ctx, {a, a}, 4));

    const auto m = build_interpolation_matrix(ctx, {a, b, c}, 200);
    CHECK((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(m.entries(i, i)) > m.gershgorin_radii(i));
    const auto cert = certify_invertible(m);
    CHECK(cert.invertible);
    const double true_inv = m.entries.inverse().norm();
    CHECK(cert.inverse_norm_bound > 0.0);
    CHECK(m.entries.inverse().cwiseAbs().rowwise().sum().maxCoeff() <= cert.inverse_norm_bound * (1 + 1e-12));
    CHECK(true_inv > 0.0);

    // Antipodal pair: duplicated (even l) or negated (odd l) columns, never certified.
    for (int l : {10, 11}) {
        const auto ap = build_interpolation_matrix(ctx, {a, antipode(a)}, l);
        CHECK(std::abs(ap.entries.determinant()) <= 1e-12 * ap.entries(0, 0) * ap.entries(0, 0));
        CHECK_FALSE(certify_invertible(ap).invertible);
    }

    // Slope of the inverse bound.
    std::vector<double> ls, bs;
    for (int l = 100; l <= 800; l += 25) {
        const auto cr = certify_invertible(build_interpolation_matrix(ctx, {a, b, c}, l));
        REQUIRE(cr.invertible);
        ls.push_back(l);
        bs.push_back(cr.inverse_norm_bound);
    }
    CHECK(std::abs(oracle::loglog_slope(ls, bs) + 0.5) <= 0.2);

    const int thr = gershgorin_threshold(ctx, {a, b, c}, 0, 400);
    CHECK(thr >= 0);
    for (int l = thr; l <= 400; ++l) CHECK(certify_invertible(build_interpolation_matrix(ctx, {a, b, c}, l)).invertible);
}
