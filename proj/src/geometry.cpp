#include "scatterlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scatterlab {

double sphere_volume(int n)
{
    if (n < 0) throw std::invalid_argument("sphere_volume: negative dimension");
    const double k = 0.5 * (n + 1);
    return 2.0 * std::pow(std::numbers::pi, k) / std::tgamma(k);
}

SphereContext SphereContext::make(int d)
{
    if (d < 1) throw std::invalid_argument("SphereContext: d must be >= 1");
    SphereContext ctx;
    ctx.d = d;
    ctx.vol_sphere = sphere_volume(d);
    ctx.vol_equator = sphere_volume(d - 1);
    return ctx;
}

namespace {

double euclidean_norm(const std::vector<double>& v)
{
    double s = 0.0;
    for (double a : v) s += a * a;
    return std::sqrt(s);
}

}  // namespace

Point::Point(std::vector<double> coords) : x_(std::move(coords))
{
    if (x_.size() < 2) throw std::invalid_argument("Point: need at least 2 coordinates");
    const double n = euclidean_norm(x_);
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("Point: not a unit vector (norm " + std::to_string(n) + ")");
}

Point Point::normalized(std::vector<double> coords)
{
    const double n = euclidean_norm(coords);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("Point: cannot normalize zero vector");
    for (double& a : coords) a /= n;
    return Point(std::move(coords));
}

Point Point::basis(int dim, int i)
{
    if (i < 0 || i >= dim) throw std::out_of_range("Point::basis: index out of range");
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    v[static_cast<std::size_t>(i)] = 1.0;
    return Point(std::move(v));
}

double dot(const Point& p, const Point& q)
{
    if (p.ambient_dim() != q.ambient_dim()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < p.ambient_dim(); ++i) s += p[i] * q[i];
    return s;
}

double cos_distance(const Point& p, const Point& q)
{
    const double c = dot(p, q);
    if (std::abs(c) <= 0.5) return c;
    // Near +-1 use 1 - |p-q|^2/2 or |p+q|^2/2 - 1: exact at q = p and q = -p.
    const double sgn = c > 0.0 ? -1.0 : 1.0;
    double gap = 0.0;
    for (int i = 0; i < p.ambient_dim(); ++i) {
        const double t = p[i] + sgn * q[i];
        gap += t * t;
    }
    return std::clamp(c > 0.0 ? 1.0 - 0.5 * gap : 0.5 * gap - 1.0, -1.0, 1.0);
}

double geodesic_distance(const Point& p, const Point& q)
{
    return std::acos(cos_distance(p, q));
}

Point antipode(const Point& q)
{
    std::vector<double> v = q.coords();
    for (double& a : v) a = -a;
    return Point(std::move(v));
}

bool is_antipodal(const Point& p, const Point& q, double tol)
{
    return std::numbers::pi - geodesic_distance(p, q) <= tol;
}

namespace {

// C(n, k) with overflow detection; the running product stays integral.
std::int64_t binomial(std::int64_t n, int k)
{
    if (k < 0 || n < k) return 0;
    __int128 acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * (n - k + i) / i;
        if (acc > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("multiplicity: binomial overflows int64");
    }
    return static_cast<std::int64_t>(acc);
}

}  // namespace

std::int64_t multiplicity(int d, int ell)
{
    if (d <= 0) throw std::invalid_argument("multiplicity: d must be positive");
    if (ell < 0) throw std::invalid_argument("multiplicity: ell must be nonnegative");
    return binomial(std::int64_t{ell} + d, d) - binomial(std::int64_t{ell} + d - 2, d);
}

double lambda_sq(int d, double ell)
{
    return ell * (ell + d - 1);
}

SpectralLevel spectral_level(int d, int ell)
{
    return SpectralLevel{ell, lambda_sq(d, ell), multiplicity(d, ell)};
}

}  // namespace scatterlab
