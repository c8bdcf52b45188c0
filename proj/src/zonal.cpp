#include "scatterlab/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scatterlab/specfun.hpp"

namespace scatterlab {

double zonal_norm_sq(const SphereContext& ctx, int ell)
{
    return static_cast<double>(multiplicity(ctx.d, ell)) / ctx.vol_sphere;
}

double zonal_eval(const SphereContext& ctx, const Point& center, int ell, const Point& x)
{
    return zonal_norm_sq(ctx, ell) * gegenbauer_normalized(ctx.alpha(), ell, cos_distance(x, center));
}

double normalized_zonal_eval(const SphereContext& ctx, const Point& center, int ell, const Point& x)
{
    return std::sqrt(zonal_norm_sq(ctx, ell)) * gegenbauer_normalized(ctx.alpha(), ell, cos_distance(x, center));
}

namespace {

// R_l(<p,q>), with the antipodal case pinned to its exact parity value.
double cross_value(const SphereContext& ctx, const Point& p, const Point& q, int ell)
{
    if (is_antipodal(p, q)) return ell % 2 == 0 ? 1.0 : -1.0;
    return gegenbauer_normalized(ctx.alpha(), ell, cos_distance(p, q));
}

}  // namespace

double zonal_inner_product(const SphereContext& ctx, const Point& p, const Point& q, int ell, bool normalized)
{
    const double r = cross_value(ctx, p, q, ell);
    return normalized ? r : zonal_norm_sq(ctx, ell) * r;
}

double ZonalExpansion::norm_sq() const
{
    double s = 0.0;
    for (const cplx& c : coeffs) s += std::norm(c);
    return s;
}

double ZonalExpansion::norm() const { return std::sqrt(norm_sq()); }

cplx ZonalExpansion::eval(const Point& x) const
{
    if (coeffs.empty()) return 0.0;
    const auto r = gegenbauer_normalized_all(ctx.alpha(), ell_max(), cos_distance(x, center));
    cplx s = 0.0;
    for (int l = 0; l <= ell_max(); ++l) s += coeffs[l] * std::sqrt(zonal_norm_sq(ctx, l)) * r[l];
    return s;
}

cplx inner_product(const ZonalExpansion& u, const ZonalExpansion& v)
{
    if (u.ctx.d != v.ctx.d) throw std::invalid_argument("inner_product: dimension mismatch");
    const int n = std::min(u.ell_max(), v.ell_max());
    if (n < 0) return 0.0;
    const bool same = dot(u.center, v.center) >= 1.0 - 1e-15;
    const bool anti = !same && is_antipodal(u.center, v.center);
    std::vector<double> r;
    if (!same && !anti) r = gegenbauer_normalized_all(u.ctx.alpha(), n, cos_distance(u.center, v.center));
    cplx s = 0.0;
    for (int l = 0; l <= n; ++l) {
        const double w = same ? 1.0 : anti ? (l % 2 == 0 ? 1.0 : -1.0) : r[l];
        s += std::conj(u.coeffs[l]) * v.coeffs[l] * w;
    }
    return s;
}

InterpolationMatrix build_interpolation_matrix(const SphereContext& ctx, const std::vector<Point>& scatterers,
                                               int ell)
{
    const int n = static_cast<int>(scatterers.size());
    if (n == 0) throw std::invalid_argument("build_interpolation_matrix: empty scatterer set");
    if (ell < 0) throw std::invalid_argument("build_interpolation_matrix: negative degree");
    for (int i = 0; i < n; ++i) {
        if (scatterers[i].ambient_dim() != ctx.d + 1)
            throw std::invalid_argument("build_interpolation_matrix: point dimension mismatch");
        for (int j = 0; j < i; ++j)
            if (geodesic_distance(scatterers[i], scatterers[j]) < 1e-12)
                throw std::invalid_argument("build_interpolation_matrix: duplicate scatterers");
    }
    InterpolationMatrix m;
    m.ell = ell;
    m.scatterers = scatterers;
    m.entries.resize(n, n);
    const double diag = std::sqrt(zonal_norm_sq(ctx, ell));
    for (int i = 0; i < n; ++i) {
        m.entries(i, i) = diag;
        for (int j = 0; j < i; ++j) {
            const double v = diag * cross_value(ctx, scatterers[i], scatterers[j], ell);
            m.entries(i, j) = v;
            m.entries(j, i) = v;
        }
    }
    m.gershgorin_radii.resize(n);
    for (int i = 0; i < n; ++i) m.gershgorin_radii(i) = m.entries.row(i).cwiseAbs().sum() - std::abs(m.entries(i, i));
    return m;
}

GershgorinCertificate certify_invertible(const InterpolationMatrix& m)
{
    GershgorinCertificate cert;
    const int n = static_cast<int>(m.entries.rows());
    double margin = std::abs(m.entries(0, 0)) - m.gershgorin_radii(0);
    for (int i = 1; i < n; ++i) margin = std::min(margin, std::abs(m.entries(i, i)) - m.gershgorin_radii(i));
    cert.min_margin = margin;
    cert.invertible = margin > 0.0;
    if (cert.invertible) cert.inverse_norm_bound = 1.0 / margin;
    return cert;
}

int gershgorin_threshold(const SphereContext& ctx, const std::vector<Point>& scatterers, int ell_lo, int ell_hi)
{
    if (ell_lo > ell_hi) throw std::invalid_argument("gershgorin_threshold: empty range");
    int threshold = -1;
    for (int l = ell_hi; l >= ell_lo; --l) {
        if (!certify_invertible(build_interpolation_matrix(ctx, scatterers, l)).invertible) break;
        threshold = l;
    }
    return threshold;
}

}  // namespace scatterlab
