#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "scatterlab/geometry.hpp"

namespace scatterlab {

using cplx = std::complex<double>;

/// ||Z_l^q||^2 = m_l / vol(S^d).
double zonal_norm_sq(const SphereContext& ctx, int ell);

/// Z_l^q(x) = (m_l/vol) C_l(cos r)/C_l(1).
double zonal_eval(const SphereContext& ctx, const Point& center, int ell, const Point& x);
/// z_l^q(x) = Z_l^q(x) / ||Z_l^q||.
double normalized_zonal_eval(const SphereContext& ctx, const Point& center, int ell, const Point& x);

/// <Z_l^p, Z_l^q> = Z_l^q(p) by the reproducing property. With `normalized`
/// the result is <z_l^p, z_l^q> = C_l(<p,q>)/C_l(1).
double zonal_inner_product(const SphereContext& ctx, const Point& p, const Point& q, int ell,
                           bool normalized = false);

/// Complex coefficients over the normalized zonal basis z_0^q, ..., z_L^q.
struct ZonalExpansion {
    SphereContext ctx;
    Point center;
    std::vector<cplx> coeffs;

    int ell_max() const { return static_cast<int>(coeffs.size()) - 1; }
    double norm_sq() const;
    double norm() const;
    cplx eval(const Point& x) const;
};

/// <u, v>, conjugate-linear in u. Different centers go through C_l(<p,q>)/C_l(1).
cplx inner_product(const ZonalExpansion& u, const ZonalExpansion& v);

struct InterpolationMatrix {
    int ell = 0;
    std::vector<Point> scatterers;
    Eigen::MatrixXd entries;  // (p, q) -> z_l^q(p)
    Eigen::VectorXd gershgorin_radii;
};

InterpolationMatrix build_interpolation_matrix(const SphereContext& ctx, const std::vector<Point>& scatterers,
                                               int ell);

struct GershgorinCertificate {
    bool invertible = false;
    double inverse_norm_bound = 0.0;  // meaningful only when invertible
    double min_margin = 0.0;          // min_p |a_pp| - R_p
};

GershgorinCertificate certify_invertible(const InterpolationMatrix& m);

/// Smallest L in [ell_lo, ell_hi] such that every l in [L, ell_hi] is certified,
/// or -1 when ell_hi itself is not certified.
int gershgorin_threshold(const SphereContext& ctx, const std::vector<Point>& scatterers, int ell_lo, int ell_hi);

}  // namespace scatterlab
