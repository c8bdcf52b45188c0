#pragma once

#include <cstdint>
#include <vector>

namespace scatterlab {

/// Volume of the unit sphere S^n embedded in R^{n+1}.
double sphere_volume(int n);

struct SphereContext {
    int d = 2;
    double vol_sphere = 0.0;   // vol(S^d)
    double vol_equator = 0.0;  // vol(S^{d-1})

    static SphereContext make(int d);

    /// Gegenbauer index (d-1)/2 attached to the sphere.
    double alpha() const { return 0.5 * (d - 1); }
};

/// A unit vector in R^{d+1}.
class Point {
public:
    Point() = default;
    /// Validates |x| = 1 within 1e-12.
    explicit Point(std::vector<double> coords);

    /// Rescales an arbitrary nonzero vector onto the sphere.
    static Point normalized(std::vector<double> coords);
    /// Standard basis vector e_i in R^{dim}.
    static Point basis(int dim, int i);

    const std::vector<double>& coords() const { return x_; }
    int ambient_dim() const { return static_cast<int>(x_.size()); }
    double operator[](int i) const { return x_[static_cast<std::size_t>(i)]; }

private:
    std::vector<double> x_;
};

double dot(const Point& p, const Point& q);
/// Dot product clamped to [-1, 1].
double cos_distance(const Point& p, const Point& q);
double geodesic_distance(const Point& p, const Point& q);
Point antipode(const Point& q);

/// True when p and q are antipodal within `tol` radians.
bool is_antipodal(const Point& p, const Point& q, double tol = 1e-9);

struct SpectralLevel {
    int ell = 0;
    double lambda_sq = 0.0;
    std::int64_t mult = 0;
};

/// dim ker(Delta - lambda_ell^2) on S^d, exact integer arithmetic.
std::int64_t multiplicity(int d, int ell);
double lambda_sq(int d, double ell);
SpectralLevel spectral_level(int d, int ell);

}  // namespace scatterlab
