#pragma once

#include <functional>
#include <vector>

#include "scatterlab/geometry.hpp"

namespace scatterlab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss rule for the weight (1-x^2)^(lambda-1/2) on [-1, 1], lambda > 0.
/// Exact for polynomials of degree <= 2n-1. Rules are cached per (lambda, n).
const QuadratureRule& gauss_gegenbauer(double lambda, int n);

/// Gauss-Legendre mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Equispaced periodic trapezoid rule on [a, a + period).
QuadratureRule periodic_trapezoid(int n, double period, double a = 0.0);

/// Law of u = <eta, e> for eta uniform on S^{m} and fixed unit e, as an
/// averaging rule (weights sum to 1). m = 1 uses the angle, m >= 2 Gegenbauer.
QuadratureRule direction_cosine_rule(int m, int n);

/// Integral over S^d of f(<x,q>) using the radial Gauss-Gegenbauer rule.
/// `degree` bounds the polynomial degree of f.
double integrate_radial(const SphereContext& ctx, const std::function<double(double)>& f, int degree);

/// Integral over S^d of f(<x,q>, <x,p>) for polynomial f of total degree <= `degree`.
double integrate_biradial(const SphereContext& ctx, double cos_pq,
                          const std::function<double(double, double)>& f, int degree);

struct SpherePointRule {
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
};

/// Product rule on S^2 or S^3 exact for polynomials in x of degree <= `degree`.
SpherePointRule sphere_rule(int d, int degree);

}  // namespace scatterlab
