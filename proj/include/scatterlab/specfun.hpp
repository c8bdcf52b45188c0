#pragma once

#include <vector>

namespace scatterlab {

// Gegenbauer (ultraspherical) polynomials C_l^(alpha), alpha > 0.

double gegenbauer_eval(double alpha, int ell, double s);
double gegenbauer_derivative(double alpha, int ell, double s);

/// log C_l(1) = log Gamma(2a+l) - log Gamma(2a) - log Gamma(l+1).
double log_gegenbauer_at_one(double alpha, int ell);
double gegenbauer_at_one(double alpha, int ell);

/// R_l(s) = C_l(s) / C_l(1), bounded by 1 on [-1, 1].
double gegenbauer_normalized(double alpha, int ell, double s);
/// R_0(s), ..., R_L(s) in one sweep.
std::vector<double> gegenbauer_normalized_all(double alpha, int ell_max, double s);

/// A^+ C_l = ((l+2a)/(l+1)) s C_l + ((s^2-1)/(l+1)) C_l'  ==  C_{l+1}.
double ladder_up(double alpha, int ell, double s);
/// A^- C_l = (l/(l+2a-1)) s C_l - ((s^2-1)/(l+2a-1)) C_l'  ==  C_{l-1}.
double ladder_down(double alpha, int ell, double s);

/// Leading large-l term of C_l(cos theta) for theta in [delta, pi - delta].
double gegenbauer_asymptotic(double alpha, int ell, double theta, double delta = 0.1);

/// Gamma(x+a) / Gamma(x+b) evaluated in the log domain.
double gamma_ratio(double x, double a, double b);
double log_gamma_ratio(double x, double a, double b);

/// Hurwitz zeta(2, a) = sum_{k>=0} 1/(k+a)^2 for a > 0.
double hurwitz_zeta2(double a);

}  // namespace scatterlab
