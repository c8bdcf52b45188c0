#include "scatterlab/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scatterlab {

namespace {

void check_args(double alpha, int ell, double s)
{
    if (!(alpha > 0.0)) throw std::domain_error("gegenbauer: alpha must be positive");
    if (ell < 0) throw std::domain_error("gegenbauer: negative degree");
    if (!(std::abs(s) <= 1.0 + 1e-12)) throw std::domain_error("gegenbauer: |s| > 1");
}

}  // namespace

double gegenbauer_eval(double alpha, int ell, double s)
{
    check_args(alpha, ell, s);
    if (ell == 0) return 1.0;
    double prev = 1.0;
    double cur = 2.0 * alpha * s;
    for (int l = 1; l < ell; ++l) {
        const double next = (2.0 * (l + alpha) * s * cur - (l + 2.0 * alpha - 1.0) * prev) / (l + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double gegenbauer_derivative(double alpha, int ell, double s)
{
    check_args(alpha, ell, s);
    if (ell == 0) return 0.0;
    // Differentiated Bonnet recurrence carried alongside the values.
    double c_prev = 1.0, c_cur = 2.0 * alpha * s;
    double d_prev = 0.0, d_cur = 2.0 * alpha;
    for (int l = 1; l < ell; ++l) {
        const double a = 2.0 * (l + alpha);
        const double b = l + 2.0 * alpha - 1.0;
        const double c_next = (a * s * c_cur - b * c_prev) / (l + 1.0);
        const double d_next = (a * (c_cur + s * d_cur) - b * d_prev) / (l + 1.0);
        c_prev = c_cur;
        c_cur = c_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    return d_cur;
}

double log_gegenbauer_at_one(double alpha, int ell)
{
    if (!(alpha > 0.0) || ell < 0) throw std::domain_error("gegenbauer_at_one: bad arguments");
    return std::lgamma(2.0 * alpha + ell) - std::lgamma(2.0 * alpha) - std::lgamma(ell + 1.0);
}

double gegenbauer_at_one(double alpha, int ell)
{
    return std::exp(log_gegenbauer_at_one(alpha, ell));
}

std::vector<double> gegenbauer_normalized_all(double alpha, int ell_max, double s)
{
    check_args(alpha, ell_max, s);
    std::vector<double> r(static_cast<std::size_t>(ell_max) + 1);
    r[0] = 1.0;
    if (ell_max >= 1) r[1] = s;
    // (l+2a) R_{l+1} = 2(l+a) s R_l - l R_{l-1}
    for (int l = 1; l < ell_max; ++l)
        r[l + 1] = (2.0 * (l + alpha) * s * r[l] - l * r[l - 1]) / (l + 2.0 * alpha);
    return r;
}

double gegenbauer_normalized(double alpha, int ell, double s)
{
    return gegenbauer_normalized_all(alpha, ell, s).back();
}

double ladder_up(double alpha, int ell, double s)
{
    const double c = gegenbauer_eval(alpha, ell, s);
    const double dc = gegenbauer_derivative(alpha, ell, s);
    return ((ell + 2.0 * alpha) * s * c + (s * s - 1.0) * dc) / (ell + 1.0);
}

double ladder_down(double alpha, int ell, double s)
{
    if (ell < 1) throw std::domain_error("ladder_down: degree 0 has no predecessor");
    const double c = gegenbauer_eval(alpha, ell, s);
    const double dc = gegenbauer_derivative(alpha, ell, s);
    return (ell * s * c - (s * s - 1.0) * dc) / (ell + 2.0 * alpha - 1.0);
}

double gegenbauer_asymptotic(double alpha, int ell, double theta, double delta)
{
    if (!(alpha > 0.0) || ell < 1) throw std::domain_error("gegenbauer_asymptotic: bad arguments");
    if (!(delta > 0.0)) throw std::domain_error("gegenbauer_asymptotic: delta must be positive");
    if (theta < delta || theta > std::numbers::pi - delta)
        throw std::domain_error("gegenbauer_asymptotic: theta too close to an endpoint");
    const double amp = std::pow(2.0, 1.0 - alpha) / std::tgamma(alpha);
    return amp * std::pow(static_cast<double>(ell), alpha - 1.0) * std::pow(std::sin(theta), -alpha)
           * std::cos((ell + alpha) * theta - 0.5 * alpha * std::numbers::pi);
}

double log_gamma_ratio(double x, double a, double b)
{
    if (!(x + a > 0.0) || !(x + b > 0.0)) throw std::domain_error("gamma_ratio: arguments must be positive");
    return std::lgamma(x + a) - std::lgamma(x + b);
}

double gamma_ratio(double x, double a, double b)
{
    return std::exp(log_gamma_ratio(x, a, b));
}

double hurwitz_zeta2(double a)
{
    if (!(a > 0.0)) throw std::domain_error("hurwitz_zeta2: a must be positive");
    double s = 0.0;
    double b = a;
    for (; b < 20.0; b += 1.0) s += 1.0 / (b * b);
    // Euler-Maclaurin remainder at b >= 20.
    static constexpr double bern[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0};
    const double ib = 1.0 / b;
    double tail = ib + 0.5 * ib * ib;
    double p = ib * ib * ib;
    for (double bj : bern) {
        tail += bj * p;
        p *= ib * ib;
    }
    return s + tail;
}

}  // namespace scatterlab
