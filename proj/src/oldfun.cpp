#include "scatterlab/oldfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scatterlab/quadrature.hpp"

namespace scatterlab {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd to_eigen(const Point& p)
{
    return Eigen::Map<const Eigen::VectorXd>(p.coords().data(), p.ambient_dim());
}

}  // namespace

// --- frames --------------------------------------------------------------

GeodesicFrame GeodesicFrame::identity(int d)
{
    if (d < 2) throw std::invalid_argument("GeodesicFrame: d must be >= 2");
    return GeodesicFrame(Eigen::MatrixXd::Identity(d + 1, d + 1));
}

GeodesicFrame GeodesicFrame::from_matrix(const Eigen::MatrixXd& r)
{
    if (r.rows() != r.cols() || r.rows() < 3) throw std::invalid_argument("GeodesicFrame: square matrix of size >= 3");
    const double orth = (r.transpose() * r - Eigen::MatrixXd::Identity(r.rows(), r.cols())).cwiseAbs().maxCoeff();
    if (orth > 1e-12) throw std::invalid_argument("GeodesicFrame: matrix is not orthogonal");
    if (r.determinant() < 0.0) throw std::invalid_argument("GeodesicFrame: determinant must be +1");
    return GeodesicFrame(r);
}

GeodesicFrame GeodesicFrame::through(const Point& a, const Point& b)
{
    const int n = a.ambient_dim();
    if (b.ambient_dim() != n || n < 3) throw std::invalid_argument("GeodesicFrame::through: dimension mismatch");
    const Eigen::VectorXd e0 = to_eigen(a);
    Eigen::VectorXd e1 = to_eigen(b) - e0.dot(to_eigen(b)) * e0;
    if (e1.norm() < 1e-12) throw std::invalid_argument("GeodesicFrame::through: points are parallel");
    e1.normalize();

    Eigen::MatrixXd seed(n, n + 2);
    seed.col(0) = e0;
    seed.col(1) = e1;
    seed.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(seed).householderQ() * Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd r(n, n);
    r.col(0) = e0;
    r.col(1) = e1;
    r.rightCols(n - 2) = q.rightCols(n - 2);
    if (r.determinant() < 0.0) r.col(n - 1) *= -1.0;
    return GeodesicFrame(r);
}

Eigen::VectorXd GeodesicFrame::local(const Point& x) const
{
    if (x.ambient_dim() != rot_.rows()) throw std::invalid_argument("GeodesicFrame: point dimension mismatch");
    return rot_.transpose() * to_eigen(x);
}

Point GeodesicFrame::at(double s) const
{
    const Eigen::VectorXd v = std::cos(s) * rot_.col(0) + std::sin(s) * rot_.col(1);
    return Point::normalized(std::vector<double>(v.data(), v.data() + v.size()));
}

double GeodesicFrame::distance_to(const Point& x) const
{
    const Eigen::VectorXd y = local(x);
    return std::acos(std::clamp(std::hypot(y(0), y(1)), 0.0, 1.0));
}

// --- beams ---------------------------------------------------------------

double beam_log_normalizer(int d, int ell)
{
    if (ell < 0) throw std::invalid_argument("beam_log_normalizer: negative degree");
    return 0.5 * (std::lgamma(ell + 0.5 * (d + 1)) - std::lgamma(ell + 1.0)) - 0.5 * std::log(2.0) -
           0.25 * (d + 1) * std::log(kPi);
}

cplx beam_eval(const GeodesicFrame& frame, int ell, const Point& x)
{
    const Eigen::VectorXd y = frame.local(x);
    const double rho = std::hypot(y(0), y(1));
    const double logc = beam_log_normalizer(frame.d(), ell);
    if (ell == 0) return std::exp(logc);
    if (rho == 0.0) return 0.0;
    return std::polar(std::exp(logc + ell * std::log(rho)), ell * std::atan2(y(1), y(0)));
}

double beam_norm_sq(int d, int ell)
{
    // x = (rho e^{i phi}, s eta), rho^2 + s^2 = 1, eta in S^{d-2}; |Y|^2 = c^2 (1 - s^2)^l.
    const QuadratureRule r = gauss_legendre(ell + d, 0.0, 1.0);
    const double logc2 = 2.0 * beam_log_normalizer(d, ell);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = r.nodes[i];
        s += r.weights[i] * std::exp(logc2 + ell * std::log1p(-x * x)) * std::pow(x, d - 2);
    }
    return 2.0 * kPi * sphere_volume(d - 2) * s;
}

void BeamCombination::validate() const
{
    if (geodesics.empty() || geodesics.size() != weights.size())
        throw std::invalid_argument("BeamCombination: geodesics and weights must be nonempty and aligned");
    double total = 0.0;
    for (double b : weights) {
        if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("BeamCombination: weights must lie in [0, 1]");
        total += b;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("BeamCombination: weights must sum to 1");
    for (const auto& g : geodesics)
        if (g.d() != geodesics.front().d()) throw std::invalid_argument("BeamCombination: mixed dimensions");
}

cplx BeamCombination::eval(const Point& x) const
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < geodesics.size(); ++i) s += std::sqrt(weights[i]) * beam_eval(geodesics[i], ell, x);
    return s;
}

// --- vanishing correction ------------------------------------------------

cplx VanishingCorrection::eval(const Point& x) const
{
    cplx w = beam.eval(x);
    for (std::size_t i = 0; i < scatterers.size(); ++i)
        w -= alpha(static_cast<Eigen::Index>(i)) * normalized_zonal_eval(ctx, scatterers[i], beam.ell, x);
    return w;
}

double VanishingCorrection::correction_norm() const
{
    cplx s = 0.0;
    for (std::size_t i = 0; i < scatterers.size(); ++i)
        for (std::size_t j = 0; j < scatterers.size(); ++j)
            s += std::conj(alpha(static_cast<Eigen::Index>(i))) * alpha(static_cast<Eigen::Index>(j)) *
                 zonal_inner_product(ctx, scatterers[i], scatterers[j], beam.ell, true);
    return std::sqrt(std::max(0.0, s.real()));
}

VanishingCorrection vanishing_correction(const SphereContext& ctx, const BeamCombination& beam,
                                         const std::vector<Point>& scatterers)
{
    beam.validate();
    if (beam.geodesics.front().d() != ctx.d) throw std::invalid_argument("vanishing_correction: dimension mismatch");
    const InterpolationMatrix z = build_interpolation_matrix(ctx, scatterers, beam.ell);
    VanishingCorrection out;
    out.certificate = certify_invertible(z);
    if (!out.certificate.invertible)
        throw std::runtime_error("vanishing_correction: interpolation matrix not certified at l = " +
                                 std::to_string(beam.ell) + "; raise l");
    const Eigen::Index n = static_cast<Eigen::Index>(scatterers.size());
    out.targets.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.targets(i) = beam.eval(scatterers[static_cast<std::size_t>(i)]);
    out.alpha = z.entries.cast<cplx>().partialPivLu().solve(out.targets);
    out.ctx = ctx;
    out.scatterers = scatterers;
    out.beam = beam;
    for (const Point& p : scatterers) out.defect = std::max(out.defect, std::abs(out.eval(p)));
    out.min_geodesic_distance = kPi;
    for (const auto& g : beam.geodesics)
        for (const Point& p : scatterers) out.min_geodesic_distance = std::min(out.min_geodesic_distance, g.distance_to(p));
    out.decay_expected = out.min_geodesic_distance > 1e-6;
    return out;
}

// --- observables ---------------------------------------------------------

std::vector<BeamObservableRow> beam_observable_check(const SphereContext& ctx, const BeamCombination& beam,
                                                     const Point& q, const std::vector<int>& ells, int power)
{
    if (power != 1 && power != 2) throw std::invalid_argument("beam_observable_check: power must be 1 or 2");
    beam.validate();

    const QuadratureRule circle = periodic_trapezoid(64, 2.0 * kPi);
    double limit = 0.0;
    for (std::size_t g = 0; g < beam.geodesics.size(); ++g) {
        double s = 0.0;
        for (std::size_t i = 0; i < circle.size(); ++i)
            s += circle.weights[i] * std::pow(dot(beam.geodesics[g].at(circle.nodes[i]), q), power);
        limit += beam.weights[g] * s / (2.0 * kPi);
    }

    std::vector<BeamObservableRow> rows;
    for (int ell : ells) {
        BeamCombination b = beam;
        b.ell = ell;
        const SpherePointRule rule = sphere_rule(ctx.d, 2 * ell + power);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
            const Point x(rule.points[i]);
            acc += rule.weights[i] * std::norm(b.eval(x)) * std::pow(dot(x, q), power);
        }
        rows.push_back({ell, acc, limit, std::abs(acc - limit)});
    }
    return rows;
}

cplx beam_inner_product(const SphereContext& ctx, const GeodesicFrame& g1, const GeodesicFrame& g2, int ell)
{
    const SpherePointRule rule = sphere_rule(ctx.d, 2 * ell);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
        const Point x(rule.points[i]);
        acc += rule.weights[i] * std::conj(beam_eval(g1, ell, x)) * beam_eval(g2, ell, x);
    }
    return acc;
}

}  // namespace scatterlab
