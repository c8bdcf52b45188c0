#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scatterlab/geometry.hpp"
#include "scatterlab/zonal.hpp"

namespace scatterlab {

/// Rotation R in SO(d+1); the geodesic is s -> cos s R e_0 + sin s R e_1.
class GeodesicFrame {
public:
    static GeodesicFrame identity(int d);
    /// Frame whose geodesic passes through a and, orthogonally, through the
    /// normalized component of b perpendicular to a.
    static GeodesicFrame through(const Point& a, const Point& b);
    static GeodesicFrame from_matrix(const Eigen::MatrixXd& r);

    const Eigen::MatrixXd& rotation() const { return rot_; }
    int d() const { return static_cast<int>(rot_.rows()) - 1; }
    /// R^T x.
    Eigen::VectorXd local(const Point& x) const;
    Point at(double s) const;
    /// Geodesic distance from x to the great circle.
    double distance_to(const Point& x) const;

private:
    explicit GeodesicFrame(Eigen::MatrixXd r) : rot_(std::move(r)) {}
    Eigen::MatrixXd rot_;
};

/// log of (1/(sqrt 2 pi^{(d+1)/4})) (Gamma(l+(d+1)/2)/Gamma(l+1))^{1/2}.
double beam_log_normalizer(int d, int ell);

/// c_l (x_1 + i x_2)^l in the frame's coordinates.
cplx beam_eval(const GeodesicFrame& frame, int ell, const Point& x);

/// ||Y_l||^2 through the latitude reduction; 1 up to rounding.
double beam_norm_sq(int d, int ell);

struct BeamCombination {
    std::vector<GeodesicFrame> geodesics;
    std::vector<double> weights;  // b_gamma, summing to 1
    int ell = 0;

    void validate() const;
    cplx eval(const Point& x) const;
};

struct VanishingCorrection {
    Eigen::VectorXcd alpha;
    Eigen::VectorXcd targets;      // Y^T at the scatterers
    double defect = 0.0;           // max_Q |w_l|
    double min_geodesic_distance = 0.0;
    bool decay_expected = false;   // every scatterer farther than 1e-6 from every geodesic
    GershgorinCertificate certificate;
    SphereContext ctx;
    std::vector<Point> scatterers;
    BeamCombination beam;

    /// w_l(x) = Y^T(x) - sum alpha_q z_l^q(x).
    cplx eval(const Point& x) const;
    /// ||sum alpha_q z_l^q||_{L^2} from the Gram matrix of normalized zonals.
    double correction_norm() const;
};

/// Solve Z_l alpha = Y; throws std::runtime_error when Z_l is not certified.
VanishingCorrection vanishing_correction(const SphereContext& ctx, const BeamCombination& beam,
                                         const std::vector<Point>& scatterers);

struct BeamObservableRow {
    int ell = 0;
    double measured = 0.0;  // <Y, cos^k r_q Y>
    double limit = 0.0;     // sum_gamma b_gamma \int cos^k d(gamma(s), q) ds / 2pi
    double error = 0.0;
};

/// Position observable cos^power r_q with power in {1, 2}, evaluated by sphere quadrature.
std::vector<BeamObservableRow> beam_observable_check(const SphereContext& ctx, const BeamCombination& beam,
                                                     const Point& q, const std::vector<int>& ells, int power = 1);

/// <Y_l^{g1}, Y_l^{g2}> by sphere quadrature.
cplx beam_inner_product(const SphereContext& ctx, const GeodesicFrame& g1, const GeodesicFrame& g2, int ell);

}  // namespace scatterlab
