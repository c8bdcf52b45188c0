#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scatterlab/geometry.hpp"
#include "scatterlab/zonal.hpp"

namespace scatterlab {

/// h^{-2} = (l_n + sigma_n)(l_n + sigma_n + d - 1) with sigma_n in [0, 1).
struct SemiclassicalPoint {
    int d = 2;
    double h = 0.0;
    int ell_n = 0;
    double sigma_n = 0.0;
    int rho = 1;  // (-1)^{l_n}
    bool on_spectrum = false;

    static SemiclassicalPoint from_ell_sigma(int d, int ell, double sigma);
    static SemiclassicalPoint from_h(int d, double h);

    double h_inv_sq() const { return (ell_n + sigma_n) * (ell_n + sigma_n + d - 1); }
    /// lambda_l^2 - h^{-2}, factored to avoid cancellation near l_n.
    double spectral_gap(int ell) const { return (ell - ell_n - sigma_n) * (ell + ell_n + sigma_n + d - 1); }
};

/// Scatterer set with one complex weight per point. Antipodal pairs are grouped.
struct GreensSpec {
    SphereContext ctx;
    std::vector<Point> scatterers;
    std::vector<cplx> beta;
    SemiclassicalPoint point;
    int ell_max = 0;  // 0 selects max(4 l_n, l_n + 10^4)

    static GreensSpec pair(const SphereContext& ctx, const Point& q, cplx beta_q, cplx beta_mq,
                           const SemiclassicalPoint& pt, int ell_max = 0);
    static GreensSpec single(const SphereContext& ctx, const Point& q, const SemiclassicalPoint& pt,
                             int ell_max = 0);
};

int default_ell_max(int ell_n);

/// Truncated G_h^{Q,beta}: one zonal expansion per center group.
struct GreensFunction {
    SphereContext ctx;
    SemiclassicalPoint point;
    std::vector<ZonalExpansion> parts;
    /// Estimated squared L^2 mass beyond ell_max (reported error bar).
    double tail_norm_sq = 0.0;

    int ell_max() const { return parts.empty() ? -1 : parts.front().ell_max(); }
    double truncated_norm_sq() const;
    double norm_sq() const { return truncated_norm_sq() + tail_norm_sq; }
    double norm() const;
    /// ||Pi_W G||^2 for a set of degrees W.
    double projected_norm_sq(const std::vector<int>& ells) const;
    /// ||G - Pi_W G||^2 including the remainder beyond ell_max.
    double complement_norm_sq(const std::vector<int>& ells) const;
    /// The single-group expansion; throws for general Q.
    const ZonalExpansion& expansion() const;
};

/// Pairs (i, j) of antipodal scatterer indices plus singletons (j = -1).
std::vector<std::pair<int, int>> group_scatterers(const std::vector<Point>& q);

GreensFunction build_greens(const GreensSpec& spec);

// --- scenarios -----------------------------------------------------------

class ClassificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SequenceElement {
    SemiclassicalPoint point;
    cplx beta_q;
    cplx beta_mq;
};

struct ClassifyOptions {
    double ratio_threshold = 1e3;   // scenario 2 vs 3 cut on the last element
    double sigma_oscillation = 1e-2;
    double boundary_band = 0.1;     // sigma_n this close to {0,1} may be a boundary limit
    double admissibility_tol = 1e-10;
};

struct ScenarioClassification {
    int scenario = 0;
    double sigma = 0.0;
    cplx beta_q = 0.0;
    cplx beta_mq = 0.0;
    int rho = 1;
    cplx c_limit = 0.0;     // scenario 3
    double ratio_last = 0.0;  // |b_n| / |sigma - sigma_n| on the last element (scenarios 2, 3)
    SequenceElement last;   // renormalized last element
};

ScenarioClassification classify(const std::vector<SequenceElement>& seq, const ClassifyOptions& opt = {});

struct SeriesConstant {
    double value_sq = 0.0;     // direct series
    double closed_form_sq = 0.0;
    double tail_sq = 0.0;      // analytic tail added to the explicit partial sum
    double value() const;
};

SeriesConstant series_constant(const ScenarioClassification& cls);

/// Degrees of the scenario window around l_n for a given Upsilon.
std::vector<int> scenario_window(const ScenarioClassification& cls, const SemiclassicalPoint& pt, int upsilon);

/// ||Pi_W G||^2 for the scenario window.
double window_norm(const GreensFunction& g, const ScenarioClassification& cls, int upsilon);
/// window_norm * 2(d-1) vol(S^d) h^{d-3}.
double normalized_window_norm(const GreensFunction& g, const ScenarioClassification& cls, int upsilon);

/// Normalized quasimode built from the scenario limit data, centered at `q`.
ZonalExpansion quasimode_reference(const SphereContext& ctx, const Point& q, const ScenarioClassification& cls,
                                   const SemiclassicalPoint& pt, int upsilon);

struct QuasimodeResidual {
    double residual = 0.0;      // min over a global phase
    double raw_residual = 0.0;  // plain L^2 distance
    double upsilon_h = 0.0;
    double sigma_gap = 0.0;
    double beta_gap = 0.0;
    double upsilon_term = 0.0;  // Upsilon^{-1/2}; for scenario 2, the ratio term
};

QuasimodeResidual quasimode_residual(const GreensSpec& spec, const ScenarioClassification& cls, int upsilon);

/// Weights (m_+, m_-) attached to limit data; (1, 1) for scenarios 2 and 4.
std::pair<double, double> scenario_weights(const ScenarioClassification& cls);
std::pair<double, double> scenario1_weights(double sigma, cplx beta_q, cplx beta_mq, int rho);

/// Unit beta realizing target weights (m_+ + m_-)/2 = 1 at sigma in (0, 1).
std::pair<cplx, cplx> choose_beta_for_weights(double sigma, int rho, double m_plus, double m_minus);

}  // namespace scatterlab
