#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "scatterlab/geometry.hpp"
#include "scatterlab/greens.hpp"
#include "scatterlab/zonal.hpp"

namespace scatterlab {

/// Banded matrix over the zonal index l = 0..ell_max. bands[o + w][j] holds A(j + o, j).
struct BandedObservable {
    int ell_max = 0;
    int bandwidth = 0;
    std::vector<std::vector<cplx>> bands;

    cplx entry(int i, int j) const;
    std::vector<cplx> apply(const std::vector<cplx>& v) const;
    /// max |A - A^dagger| entry.
    double hermiticity_defect() const;
};

/// a_l = <z_{l+1}, cos r z_l> = ((l+2a)/(2(l+a))) sqrt(m_l / m_{l+1}).
double cos_ladder_coeff(const SphereContext& ctx, int ell);

/// K: multiplication by cos r (tridiagonal, zero diagonal).
BandedObservable multiplication_matrix(const SphereContext& ctx, int ell_max);
/// V_h = (h/i)(sin r d/dr + (d/2) cos r).
BandedObservable momentum_matrix(const SphereContext& ctx, double h, int ell_max);
/// Banded product A B restricted to 0..ell_max.
BandedObservable multiply(const BandedObservable& a, const BandedObservable& b);

/// Exact action of the letters 'K' and 'V' on a coefficient vector; the result
/// grows by one degree so no truncation occurs.
std::vector<cplx> apply_letter(const SphereContext& ctx, char letter, double h, const std::vector<cplx>& v);
/// Word applied right to left: "KV" means K(V v).
std::vector<cplx> apply_word(const SphereContext& ctx, const std::string& word, double h, std::vector<cplx> v);

cplx matrix_element(const ZonalExpansion& u, const BandedObservable& obs, const ZonalExpansion& v);
cplx matrix_element(const ZonalExpansion& u, const std::string& word, double h, const ZonalExpansion& v);

/// <g, V_h g> / ||g||^2 for a truncated Green's function.
double momentum_witness(const GreensFunction& g);

// --- measures ------------------------------------------------------------

/// Symbol Gamma = (1/|X|)(sum_{k<=0} X_k (kappa - i varsigma)^{|k|} + sum_{k>0} X_k (kappa + i varsigma)^k).
struct SymbolPoly {
    Point center;
    int upsilon = 0;
    std::vector<cplx> coeffs;  // X_{-upsilon}, ..., X_{upsilon}

    cplx eval(double kappa, double varsigma) const;
};

/// nu_{Q,m}: pairs carry m_q nu_{q,1/2} + m_{-q} nu_{-q,1/2}; singletons m_p nu_p.
struct MeasureSpec {
    SphereContext ctx;
    std::vector<Point> scatterers;
    std::vector<double> weights;

    void validate() const;
    double total_mass() const;
};

struct MeasureQuadrature {
    int t_nodes = 400;
    int psi_nodes = 200;
};

using SymbolFn = std::function<cplx(double kappa, double varsigma)>;

/// Integral of a(kappa^c, varsigma^c) against nu_{Q,m}.
cplx measure_integral(const MeasureSpec& m, const Point& center, const SymbolFn& a, const MeasureQuadrature& quad = {});
cplx measure_integral(const MeasureSpec& m, const SymbolPoly& a, const MeasureQuadrature& quad = {});
/// Named observables: "one", "kappa", "varsigma", "kappa2", "varsigma2".
double measure_integral(const MeasureSpec& m, const Point& center, const std::string& name,
                        const MeasureQuadrature& quad = {});

/// Flow-out integrals from a single point p: full period or t in [0, pi).
cplx flowout_integral(const SphereContext& ctx, const Point& p, const Point& center, const SymbolFn& a, bool half,
                      const MeasureQuadrature& quad = {});

// --- Fourier profile -----------------------------------------------------

struct FourierProfile {
    int scenario = 1;
    double sigma = 0.5;
    cplx beta_q = 1.0;
    cplx beta_mq = 0.0;
    int rho = 1;
    cplx c_limit = 0.0;
    double normalizer = 1.0;
    double m_plus = 1.0;
    double m_minus = 1.0;

    /// Closed-form profile at t (taken mod 2 pi).
    cplx eval(double t) const;
    /// (1/normalizer) sum over the window of X_k e^{ikt}, |k - sigma| <= upsilon.
    cplx partial_sum(double t, int upsilon) const;
};

FourierProfile fourier_profile(const ScenarioClassification& cls);

struct CarlesonRow {
    int upsilon = 0;
    double sup_error = 0.0;
};

/// Sup over a t-grid (avoiding `exclusion` around 0, pi, 2 pi) of |partial sum - profile|.
std::vector<CarlesonRow> carleson_check(const ScenarioClassification& cls, const std::vector<int>& upsilons,
                                        int grid = 2000, double exclusion = 1e-2);

}  // namespace scatterlab
