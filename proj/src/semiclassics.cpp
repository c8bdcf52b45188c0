#include "scatterlab/semiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scatterlab/quadrature.hpp"

namespace scatterlab {

namespace {

const cplx I(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

int parity(int n) { return n % 2 == 0 ? 1 : -1; }

}  // namespace

// --- banded operators ----------------------------------------------------

cplx BandedObservable::entry(int i, int j) const
{
    const int o = i - j;
    if (std::abs(o) > bandwidth || i < 0 || j < 0 || i > ell_max || j > ell_max) return 0.0;
    return bands[o + bandwidth][j];
}

std::vector<cplx> BandedObservable::apply(const std::vector<cplx>& v) const
{
    std::vector<cplx> y(static_cast<std::size_t>(ell_max) + 1, 0.0);
    const int n = std::min(static_cast<int>(v.size()) - 1, ell_max);
    for (int j = 0; j <= n; ++j)
        for (int o = -bandwidth; o <= bandwidth; ++o) {
            const int i = j + o;
            if (i >= 0 && i <= ell_max) y[i] += bands[o + bandwidth][j] * v[j];
        }
    return y;
}

double BandedObservable::hermiticity_defect() const
{
    double worst = 0.0;
    for (int j = 0; j <= ell_max; ++j)
        for (int o = -bandwidth; o <= bandwidth; ++o) {
            const int i = j + o;
            if (i < 0 || i > ell_max) continue;
            worst = std::max(worst, std::abs(entry(i, j) - std::conj(entry(j, i))));
        }
    return worst;
}

double cos_ladder_coeff(const SphereContext& ctx, int ell)
{
    if (ctx.d < 2) throw std::invalid_argument("cos_ladder_coeff: d must be >= 2");
    const double a = ctx.alpha();
    const double ratio = static_cast<double>(multiplicity(ctx.d, ell)) / static_cast<double>(multiplicity(ctx.d, ell + 1));
    return (ell + 2.0 * a) / (2.0 * (ell + a)) * std::sqrt(ratio);
}

namespace {

BandedObservable tridiagonal(int ell_max, const std::function<cplx(int)>& lower, const std::function<cplx(int)>& upper)
{
    if (ell_max < 2) throw std::invalid_argument("banded operator: ell_max must be >= 2");
    BandedObservable b;
    b.ell_max = ell_max;
    b.bandwidth = 1;
    b.bands.assign(3, std::vector<cplx>(static_cast<std::size_t>(ell_max) + 1, 0.0));
    for (int j = 0; j <= ell_max; ++j) {
        if (j + 1 <= ell_max) b.bands[2][j] = lower(j);  // A(j+1, j)
        if (j >= 1) b.bands[0][j] = upper(j - 1);        // A(j-1, j)
    }
    return b;
}

}  // namespace

BandedObservable multiplication_matrix(const SphereContext& ctx, int ell_max)
{
    auto a = [&](int l) { return cplx(cos_ladder_coeff(ctx, l)); };
    return tridiagonal(ell_max, a, a);
}

BandedObservable momentum_matrix(const SphereContext& ctx, double h, int ell_max)
{
    if (!(h > 0.0)) throw std::invalid_argument("momentum_matrix: h must be positive");
    const double al = ctx.alpha();
    auto lower = [&](int l) { return -I * h * (l + al + 0.5) * cos_ladder_coeff(ctx, l); };
    auto upper = [&](int l) { return I * h * (l + al + 0.5) * cos_ladder_coeff(ctx, l); };
    return tridiagonal(ell_max, lower, upper);
}

BandedObservable multiply(const BandedObservable& a, const BandedObservable& b)
{
    if (a.ell_max != b.ell_max) throw std::invalid_argument("multiply: size mismatch");
    BandedObservable c;
    c.ell_max = a.ell_max;
    c.bandwidth = a.bandwidth + b.bandwidth;
    c.bands.assign(2 * c.bandwidth + 1, std::vector<cplx>(static_cast<std::size_t>(c.ell_max) + 1, 0.0));
    for (int j = 0; j <= c.ell_max; ++j)
        for (int ob = -b.bandwidth; ob <= b.bandwidth; ++ob) {
            const int k = j + ob;
            if (k < 0 || k > c.ell_max) continue;
            const cplx bkj = b.bands[ob + b.bandwidth][j];
            for (int oa = -a.bandwidth; oa <= a.bandwidth; ++oa) {
                const int i = k + oa;
                if (i < 0 || i > c.ell_max) continue;
                c.bands[i - j + c.bandwidth][j] += a.bands[oa + a.bandwidth][k] * bkj;
            }
        }
    return c;
}

std::vector<cplx> apply_letter(const SphereContext& ctx, char letter, double h, const std::vector<cplx>& v)
{
    const int n = static_cast<int>(v.size());
    std::vector<cplx> y(static_cast<std::size_t>(n) + 1, 0.0);
    const double al = ctx.alpha();
    for (int l = 0; l < n; ++l) {
        if (v[l] == cplx(0.0)) continue;
        const double up = cos_ladder_coeff(ctx, l);
        const double down = l >= 1 ? cos_ladder_coeff(ctx, l - 1) : 0.0;
        switch (letter) {
        case 'K':
            y[l + 1] += up * v[l];
            if (l >= 1) y[l - 1] += down * v[l];
            break;
        case 'V':
            y[l + 1] += -I * h * (l + al + 0.5) * up * v[l];
            if (l >= 1) y[l - 1] += I * h * (l - 1 + al + 0.5) * down * v[l];
            break;
        default: throw std::invalid_argument(std::string("apply_letter: unknown letter ") + letter);
        }
    }
    return y;
}

std::vector<cplx> apply_word(const SphereContext& ctx, const std::string& word, double h, std::vector<cplx> v)
{
    for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_letter(ctx, *it, h, v);
    return v;
}

namespace {

void require_same_center(const ZonalExpansion& u, const ZonalExpansion& v)
{
    if (u.ctx.d != v.ctx.d || dot(u.center, v.center) < 1.0 - 1e-15)
        throw std::invalid_argument("matrix_element: expansions must share their center");
}

cplx contract(const std::vector<cplx>& u, const std::vector<cplx>& w)
{
    cplx s = 0.0;
    const std::size_t n = std::min(u.size(), w.size());
    for (std::size_t i = 0; i < n; ++i) s += std::conj(u[i]) * w[i];
    return s;
}

}  // namespace

cplx matrix_element(const ZonalExpansion& u, const BandedObservable& obs, const ZonalExpansion& v)
{
    require_same_center(u, v);
    if (obs.ell_max < std::max(u.ell_max(), v.ell_max()))
        throw std::invalid_argument("matrix_element: observable smaller than the expansions");
    return contract(u.coeffs, obs.apply(v.coeffs));
}

cplx matrix_element(const ZonalExpansion& u, const std::string& word, double h, const ZonalExpansion& v)
{
    require_same_center(u, v);
    return contract(u.coeffs, apply_word(u.ctx, word, h, v.coeffs));
}

double momentum_witness(const GreensFunction& g)
{
    const ZonalExpansion& e = g.expansion();
    const cplx w = contract(e.coeffs, apply_letter(e.ctx, 'V', g.point.h, e.coeffs));
    return std::real(w) / e.norm_sq();
}

// --- measures ------------------------------------------------------------

cplx SymbolPoly::eval(double kappa, double varsigma) const
{
    if (static_cast<int>(coeffs.size()) != 2 * upsilon + 1) throw std::invalid_argument("SymbolPoly: coefficient count");
    double nrm = 0.0;
    for (const cplx& x : coeffs) nrm += std::norm(x);
    if (!(nrm > 0.0)) throw std::invalid_argument("SymbolPoly: zero coefficient vector");
    const cplx zp(kappa, varsigma), zm(kappa, -varsigma);
    cplx s = coeffs[upsilon];
    cplx pp = 1.0, pm = 1.0;
    for (int k = 1; k <= upsilon; ++k) {
        pp *= zp;
        pm *= zm;
        s += coeffs[upsilon + k] * pp + coeffs[upsilon - k] * pm;
    }
    return s / std::sqrt(nrm);
}

double MeasureSpec::total_mass() const
{
    double m = 0.0;
    for (const auto& [i, j] : group_scatterers(scatterers))
        m += j >= 0 ? 0.5 * (weights[i] + weights[j]) : weights[i];
    return m;
}

void MeasureSpec::validate() const
{
    if (scatterers.empty() || scatterers.size() != weights.size())
        throw std::invalid_argument("MeasureSpec: scatterers and weights must be nonempty and aligned");
    for (double w : weights)
        if (!(w >= 0.0)) throw std::invalid_argument("MeasureSpec: weights must be nonnegative");
    for (const auto& [i, j] : group_scatterers(scatterers)) {
        const double lim = j >= 0 ? 2.0 : 1.0;
        if (weights[i] > lim || (j >= 0 && weights[j] > lim))
            throw std::invalid_argument("MeasureSpec: weight out of range");
    }
    if (std::abs(total_mass() - 1.0) > 1e-12)
        throw std::invalid_argument("MeasureSpec: weights violate the mass constraint");
}

cplx flowout_integral(const SphereContext& ctx, const Point& p, const Point& center, const SymbolFn& a, bool half,
                      const MeasureQuadrature& quad)
{
    const double c0 = cos_distance(p, center);
    const double s0 = std::sqrt(std::max(0.0, 1.0 - c0 * c0));
    const QuadratureRule rt = half ? gauss_legendre(quad.t_nodes, 0.0, kPi) : periodic_trapezoid(quad.t_nodes, 2.0 * kPi);
    QuadratureRule ru;
    if (s0 > 0.0) ru = direction_cosine_rule(ctx.d - 1, quad.psi_nodes);
    else ru = QuadratureRule{{0.0}, {1.0}};
    cplx total = 0.0;
    for (std::size_t i = 0; i < rt.size(); ++i) {
        const double ct = std::cos(rt.nodes[i]), st = std::sin(rt.nodes[i]);
        cplx inner = 0.0;
        for (std::size_t j = 0; j < ru.size(); ++j) {
            const double xi_c = s0 * ru.nodes[j];
            inner += ru.weights[j] * a(ct * c0 + st * xi_c, st * c0 - ct * xi_c);
        }
        total += rt.weights[i] / (2.0 * kPi) * inner;
    }
    return total;
}

cplx measure_integral(const MeasureSpec& m, const Point& center, const SymbolFn& a, const MeasureQuadrature& quad)
{
    m.validate();
    cplx total = 0.0;
    for (const auto& [i, j] : group_scatterers(m.scatterers)) {
        if (j >= 0) {
            total += m.weights[i] * flowout_integral(m.ctx, m.scatterers[i], center, a, true, quad);
            total += m.weights[j] * flowout_integral(m.ctx, m.scatterers[j], center, a, true, quad);
        } else {
            total += m.weights[i] * flowout_integral(m.ctx, m.scatterers[i], center, a, false, quad);
        }
    }
    return total;
}

cplx measure_integral(const MeasureSpec& m, const SymbolPoly& a, const MeasureQuadrature& quad)
{
    return measure_integral(m, a.center, [&](double k, double s) { return a.eval(k, s); }, quad);
}

double measure_integral(const MeasureSpec& m, const Point& center, const std::string& name,
                        const MeasureQuadrature& quad)
{
    SymbolFn f;
    if (name == "one") f = [](double, double) { return cplx(1.0); };
    else if (name == "kappa") f = [](double k, double) { return cplx(k); };
    else if (name == "varsigma") f = [](double, double s) { return cplx(s); };
    else if (name == "kappa2") f = [](double k, double) { return cplx(k * k); };
    else if (name == "varsigma2") f = [](double, double s) { return cplx(s * s); };
    else throw std::invalid_argument("measure_integral: unknown observable " + name);
    return std::real(measure_integral(m, center, f, quad));
}

// --- Fourier profile -----------------------------------------------------

cplx FourierProfile::eval(double t) const
{
    t = std::fmod(t, 2.0 * kPi);
    if (t < 0.0) t += 2.0 * kPi;
    switch (scenario) {
    case 1: {
        const cplx amp = 2.0 * kPi * I / (1.0 - std::exp(2.0 * kPi * I * sigma));
        const cplx e = std::exp(I * kPi * sigma);
        const cplx shift = t < kPi ? e : 1.0 / e;
        return amp * std::exp(I * sigma * t) * (beta_q + static_cast<double>(rho) * beta_mq * shift) / normalizer;
    }
    case 3: {
        const double step = t < kPi ? 1.0 : -1.0;
        return (c_limit + I * kPi * beta_q * step) / normalizer;
    }
    default: return 1.0;
    }
}

cplx FourierProfile::partial_sum(double t, int upsilon) const
{
    auto x_k = [&](int k, double shift) {
        return (beta_q + static_cast<double>(parity(k) * rho) * beta_mq) / (k - shift);
    };
    cplx s = 0.0;
    switch (scenario) {
    case 1:
        for (int k = -upsilon; k <= upsilon; ++k) s += x_k(k, sigma) * std::exp(I * (k * t));
        return s / normalizer;
    case 3: {
        const int sig = static_cast<int>(sigma);
        s = c_limit;
        for (int j = 1; j <= upsilon; ++j)
            s += x_k(sig + j, sig) * std::exp(I * (j * t)) + x_k(sig - j, sig) * std::exp(-I * (j * t));
        return s / normalizer;
    }
    default: return 1.0;
    }
}

FourierProfile fourier_profile(const ScenarioClassification& cls)
{
    FourierProfile p;
    p.scenario = cls.scenario;
    p.sigma = cls.sigma;
    p.beta_q = cls.beta_q;
    p.beta_mq = cls.beta_mq;
    p.rho = cls.rho;
    p.c_limit = cls.c_limit;
    std::tie(p.m_plus, p.m_minus) = scenario_weights(cls);
    if (cls.scenario == 1 || cls.scenario == 3) p.normalizer = std::sqrt(series_constant(cls).closed_form_sq);
    return p;
}

std::vector<CarlesonRow> carleson_check(const ScenarioClassification& cls, const std::vector<int>& upsilons, int grid,
                                        double exclusion)
{
    if (cls.scenario != 1 && cls.scenario != 3) throw std::invalid_argument("carleson_check: scenario 1 or 3 required");
    const FourierProfile prof = fourier_profile(cls);
    std::vector<double> ts;
    for (int i = 0; i < grid; ++i) {
        const double t = 2.0 * kPi * (i + 0.5) / grid;
        if (t < exclusion || std::abs(t - kPi) < exclusion || 2.0 * kPi - t < exclusion) continue;
        ts.push_back(t);
    }
    std::vector<CarlesonRow> rows;
    for (int u : upsilons) {
        double worst = 0.0;
        for (double t : ts) worst = std::max(worst, std::abs(prof.partial_sum(t, u) - prof.eval(t)));
        rows.push_back({u, worst});
    }
    return rows;
}

}  // namespace scatterlab
