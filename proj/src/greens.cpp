#include "scatterlab/greens.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "scatterlab/quadrature.hpp"
#include "scatterlab/specfun.hpp"

namespace scatterlab {

namespace {

constexpr double kEdge = 1e-12;
const cplx I(0.0, 1.0);

int parity(int n) { return n % 2 == 0 ? 1 : -1; }

double multiplicity_real(int d, double x)
{
    // (2x+d-1) Gamma(x+d-1) / (Gamma(d) Gamma(x+1)); polynomial in x for integer d
    return (2.0 * x + d - 1) * std::exp(std::lgamma(x + d - 1) - std::lgamma(d) - std::lgamma(x + 1.0));
}

}  // namespace

SemiclassicalPoint SemiclassicalPoint::from_ell_sigma(int d, int ell, double sigma)
{
    if (d < 2) throw std::invalid_argument("SemiclassicalPoint: d must be >= 2");
    if (ell < 0 || !(sigma >= 0.0) || !(sigma < 1.0))
        throw std::invalid_argument("SemiclassicalPoint: need l >= 0 and sigma in [0, 1)");
    if (sigma > 1.0 - kEdge) {
        ++ell;
        sigma = 0.0;
    }
    if (sigma < kEdge) sigma = 0.0;
    if (ell + sigma <= 0.0) throw std::invalid_argument("SemiclassicalPoint: h^{-2} must be positive");
    SemiclassicalPoint p;
    p.d = d;
    p.ell_n = ell;
    p.sigma_n = sigma;
    p.rho = parity(ell);
    p.on_spectrum = sigma == 0.0;
    p.h = 1.0 / std::sqrt(p.h_inv_sq());
    return p;
}

SemiclassicalPoint SemiclassicalPoint::from_h(int d, double h)
{
    if (!(h > 0.0)) throw std::invalid_argument("SemiclassicalPoint: h must be positive");
    const double a = 0.5 * (d - 1);
    const double x = -a + std::sqrt(a * a + 1.0 / (h * h));
    const int ell = static_cast<int>(std::floor(x));
    SemiclassicalPoint p = from_ell_sigma(d, ell, std::clamp(x - ell, 0.0, std::nextafter(1.0, 0.0)));
    p.h = h;
    return p;
}

GreensSpec GreensSpec::pair(const SphereContext& ctx, const Point& q, cplx beta_q, cplx beta_mq,
                            const SemiclassicalPoint& pt, int ell_max)
{
    return GreensSpec{ctx, {q, antipode(q)}, {beta_q, beta_mq}, pt, ell_max};
}

GreensSpec GreensSpec::single(const SphereContext& ctx, const Point& q, const SemiclassicalPoint& pt, int ell_max)
{
    return GreensSpec{ctx, {q}, {1.0}, pt, ell_max};
}

int default_ell_max(int ell_n) { return std::max(4 * ell_n, ell_n + 10000); }

std::vector<std::pair<int, int>> group_scatterers(const std::vector<Point>& q)
{
    const int n = static_cast<int>(q.size());
    std::vector<int> partner(static_cast<std::size_t>(n), -2);
    std::vector<std::pair<int, int>> groups;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j)
            if (geodesic_distance(q[i], q[j]) < 1e-12)
                throw std::invalid_argument("group_scatterers: duplicate scatterers");
        if (partner[i] != -2) continue;
        partner[i] = -1;
        for (int j = i + 1; j < n; ++j)
            if (partner[j] == -2 && is_antipodal(q[i], q[j])) {
                partner[i] = j;
                partner[j] = i;
                break;
            }
        groups.emplace_back(i, partner[i]);
    }
    return groups;
}

// --- GreensFunction ------------------------------------------------------

namespace {

// Sum over l in `ells` (or all l when null) of the Gram form across groups.
double gram_sum(const std::vector<ZonalExpansion>& parts, const std::vector<int>* ells)
{
    const int lmax = parts.front().ell_max();
    std::vector<char> mask;
    if (ells) {
        mask.assign(static_cast<std::size_t>(lmax) + 1, 0);
        for (int l : *ells)
            if (l >= 0 && l <= lmax) mask[l] = 1;
    }
    double s = 0.0;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (int l = 0; l <= lmax; ++l)
            if (!ells || mask[l]) s += std::norm(parts[a].coeffs[l]);
        for (std::size_t b = 0; b < a; ++b) {
            const double c = cos_distance(parts[a].center, parts[b].center);
            const auto r = gegenbauer_normalized_all(parts[a].ctx.alpha(), lmax, c);
            for (int l = 0; l <= lmax; ++l)
                if (!ells || mask[l]) s += 2.0 * std::real(std::conj(parts[a].coeffs[l]) * parts[b].coeffs[l]) * r[l];
        }
    }
    return s;
}

}  // namespace

double GreensFunction::truncated_norm_sq() const
{
    return parts.empty() ? 0.0 : gram_sum(parts, nullptr);
}

double GreensFunction::norm() const { return std::sqrt(norm_sq()); }

double GreensFunction::projected_norm_sq(const std::vector<int>& ells) const
{
    return parts.empty() ? 0.0 : gram_sum(parts, &ells);
}

double GreensFunction::complement_norm_sq(const std::vector<int>& ells) const
{
    if (parts.empty()) return 0.0;
    std::vector<int> rest;
    std::vector<char> in(static_cast<std::size_t>(ell_max()) + 1, 0);
    for (int l : ells)
        if (l >= 0 && l <= ell_max()) in[l] = 1;
    for (int l = 0; l <= ell_max(); ++l)
        if (!in[l]) rest.push_back(l);
    return gram_sum(parts, &rest) + tail_norm_sq;
}

const ZonalExpansion& GreensFunction::expansion() const
{
    if (parts.size() != 1) throw std::logic_error("GreensFunction: not a single-center function");
    return parts.front();
}

GreensFunction build_greens(const GreensSpec& spec)
{
    const SphereContext& ctx = spec.ctx;
    const SemiclassicalPoint& pt = spec.point;
    if (spec.scatterers.empty() || spec.scatterers.size() != spec.beta.size())
        throw std::invalid_argument("build_greens: scatterers and beta must be nonempty and aligned");
    if (pt.d != ctx.d) throw std::invalid_argument("build_greens: dimension mismatch");
    for (const Point& q : spec.scatterers)
        if (q.ambient_dim() != ctx.d + 1) throw std::invalid_argument("build_greens: point dimension mismatch");
    const int lmax = spec.ell_max > 0 ? spec.ell_max : default_ell_max(pt.ell_n);
    if (lmax < 2 * pt.ell_n) throw std::invalid_argument("build_greens: ell_max must be >= 2 l_n");

    const auto groups = group_scatterers(spec.scatterers);
    const int ng = static_cast<int>(groups.size());
    auto group_b = [&](int g, int l) {
        const auto [i, j] = groups[g];
        return spec.beta[i] + (j >= 0 ? static_cast<double>(parity(l)) * spec.beta[j] : cplx(0.0));
    };

    if (pt.on_spectrum) {
        // Sum_q beta_q Z_{l_h}^q must vanish: test its Gram norm.
        const int l = pt.ell_n;
        double gram = 0.0, scale = 0.0;
        for (int a = 0; a < ng; ++a) {
            const cplx ba = group_b(a, l);
            scale += std::norm(spec.beta[groups[a].first]);
            if (groups[a].second >= 0) scale += std::norm(spec.beta[groups[a].second]);
            for (int b = 0; b < ng; ++b) {
                const double r = gegenbauer_normalized(
                    ctx.alpha(), l, cos_distance(spec.scatterers[groups[a].first], spec.scatterers[groups[b].first]));
                gram += std::real(std::conj(ba) * group_b(b, l)) * (a == b ? 1.0 : r);
            }
        }
        if (std::sqrt(std::max(gram, 0.0)) > 1e-10 * std::sqrt(std::max(scale, 1e-300)))
            throw std::invalid_argument("build_greens: beta inadmissible for on-spectrum h");
    }

    GreensFunction out;
    out.ctx = ctx;
    out.point = pt;
    double tail_weight = 0.0;
    for (int g = 0; g < ng; ++g) {
        ZonalExpansion e{ctx, spec.scatterers[groups[g].first], std::vector<cplx>(static_cast<std::size_t>(lmax) + 1)};
        for (int l = 0; l <= lmax; ++l) {
            if (pt.on_spectrum && l == pt.ell_n) continue;
            e.coeffs[l] = group_b(g, l) * std::sqrt(zonal_norm_sq(ctx, l)) / pt.spectral_gap(l);
        }
        out.parts.push_back(std::move(e));
        const auto [i, j] = groups[g];
        tail_weight += std::norm(spec.beta[i]) + (j >= 0 ? std::norm(spec.beta[j]) : 0.0);
    }

    // Parity-averaged remainder: integral over x > lmax + 1/2 with u = 1/x.
    const double x0 = lmax + 0.5;
    const QuadratureRule r = gauss_legendre(32, 0.0, 1.0 / x0);
    double tail = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double x = 1.0 / r.nodes[k];
        const double gap = (x - pt.ell_n - pt.sigma_n) * (x + pt.ell_n + pt.sigma_n + ctx.d - 1);
        tail += r.weights[k] * multiplicity_real(ctx.d, x) / ctx.vol_sphere / (gap * gap) * x * x;
    }
    out.tail_norm_sq = tail_weight * tail;
    return out;
}

// --- classification ------------------------------------------------------

namespace {

std::pair<cplx, cplx> renormalized(cplx a, cplx b)
{
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (!(n > 0.0)) throw ClassificationError("classify: beta must be nonzero");
    return {a / n, b / n};
}

// Projection onto beta_q + s beta_{-q} = 0, renormalized.
std::pair<cplx, cplx> project_null(cplx a, cplx b, int s)
{
    const cplx t = 0.5 * (a - static_cast<double>(s) * b);
    if (std::abs(t) == 0.0) throw ClassificationError("classify: limit beta degenerates to zero");
    return renormalized(t, -static_cast<double>(s) * t);
}

}  // namespace

ScenarioClassification classify(const std::vector<SequenceElement>& seq_in, const ClassifyOptions& opt)
{
    const int n = static_cast<int>(seq_in.size());
    if (n < 3) throw std::invalid_argument("classify: need at least 3 sequence elements");
    std::vector<SequenceElement> seq = seq_in;
    for (auto& e : seq) std::tie(e.beta_q, e.beta_mq) = renormalized(e.beta_q, e.beta_mq);

    const int rho = seq.front().point.rho;
    for (const auto& e : seq)
        if (e.point.rho != rho) throw ClassificationError("classify: mixed parity of l_n");

    ScenarioClassification cls;
    cls.rho = rho;
    cls.last = seq.back();

    int on = 0;
    for (const auto& e : seq) on += e.point.on_spectrum ? 1 : 0;
    if (on == n) {
        for (const auto& e : seq)
            if (std::abs(e.beta_q + static_cast<double>(rho) * e.beta_mq) > opt.admissibility_tol)
                throw ClassificationError("classify: on-spectrum sequence with inadmissible beta");
        cls.scenario = 4;
        cls.sigma = 0.0;
        std::tie(cls.beta_q, cls.beta_mq) = project_null(seq.back().beta_q, seq.back().beta_mq, rho);
        return cls;
    }
    if (on != 0) throw ClassificationError("classify: sequence mixes on- and off-spectrum elements");

    const int tail = std::max(3, n / 3);
    std::vector<const SequenceElement*> t;
    for (int i = n - tail; i < n; ++i) t.push_back(&seq[i]);

    auto edge = [](double s) { return std::min(s, 1.0 - s); };
    bool boundary = edge(t.back()->point.sigma_n) <= opt.boundary_band;
    const bool low = t.back()->point.sigma_n < 0.5;
    for (std::size_t i = 1; i < t.size() && boundary; ++i) {
        const double a = t[i - 1]->point.sigma_n, b = t[i]->point.sigma_n;
        if (!(edge(b) < edge(a)) || (b < 0.5) != low || (a < 0.5) != low) boundary = false;
    }

    const auto& last = *t.back();
    if (!boundary) {
        double lo = 1.0, hi = 0.0;
        for (const auto* e : t) {
            lo = std::min(lo, e->point.sigma_n);
            hi = std::max(hi, e->point.sigma_n);
        }
        if (hi - lo > opt.sigma_oscillation)
            throw ClassificationError("classify: sigma_n does not converge (oscillation " + std::to_string(hi - lo) + ")");
        cls.scenario = 1;
        cls.sigma = last.point.sigma_n;
        cls.beta_q = last.beta_q;
        cls.beta_mq = last.beta_mq;
        return cls;
    }

    const int sigma = low ? 0 : 1;
    const int sgn = parity(sigma) * rho;
    const cplx b = last.beta_q + static_cast<double>(sgn) * last.beta_mq;
    const double gap = sigma - last.point.sigma_n;
    cls.sigma = sigma;
    cls.ratio_last = std::abs(b) / std::abs(gap);
    if (cls.ratio_last > opt.ratio_threshold) {
        cls.scenario = 2;
        cls.beta_q = last.beta_q;
        cls.beta_mq = last.beta_mq;
        return cls;
    }
    cls.scenario = 3;
    cls.c_limit = b / gap;
    std::tie(cls.beta_q, cls.beta_mq) = project_null(last.beta_q, last.beta_mq, sgn);
    return cls;
}

// --- constants -----------------------------------------------------------

double SeriesConstant::value() const { return std::sqrt(value_sq); }

namespace {

// sum over k in Z \ {skip} of |beta_q + (-1)^k rho beta_{-q}|^2 / (k - sigma)^2.
// Explicit partial sum on |k| <= K plus Euler-Maclaurin tails per parity class.
SeriesConstant lattice_series(double sigma, cplx bq, cplx bmq, int rho, int skip, bool use_skip)
{
    constexpr int K = 2000;
    const double even = std::norm(bq + static_cast<double>(rho) * bmq);
    const double odd = std::norm(bq - static_cast<double>(rho) * bmq);
    SeriesConstant out;
    double s = 0.0;
    for (int k = -K; k <= K; ++k) {
        if (use_skip && k == skip) continue;
        const double x = k - sigma;
        s += (k % 2 == 0 ? even : odd) / (x * x);
    }
    double tail = 0.0;
    for (int first : {K + 1, K + 2}) {
        const double w = first % 2 == 0 ? even : odd;
        tail += 0.25 * w * hurwitz_zeta2(0.5 * (first - sigma));  // k = first, first+2, ...
        tail += 0.25 * w * hurwitz_zeta2(0.5 * (first + sigma));  // k = -first, -first-2, ...
    }
    out.value_sq = s + tail;
    out.tail_sq = tail;
    return out;
}

}  // namespace

SeriesConstant series_constant(const ScenarioClassification& cls)
{
    const double pi2 = std::numbers::pi * std::numbers::pi;
    switch (cls.scenario) {
    case 1: {
        SeriesConstant c = lattice_series(cls.sigma, cls.beta_q, cls.beta_mq, cls.rho, 0, false);
        const cplx e = std::exp(I * std::numbers::pi * cls.sigma);
        const double r = static_cast<double>(cls.rho);
        const double avg = 0.5 * (std::norm(cls.beta_q + r * cls.beta_mq * e) + std::norm(cls.beta_q + r * cls.beta_mq / e));
        const double s = std::sin(std::numbers::pi * cls.sigma);
        c.closed_form_sq = avg > 0.0 ? pi2 / (s * s) * avg : 0.0;
        return c;
    }
    case 3: {
        const int sig = static_cast<int>(cls.sigma);
        SeriesConstant c = lattice_series(sig, cls.beta_q, cls.beta_mq, cls.rho, sig, true);
        c.value_sq += std::norm(cls.c_limit);
        c.closed_form_sq = std::norm(cls.c_limit) + pi2 * std::norm(cls.beta_q);
        return c;
    }
    case 4: {
        SeriesConstant c = lattice_series(0.0, cls.beta_q, cls.beta_mq, cls.rho, 0, true);
        c.closed_form_sq = pi2 * std::norm(cls.beta_q);
        return c;
    }
    case 2:
        throw std::invalid_argument("series_constant: scenario 2 has no series constant");
    default:
        throw std::invalid_argument("series_constant: unknown scenario");
    }
}

// --- windows, quasimodes -------------------------------------------------

std::vector<int> scenario_window(const ScenarioClassification& cls, const SemiclassicalPoint& pt, int upsilon)
{
    if (upsilon < 0) throw std::invalid_argument("scenario_window: Upsilon must be nonnegative");
    std::vector<int> w;
    auto range = [&](int c, int r, int skip) {
        for (int l = std::max(0, c - r); l <= c + r; ++l)
            if (l != skip) w.push_back(l);
    };
    const int sig = static_cast<int>(cls.sigma);
    switch (cls.scenario) {
    case 1: range(pt.ell_n, upsilon, -1); break;
    case 2: w.push_back(pt.ell_n + sig); break;
    case 3: range(pt.ell_n + sig, 2 * upsilon - 1, -1); break;
    case 4: range(pt.ell_n, 2 * upsilon - 1, pt.ell_n); break;
    default: throw std::invalid_argument("scenario_window: unknown scenario");
    }
    return w;
}

double window_norm(const GreensFunction& g, const ScenarioClassification& cls, int upsilon)
{
    return g.projected_norm_sq(scenario_window(cls, g.point, upsilon));
}

double normalized_window_norm(const GreensFunction& g, const ScenarioClassification& cls, int upsilon)
{
    const int d = g.ctx.d;
    return window_norm(g, cls, upsilon) * 2.0 * (d - 1) * g.ctx.vol_sphere * std::pow(g.point.h, d - 3);
}

ZonalExpansion quasimode_reference(const SphereContext& ctx, const Point& q, const ScenarioClassification& cls,
                                   const SemiclassicalPoint& pt, int upsilon)
{
    const int lmax = pt.ell_n + 2 * std::max(upsilon, 1) + 2;
    ZonalExpansion r{ctx, q, std::vector<cplx>(static_cast<std::size_t>(lmax) + 1)};
    const double rho = cls.rho;
    auto x_k = [&](int k, double shift) {
        return (cls.beta_q + static_cast<double>(parity(k)) * rho * cls.beta_mq) / (k - shift);
    };
    auto put = [&](int k, cplx v) {
        const int l = pt.ell_n + k;
        if (l >= 0) r.coeffs[l] += v;
    };
    const int sig = static_cast<int>(cls.sigma);
    switch (cls.scenario) {
    case 1: {
        const double c = series_constant(cls).value();
        for (int k = -upsilon; k <= upsilon; ++k) put(k, x_k(k, cls.sigma) / c);
        break;
    }
    case 2: put(sig, 1.0); break;
    case 3: {
        const double c = series_constant(cls).value();
        put(sig, cls.c_limit / c);
        for (int j = 1; j <= 2 * upsilon - 1; ++j) {
            put(sig + j, x_k(sig + j, sig) / c);
            put(sig - j, x_k(sig - j, sig) / c);
        }
        break;
    }
    case 4: {
        const double c = series_constant(cls).value();
        for (int k = 1; k <= 2 * upsilon - 1; ++k) {
            put(k, x_k(k, 0.0) / c);
            put(-k, x_k(-k, 0.0) / c);
        }
        break;
    }
    default: throw std::invalid_argument("quasimode_reference: unknown scenario");
    }
    return r;
}

QuasimodeResidual quasimode_residual(const GreensSpec& spec, const ScenarioClassification& cls, int upsilon)
{
    const GreensFunction g = build_greens(spec);
    const ZonalExpansion& ge = g.expansion();
    const double gn = g.norm();
    const ZonalExpansion ref = quasimode_reference(spec.ctx, ge.center, cls, spec.point, upsilon);
    const cplx overlap = inner_product(ref, ge) / gn;
    const double rr = ref.norm_sq();

    QuasimodeResidual out;
    out.residual = std::sqrt(std::max(0.0, 1.0 + rr - 2.0 * std::abs(overlap)));
    out.raw_residual = std::sqrt(std::max(0.0, 1.0 + rr - 2.0 * std::real(overlap)));
    const SemiclassicalPoint& pt = spec.point;
    out.sigma_gap = std::abs(pt.sigma_n - cls.sigma);
    std::pair<cplx, cplx> b{spec.beta[0], spec.beta.size() > 1 ? spec.beta[1] : cplx(0.0)};
    const double bn = std::sqrt(std::norm(b.first) + std::norm(b.second));
    out.beta_gap = std::sqrt(std::norm(b.first / bn - cls.beta_q) + std::norm(b.second / bn - cls.beta_mq));
    if (cls.scenario == 2) {
        const double sgn = parity(static_cast<int>(cls.sigma)) * cls.rho;
        out.upsilon_h = pt.h;
        out.upsilon_term = out.sigma_gap / std::abs((b.first + sgn * b.second) / bn);
    } else {
        out.upsilon_h = upsilon * pt.h;
        out.upsilon_term = upsilon > 0 ? 1.0 / std::sqrt(static_cast<double>(upsilon)) : 1.0;
    }
    return out;
}

// --- weights -------------------------------------------------------------

std::pair<double, double> scenario1_weights(double sigma, cplx beta_q, cplx beta_mq, int rho)
{
    const cplx e = std::exp(I * std::numbers::pi * sigma);
    const double r = rho;
    const double p = std::norm(beta_q + r * beta_mq * e);
    const double m = std::norm(beta_q + r * beta_mq / e);
    const double avg = 0.5 * (p + m);
    if (!(avg > 0.0)) throw std::invalid_argument("scenario1_weights: degenerate beta");
    return {p / avg, m / avg};
}

std::pair<double, double> scenario_weights(const ScenarioClassification& cls)
{
    switch (cls.scenario) {
    case 1: return scenario1_weights(cls.sigma, cls.beta_q, cls.beta_mq, cls.rho);
    case 3: {
        const double pi = std::numbers::pi;
        const double p = std::norm(cls.c_limit + I * pi * cls.beta_q);
        const double m = std::norm(cls.c_limit - I * pi * cls.beta_q);
        const double denom = std::norm(cls.c_limit) + pi * pi * std::norm(cls.beta_q);
        return {p / denom, m / denom};
    }
    case 2:
    case 4: return {1.0, 1.0};
    default: throw std::invalid_argument("scenario_weights: unknown scenario");
    }
}

std::pair<cplx, cplx> choose_beta_for_weights(double sigma, int rho, double m_plus, double m_minus)
{
    if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("choose_beta_for_weights: sigma must lie in (0,1)");
    if (rho != 1 && rho != -1) throw std::invalid_argument("choose_beta_for_weights: rho must be +-1");
    if (!(m_plus >= 0.0) || !(m_minus >= 0.0) || std::abs(0.5 * (m_plus + m_minus) - 1.0) > 1e-12)
        throw std::invalid_argument("choose_beta_for_weights: weights violate (m+ + m-)/2 = 1");
    // Solve beta_q + rho beta_{-q} e^{+-i pi sigma} = sqrt(m_+-).
    const double u = std::sqrt(m_plus), v = std::sqrt(m_minus);
    const cplx e = std::exp(I * std::numbers::pi * sigma);
    const cplx b = (u - v) / (2.0 * I * std::sin(std::numbers::pi * sigma));
    const cplx a = u - b * e;
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return {a / n, static_cast<double>(rho) * b / n};
}

}  // namespace scatterlab
