#include "vpspec/green.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vpspec {

namespace {

constexpr Complex kI{0.0, 1.0};

double smoothstep_down(double x) { // C^2, 1 at x<=0, 0 at x>=1
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

// oscillation frequency of the quartic model lambda^4 + tau0^2 lambda^2 =
// k^2 tau1^2, used to center the refinement band when no root is tracked
double model_frequency(double tau0_sq, double tau1_sq, double k) {
    double s = std::sqrt(tau0_sq * tau0_sq + 4.0 * tau1_sq * k * k);
    return std::sqrt(0.5 * (tau0_sq + s));
}

} // namespace

GreenContext::GreenContext(const EquilibriumProfile& p, double continuation_step,
                           double continuation_cap)
    : profile_(p) {
    kappa0_ = survival_threshold(p);
    tau0_sq_ = moment_tau(p, 0);
    tau1_sq_ = moment_tau(p, 1);
    tau2_sq_ = moment_tau(p, 2);
    curve_ = damped_continuation(p, continuation_step, continuation_cap);
}

bool GreenContext::has_roots(double k) const {
    if (profile_.compact() && k <= kappa0_ * (1 + 1e-12)) return true;
    double base = profile_.compact() ? kappa0_ : 0.0;
    return !curve_.k.empty() && k <= base + curve_.delta0 + 1e-12;
}

Complex GreenContext::lambda_plus(double k) const {
    if (profile_.compact() && k <= kappa0_ * (1 + 1e-12)) {
        BranchPoint b = langmuir_branch(profile_, std::min(k, kappa0_));
        return kI * b.tau_star;
    }
    if (!has_roots(k))
        throw OutOfRange("lambda_+ is tracked only up to kappa0 + delta0");
    // seed Newton from the nearest continuation node
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve_.k.size(); ++i) {
        double d = std::abs(curve_.k[i] - k);
        if (d < bd) { bd = d; best = i; }
    }
    DampedRoot r = damped_root(profile_, k, curve_.lambda[best]);
    return r.lambda;
}

double GreenContext::taper_end() const {
    double base = profile_.compact() ? kappa0_ : 0.0;
    return base + std::min(curve_.delta0, 1.0);
}

double GreenContext::taper(double k) const {
    double base = profile_.compact() ? kappa0_ : 0.0;
    double start = base + 0.5 * curve_.delta0;
    double end = taper_end();
    if (end <= start) return k <= end ? 1.0 : 0.0;
    return smoothstep_down((k - start) / (end - start));
}

Complex residue_weight(const GreenContext& ctx, double k) {
    double tap = ctx.taper(k);
    if (tap == 0.0 || !ctx.has_roots(k)) return {0.0, 0.0};
    Complex lam = ctx.lambda_plus(k);
    Complex dD = eval_D_deriv(ctx.profile(), lam, k, 1);
    if (std::abs(dD) < 1e-8) throw DegenerateRoot("dD/dlambda < 1e-8 at the root");
    return tap / dD;
}

double green_oscillatory(const GreenDecomposition& g, double t) {
    if (!g.has_poles) return 0.0;
    return 2.0 * (g.a_plus * std::exp(g.lambda_plus * t)).real();
}

namespace {

// Bromwich quadrature runs straight up the imaginary axis for every k.  The
// tracked dispersion poles lambda_pm are removed exactly (their residues are
// known), and a pole-free rational model
//   M(lambda) = sum_pm a_pm/(lambda - lambda_pm)   [tracked roots only]
//             + sum_{m=1..4} B_m/(lambda + q)^m
// is matched to the lambda^{-1..-4} expansion of 1/D - 1 so the integrand
// decays like tau^-5; the inverse transform of M is exact:
//   sum_pm a_pm e^{lambda_pm t} + (B1 + B2 t + B3 t^2/2 + B4 t^3/6) e^{-qt}.
// The subtraction leaves no feature at the scale of Re(lambda_pm), so the
// contour never needs to detour and the essential-spectrum branch points at
// +-ik Upsilon* are the only delicate points; panel edges are aligned there.
struct AxisModel {
    bool tracked = false;
    Complex lam, a;        // untapered residue
    double q = 1.0;
    double B1 = 0, B2 = 0, B3 = 0, B4 = 0;
    Complex b_reg;         // regular part of 1/D at the pole

    Complex pole_part(Complex x) const {
        if (!tracked) return {0.0, 0.0};
        return a / (x - lam) + std::conj(a) / (x - std::conj(lam));
    }
    Complex tail_part(Complex x) const {
        Complex d = x + q;
        return ((((B4 / d) + B3) / d + B2) / d + B1) / d;
    }
    double transform(double t) const {
        double v = (B1 + t * (B2 + t * (0.5 * B3 + t * B4 / 6.0))) * std::exp(-q * t);
        if (tracked) v += 2.0 * (a * std::exp(lam * t)).real();
        return v;
    }
};

AxisModel make_axis_model(const GreenContext& ctx, const GreenDecomposition& g) {
    AxisModel m;
    const double k = g.k;
    const double tau0_sq = ctx.tau0_sq();
    const double tau1_sq = ctx.tau1_sq();
    m.q = std::max(1.0, std::sqrt(tau0_sq));
    double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
    if (g.has_poles) {
        m.tracked = true;
        m.lam = g.lambda_plus;
        m.a = g.taper_value > 0.0
                  ? g.a_plus / g.taper_value
                  : 1.0 / eval_D_deriv(ctx.profile(), g.lambda_plus, k, 1);
        Complex d2 = eval_D_deriv(ctx.profile(), g.lambda_plus, k, 2);
        Complex d1 = 1.0 / m.a;
        m.b_reg = -d2 / (2.0 * d1 * d1);
        c1 = 2.0 * m.a.real();
        c2 = 2.0 * (m.a * m.lam).real();
        c3 = 2.0 * (m.a * m.lam * m.lam).real();
        c4 = 2.0 * (m.a * m.lam * m.lam * m.lam).real();
    }
    const double q = m.q;
    m.B1 = -c1;
    m.B2 = -tau0_sq - c2 + q * m.B1;
    m.B3 = -c3 + 2.0 * q * m.B2 - q * q * m.B1;
    m.B4 = tau0_sq * tau0_sq + tau1_sq * k * k - c4 + 3.0 * q * m.B3 -
           3.0 * q * q * m.B2 + q * q * q * m.B1;
    return m;
}

void remainder_axis(const GreenContext& ctx, GreenDecomposition& g,
                    const std::vector<double>& t_grid) {
    const EquilibriumProfile& p = ctx.profile();
    const double k = g.k;
    AxisModel model = make_axis_model(ctx, g);

    auto G1 = [&](double tau) -> Complex {
        Complex lam(0.0, tau);
        Complex v;
        if (model.tracked && std::abs(lam - model.lam) < 1e-7)
            v = model.b_reg - 1.0 - std::conj(model.a) / (lam - std::conj(model.lam));
        else
            v = 1.0 / eval_D(p, lam, k).value - 1.0 - model.pole_part(lam);
        return v - model.tail_part(lam);
    };

    double t_span = 1.0;
    for (double t : t_grid) t_span = std::max(t_span, t);

    // truncation for a ~1e-10 static tail of |G1| ~ C5 / tau^5
    const double q = model.q;
    double C5 = std::abs(q * q * q * q * model.B1 - 4 * q * q * q * model.B2 +
                         6 * q * q * model.B3 - 4 * q * model.B4) +
                10.0;
    // the t >= 2 truncation error is handled by an integration-by-parts
    // endpoint term; the cap only needs the static tail below ~1e-7
    double tau_max = std::max({20.0, 3.0 * std::sqrt(ctx.tau0_sq()),
                               std::min(std::pow(C5 / 4e-10, 0.25), 80.0)});

    // breakpoints: essential-spectrum edge and the pole neighbourhood
    const double edge = k * p.support_cut();
    double tau_pole;
    double feature;
    if (model.tracked) {
        tau_pole = model.lam.imag();
        feature = std::max(std::abs(tau_pole - edge), 1e-3);
    } else {
        tau_pole = model_frequency(ctx.tau0_sq(), ctx.tau1_sq(), k);
        feature = 0.05;
        try {
            feature = std::max(feature, std::abs(landau_rate_asymptotic(p, k)));
        } catch (...) {
        }
    }

    struct Span {
        double a, b, max_len;
    };
    std::vector<double> cuts = {0.0, tau_max};
    auto add_cut = [&](double x) {
        if (x > 1e-9 && x < tau_max - 1e-9) cuts.push_back(x);
    };
    double band_lo = tau_pole - 0.2, band_hi = tau_pole + 0.2;
    add_cut(edge);
    add_cut(band_lo);
    add_cut(band_hi);
    add_cut(edge - 0.08);
    add_cut(edge + 0.08);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Span> spans;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-12) continue;
        double len = 1e9; // phase-resolved default
        double mid = 0.5 * (a + b);
        if (mid > band_lo && mid < band_hi) len = std::max(feature / 5.0, 5e-4);
        if (mid > edge - 0.08 && mid < edge + 0.08) len = std::min(len, 0.01);
        spans.push_back({a, b, len});
    }

    std::vector<double> seg_tau, seg_w;
    std::vector<Complex> seg_vals;
    for (const auto& s : spans) {
        double phase = std::max(t_span, s.max_len < 1e8 ? 2.5 / s.max_len : 0.0);
        quad::Panels pn = quad::build_panels(s.a, s.b, phase);
        for (std::size_t i = 0; i < pn.nodes.size(); ++i) {
            seg_tau.push_back(pn.nodes[i]);
            seg_w.push_back(pn.weights[i]);
            seg_vals.push_back(G1(pn.nodes[i]));
        }
    }

    ContourSpec c;
    c.upsilon_star = p.support_cut();
    c.tau_center = tau_pole;
    c.radius = 0.0;
    c.tau_max = tau_max;
    c.segment_nodes = seg_tau.size();
    c.arc_nodes = 0;
    g.contour = c;

    const Complex a_excess =
        model.tracked ? (model.a - g.a_plus) : Complex(0.0, 0.0);
    const Complex g_end = G1(tau_max);

    g.remainder.resize(t_grid.size());
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
        double t = t_grid[it];
        Complex acc = 0.0;
        for (std::size_t i = 0; i < seg_tau.size(); ++i)
            acc += seg_w[i] * seg_vals[i] * std::exp(Complex(0.0, seg_tau[i] * t));
        if (t >= 2.0) {
            // first integration-by-parts term of the truncated tail
            acc += -g_end * std::exp(Complex(0.0, tau_max * t)) / Complex(0.0, t);
        }
        double v = 2.0 * (acc / (2.0 * M_PI)).real();
        // exact transform of the subtracted model, minus the tapered part
        v += (model.B1 + t * (model.B2 + t * (0.5 * model.B3 + t * model.B4 / 6.0))) *
             std::exp(-model.q * t);
        if (model.tracked) v += 2.0 * (a_excess * std::exp(model.lam * t)).real();
        g.remainder[it] = v;
    }
}

} // namespace

GreenDecomposition green_remainder(const GreenContext& ctx, double k,
                                   const std::vector<double>& t_grid) {
    if (!(k > 0)) throw OutOfRange("wave number must be positive");
    GreenDecomposition g;
    g.k = k;
    g.t = t_grid;
    g.has_poles = ctx.has_roots(k);
    if (g.has_poles) {
        g.lambda_plus = ctx.lambda_plus(k);
        g.taper_value = ctx.taper(k);
        g.a_plus = residue_weight(ctx, k);
    }
    remainder_axis(ctx, g, t_grid);
    return g;
}

GreenDecomposition resample_remainder(const GreenDecomposition& g,
                                      const std::vector<double>& t_fine) {
    const std::size_t n = g.t.size();
    if (n < 4) throw OutOfRange("coarse remainder grid too short to resample");
    GreenDecomposition out = g;
    out.t = t_fine;
    out.remainder.assign(t_fine.size(), 0.0);
    for (std::size_t i = 0; i < t_fine.size(); ++i) {
        double t = t_fine[i];
        // locate the bracketing coarse interval (grids are monotone)
        std::size_t j = std::upper_bound(g.t.begin(), g.t.end(), t) - g.t.begin();
        std::size_t c = std::min(std::max<std::size_t>(j, 2), n - 2);
        const double* xs = &g.t[c - 2];
        const double* ys = &g.remainder[c - 2];
        double acc = 0.0;
        for (int a = 0; a < 4; ++a) {
            double w = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) w *= (t - xs[b]) / (xs[a] - xs[b]);
            acc += w * ys[a];
        }
        out.remainder[i] = acc;
    }
    return out;
}

std::vector<double> volterra_density(const EquilibriumProfile& p, double k,
                                     const std::vector<double>& source, double h) {
    const std::size_t n = source.size();
    std::vector<double> rho(n, 0.0);
    if (n == 0) return rho;
    std::vector<double> K(n);
    for (std::size_t i = 0; i < n; ++i) K[i] = volterra_kernel(p, k, i * h);
    rho[0] = source[0];
    for (std::size_t m = 1; m < n; ++m) {
        double conv = 0.5 * K[m] * rho[0];
        for (std::size_t j = 1; j < m; ++j) conv += K[m - j] * rho[j];
        rho[m] = (source[m] + h * conv) / (1.0 - 0.5 * h * K[0]);
    }
    return rho;
}

std::vector<double> green_density(const GreenDecomposition& g,
                                  const std::vector<double>& source, double h) {
    const std::size_t n = source.size();
    if (g.remainder.size() < n)
        throw OutOfRange("green decomposition grid shorter than the source trace");
    std::vector<double> rho(n, 0.0);
    std::vector<double> kernel(n);
    for (std::size_t i = 0; i < n; ++i)
        kernel[i] = green_oscillatory(g, i * h) + g.remainder[i];
    for (std::size_t m = 0; m < n; ++m) {
        double conv = 0.0;
        if (m >= 1) {
            conv = 0.5 * (kernel[m] * source[0] + kernel[0] * source[m]);
            for (std::size_t j = 1; j < m; ++j) conv += kernel[m - j] * source[j];
        }
        rho[m] = source[m] + h * conv;
    }
    return rho;
}

std::vector<Complex> convolve_exp(Complex lambda, const std::function<Complex(double)>& f,
                                  std::size_t n, double h) {
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    if (n == 0) return out;
    const auto& xs = quad::gl16_nodes();
    const auto& ws = quad::gl16_weights();
    Complex step = std::exp(lambda * h);
    for (std::size_t m = 1; m < n; ++m) {
        double t0 = (m - 1) * h, t1 = m * h;
        Complex inc = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            double s = 0.5 * (t0 + t1) + 0.5 * h * xs[j];
            inc += 0.5 * h * ws[j] * std::exp(lambda * (t1 - s)) * f(s);
        }
        out[m] = step * out[m - 1] + inc;
    }
    return out;
}

} // namespace vpspec
