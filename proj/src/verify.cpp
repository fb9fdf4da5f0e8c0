#include "vpspec/verify.hpp"
#include "vpspec/dispersion.hpp"
#include "vpspec/field.hpp"
#include "vpspec/green.hpp"
#include "vpspec/spectral.hpp"

#include <cmath>
#include <limits>

namespace vpspec {

namespace {

constexpr Complex kI{0.0, 1.0};

void check(std::vector<CheckResult>& out, const std::string& name, double value,
           double threshold) {
    out.push_back({name, value <= threshold, value, threshold});
}

void verify_compact(const EquilibriumProfile& p, double s, std::vector<CheckResult>& out) {
    const double kappa0 = survival_threshold(p);
    const double U = p.upsilon();

    // endpoint identities D(+-ikU, k) = 1 - kappa0^2/k^2 and H(U) = kappa0^2
    for (double k : {0.5 * kappa0, kappa0, 2.0 * kappa0}) {
        Complex d = eval_D(p, kI * k * U, k).value;
        double want = 1.0 - kappa0 * kappa0 / (k * k);
        check(out, "D(ikU,k) identity k=" + std::to_string(k), std::abs(d - want),
              1e-8 * s);
    }
    check(out, "H(Upsilon) = kappa0^2",
          std::abs(eval_H(p, Complex(U, 0.0)).value - kappa0 * kappa0), 1e-8 * s);

    // branch structure on a coarse grid
    std::vector<double> ks;
    for (int i = 1; i <= 40; ++i) ks.push_back(kappa0 * i / 40.0);
    auto branch = branch_scan(p, ks);
    double mono = std::numeric_limits<double>::infinity();
    double conv = std::numeric_limits<double>::infinity();
    double xres = 0.0;
    for (std::size_t i = 0; i < branch.size(); ++i) {
        if (i) {
            mono = std::min(mono, branch[i].tau_star - branch[i - 1].tau_star);
            mono = std::min(mono, branch[i - 1].phase_velocity - branch[i].phase_velocity);
        }
        conv = std::min(conv, branch[i].d2tau);
        xres = std::max(xres, branch[i].x_residual);
    }
    check(out, "branch monotonicity/convexity margin", -std::min(mono, conv), 0.0);
    check(out, "x* fixed-point residual", xres, 1e-9 * s);
    check(out, "nu*(kappa0) = Upsilon", std::abs(branch.back().phase_velocity - U),
          1e-8 * s);

    // damped root just past threshold: Re < 0, conjugate pairing
    double k = kappa0 + 0.02;
    double nu = U - 2.0 * kappa0 / moment_kappa(p, 1) * 0.02;
    DampedRoot r = damped_root(p, k, kI * nu * k - Complex(1e-9, 0));
    check(out, "damped root residual", r.newton_residual, 1e-12 * s);
    check(out, "damped root Re lambda < 0", r.lambda.real(), 0.0);
    Complex dconj = eval_D(p, std::conj(r.lambda), k).value;
    check(out, "conjugate pairing |D(conj lambda)|", std::abs(dconj), 1e-10 * s);

    check(out, "winding number k=1",
          std::abs(double(winding_number(p, 1.0, {1e-2, 10.0, -10.0 * std::max(1.0, kappa0 * U),
                                                  10.0 * std::max(1.0, kappa0 * U)}))),
          0.0);
    double margin = penrose_margin(p, kappa0 + 0.2, kappa0 + 2.0, 16, 200);
    check(out, "penrose margin positive", -margin, -1e-6);
}

void verify_gaussian(const EquilibriumProfile& p, double s, std::vector<CheckResult>& out) {
    check(out, "kappa0 = 0 for infinite support", survival_threshold(p), 0.0);
    double tau0 = moment_tau(p, 0);
    // Gaussian moment identities for the standard normalization
    if (std::abs(p.amplitude - std::pow(2 * M_PI, -1.5)) < 1e-12 && p.beta == 1.0) {
        check(out, "tau0^2 Gaussian identity", std::abs(tau0 - 1.0), 1e-10 * s);
        check(out, "tau1^2 Gaussian identity", std::abs(moment_tau(p, 1) - 3.0), 1e-10 * s);
        Complex n1 = eval_N(p, 1.0);
        check(out, "N(1) closed form", std::abs(n1 - (-kI * std::exp(-0.5))), 1e-10 * s);
    }
    check(out, "winding number k=1",
          std::abs(double(winding_number(p, 1.0, {1e-2, 10.0, -10.0, 10.0}))), 0.0);
    double margin = penrose_margin(p, 0.5, 5.0, 16, 200);
    check(out, "penrose margin positive", -margin, -1e-6);
}

void verify_common(const EquilibriumProfile& p, double s, std::vector<CheckResult>& out) {
    // Plemelj consistency: boundary value vs gamma -> 0+ Richardson limit
    const double cut = p.compact() ? p.upsilon() : p.support_cut();
    double worst = 0.0;
    for (double frac : {-0.7, -0.3, 0.1, 0.45, 0.85}) {
        double x = frac * 0.9 * cut;
        Complex hb = eval_H(p, Complex(x, 0.0)).value;
        Complex h1 = eval_H(p, Complex(x, 1e-2)).value;
        Complex h2 = eval_H(p, Complex(x, 1e-3)).value;
        Complex h3 = eval_H(p, Complex(x, 1e-4)).value;
        Complex e1 = (10.0 * h2 - h1) / 9.0;
        Complex e2 = (10.0 * h3 - h2) / 9.0;
        Complex lim = (100.0 * e2 - e1) / 99.0;
        worst = std::max(worst, std::abs(lim - hb));
    }
    check(out, "Plemelj boundary consistency", worst, 1e-6 * s);

    // reality and conjugate symmetry of D
    double k = 0.7;
    double reality = std::abs(eval_D(p, Complex(1.3, 0.0), k).value.imag());
    check(out, "D real on the positive real axis", reality, 1e-12 * s);
    Complex lam(0.4, 0.9);
    Complex sym = eval_D(p, std::conj(lam), k).value - std::conj(eval_D(p, lam, k).value);
    check(out, "D conjugate symmetry", std::abs(sym), 1e-12 * s);

    // oracle equivalence on a short run
    GreenContext ctx(p, 0.02, p.compact() ? 0.4 : 1.0);
    double kk = p.compact() ? 0.5 * ctx.kappa0() : 1.0;
    double tau_scale = std::sqrt(std::max(ctx.tau0_sq(), 1.0));
    double h = 0.005 / tau_scale;
    double T = 30.0;
    std::size_t n = std::size_t(T / h) + 1;
    std::vector<double> tg(n), src(n);
    for (std::size_t i = 0; i < n; ++i) {
        tg[i] = i * h;
        src[i] = std::exp(-0.5 * (tg[i] - 3.0) * (tg[i] - 3.0));
    }
    GreenDecomposition g = green_remainder(ctx, kk, tg);
    auto rho_g = green_density(g, src, h);
    auto rho_v = volterra_density(p, kk, src, h);
    double mx = 1e-300, dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx = std::max(mx, std::abs(rho_v[i]));
        dev = std::max(dev, std::abs(rho_g[i] - rho_v[i]));
    }
    check(out, "green vs volterra density", dev / mx, 1e-4 * s);

    // field decomposition identity
    InitialData data;
    data.velocity = p.compact() ? p : EquilibriumProfile::gaussian(1.0, 1.0);
    std::vector<double> tg2;
    for (double t = 0.0; t <= 20.0 + 1e-9; t += 0.01) tg2.push_back(t);
    FieldTrace tr = field_decomposition(ctx, data, kk, tg2);
    check(out, "field decomposition identity", tr.decomposition_residual, 1e-6 * s);
    check(out, "density route deviation", tr.route_deviation, 2e-4 * s);
}

} // namespace

std::vector<CheckResult> verify_profile(const EquilibriumProfile& p, double tol_scale) {
    std::vector<CheckResult> out;
    double s = tol_scale;
    if (p.compact())
        verify_compact(p, s, out);
    else if (p.family == ProfileFamily::Gaussian)
        verify_gaussian(p, s, out);
    verify_common(p, s, out);
    return out;
}

std::vector<CheckResult> verify_default_suite(double tol_scale) {
    std::vector<CheckResult> out;
    auto compact = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    auto gauss = EquilibriumProfile::gaussian(std::pow(2 * M_PI, -1.5), 1.0);
    for (auto& c : verify_profile(compact, tol_scale)) {
        c.name = "compact: " + c.name;
        out.push_back(c);
    }
    for (auto& c : verify_profile(gauss, tol_scale)) {
        c.name = "gaussian: " + c.name;
        out.push_back(c);
    }
    return out;
}

} // namespace vpspec
