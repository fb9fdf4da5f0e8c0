// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails.  Tolerances and runtime caps are pinned in code.

#include "vpspec/dispersion.hpp"
#include "vpspec/equilibrium.hpp"
#include "vpspec/field.hpp"
#include "vpspec/green.hpp"
#include "vpspec/quadrature.hpp"
#include "vpspec/spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace vpspec;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;
int g_index = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    ++g_index;
    std::printf("%s  [%2d] %-28s %s\n", pass ? "PASS" : "FAIL", g_index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const double kA3 = std::pow(2.0 * M_PI, -1.5);
const Complex I{0.0, 1.0};

// independent composite-Simpson oracle
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

char buf[256];

void c1_survival_threshold(const EquilibriumProfile& cp) {
    auto t0 = Clock::now();
    const double U = std::sqrt(2.0);
    double oracle = simpson(
        [&](double u) {
            double m = std::pow(std::max(1.0 - 0.5 * u * u, 0.0), 4);
            double den = U * U - u * u;
            return den > 1e-300 ? 4.0 * M_PI * u * u * m / den : 0.0;
        },
        0.0, U, 20000);
    double closed = 64.0 * std::sqrt(2.0) * M_PI / 315.0;
    double got = survival_threshold(cp);
    double ksq = got * got;
    double el = seconds_since(t0);
    bool pass = std::abs(ksq - closed) / closed < 1e-8 &&
                std::abs(ksq - oracle) / oracle < 1e-8 && el < 1.0;
    std::snprintf(buf, sizeof buf,
                  "kappa0^2=%.10f closed=%.10f oracle=%.10f (%.2fs)", ksq, closed,
                  oracle, el);
    report("survival threshold", pass, buf);
}

void c2_endpoint_identities(const EquilibriumProfile& cp) {
    const double U = cp.upsilon();
    double k0 = survival_threshold(cp);
    double worst = 0.0;
    for (double k : {0.5 * k0, k0, 2.0 * k0}) {
        Complex d = eval_D(cp, I * k * U, k).value;
        double want = 1.0 - k0 * k0 / (k * k);
        worst = std::max(worst, std::abs(d - want));
        d = eval_D(cp, -I * k * U, k).value;
        worst = std::max(worst, std::abs(d - want));
    }
    double hU = std::abs(eval_H(cp, Complex(U, 0.0)).value - k0 * k0);
    bool pass = worst < 1e-8 && hU < 1e-8;
    std::snprintf(buf, sizeof buf, "max |D(+-ikU,k)-(1-k0^2/k^2)|=%.2e  |H(U)-k0^2|=%.2e",
                  worst, hU);
    report("endpoint identities", pass, buf);
}

void c3_bohm_gross(const EquilibriumProfile& cp) {
    auto t0 = Clock::now();
    double k0 = survival_threshold(cp);
    double tau0 = std::sqrt(moment_tau(cp, 0));
    double a1_expect = moment_tau(cp, 1) / (2.0 * std::pow(tau0, 3));
    std::vector<double> ks, ts;
    for (int i = 0; i < 30; ++i) ks.push_back(k0 * (0.01 + 0.09 * i / 29.0));
    for (double k : ks) ts.push_back(langmuir_branch(cp, k).tau_star);
    // cubic in x = k^2 to keep the higher corrections out of a0, a1
    const int m = 4;
    double A[4][5] = {};
    for (std::size_t n = 0; n < ks.size(); ++n) {
        double x = ks[n] * ks[n];
        double phi[4] = {1.0, x, x * x, x * x * x};
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) A[r][c] += phi[r] * phi[c];
            A[r][4] += phi[r] * ts[n];
        }
    }
    for (int r = 0; r < m; ++r) {
        int piv = r;
        for (int rr = r + 1; rr < m; ++rr)
            if (std::abs(A[rr][r]) > std::abs(A[piv][r])) piv = rr;
        for (int c = 0; c <= m; ++c) std::swap(A[r][c], A[piv][c]);
        for (int rr = 0; rr < m; ++rr) {
            if (rr == r) continue;
            double f = A[rr][r] / A[r][r];
            for (int c = 0; c <= m; ++c) A[rr][c] -= f * A[r][c];
        }
    }
    double a0 = A[0][4] / A[0][0], a1 = A[1][4] / A[1][1];
    double el = seconds_since(t0);
    bool pass = std::abs(a0 - tau0) < 1e-6 &&
                std::abs(a1 - a1_expect) / a1_expect < 1e-3 && el < 10.0;
    std::snprintf(buf, sizeof buf, "a0-tau0=%.2e  a1 rel err=%.2e (%.2fs)", a0 - tau0,
                  std::abs(a1 - a1_expect) / a1_expect, el);
    report("Bohm-Gross recovery", pass, buf);
}

void c4_branch_structure(const EquilibriumProfile& cp) {
    double k0 = survival_threshold(cp);
    const double U = cp.upsilon();
    std::vector<double> ks;
    for (int i = 1; i <= 200; ++i) ks.push_back(k0 * i / 200.0);
    auto pts = branch_scan(cp, ks);
    bool mono_t = true, mono_nu = true, convex = true;
    double xres = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) {
            mono_t = mono_t && pts[i].tau_star > pts[i - 1].tau_star;
            mono_nu = mono_nu && pts[i].phase_velocity < pts[i - 1].phase_velocity;
        }
        convex = convex && pts[i].d2tau > 0.0;
        xres = std::max(xres, pts[i].x_residual);
    }
    double nu_end = std::abs(pts.back().phase_velocity - U);
    bool pass = mono_t && mono_nu && convex && nu_end < 1e-8 && xres < 1e-9;
    std::snprintf(buf, sizeof buf,
                  "mono(tau*)=%d mono(nu*)=%d convex=%d |nu*(k0)-U|=%.2e xres=%.2e",
                  mono_t, mono_nu, convex, nu_end, xres);
    report("branch structure", pass, buf);
}

void c5_landau_law(const EquilibriumProfile& cp) {
    auto t0 = Clock::now();
    double k0 = survival_threshold(cp);
    double k1sq = moment_kappa(cp, 1);
    const double U = cp.upsilon();
    bool pass = true;
    double worst_excess = 0.0;
    for (double dk : {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2}) {
        double k = k0 + dk;
        double nu = U - 2.0 * k0 / k1sq * dk;
        DampedRoot r = damped_root(cp, k, I * nu * k - Complex(1e-9, 0));
        double ratio = r.lambda.real() / r.predicted_rate;
        double excess = std::abs(ratio - 1.0) - 5.0 * dk;
        worst_excess = std::max(worst_excess, excess);
        pass = pass && (excess <= 0.0) && r.lambda.real() < 0.0;
        // conjugate pairing
        DampedRoot rm = damped_root(cp, k, std::conj(r.lambda));
        pass = pass && std::abs(rm.lambda - std::conj(r.lambda)) < 1e-10;
    }
    double el = seconds_since(t0);
    pass = pass && el < 60.0;
    std::snprintf(buf, sizeof buf, "worst |ratio-1| excess over 5(k-k0): %.2e (%.1fs)",
                  worst_excess, el);
    report("Landau law band", pass, buf);
}

void c6_stability(const EquilibriumProfile& cp, const EquilibriumProfile& gp) {
    double k0 = survival_threshold(cp);
    double h_c = 10.0 * std::max(1.0, k0 * cp.upsilon());
    bool pass = true;
    std::string det;
    for (double k : {0.5 * k0, 1.0, 2.0}) {
        int w = winding_number(cp, k, {1e-2, 10.0, -h_c, h_c});
        pass = pass && w == 0;
    }
    for (double k : {0.5, 1.0, 2.0}) {
        int w = winding_number(gp, k, {1e-2, 10.0, -10.0, 10.0});
        pass = pass && w == 0;
    }
    double margin_c = penrose_margin(cp, k0 + 0.2, k0 + 2.0, 16, 300);
    double margin_g = penrose_margin(gp, 0.5, 5.0, 16, 300);
    pass = pass && margin_c > 0.0 && margin_g > 0.0;
    std::snprintf(buf, sizeof buf, "windings all 0, margins: compact=%.3f gauss=%.3f",
                  margin_c, margin_g);
    report("spectral stability", pass, buf);
}

double oracle_deviation(const EquilibriumProfile& p, const GreenContext& ctx, double k,
                        double T) {
    double h = 0.0025 / std::max(1.0, std::sqrt(ctx.tau0_sq()));
    std::size_t n = std::size_t(T / h) + 1;
    std::vector<double> tg(n), src(n);
    for (std::size_t i = 0; i < n; ++i) {
        tg[i] = i * h;
        src[i] = std::exp(-0.5 * (tg[i] - 3.0) * (tg[i] - 3.0));
    }
    std::size_t nc = 1201;
    std::vector<double> coarse(nc);
    for (std::size_t i = 0; i < nc; ++i) coarse[i] = T * double(i) / (nc - 1);
    GreenDecomposition g =
        resample_remainder(green_remainder(ctx, k, coarse), tg);
    auto rho_g = green_density(g, src, h);
    auto rho_v = volterra_density(p, k, src, h);
    double mx = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx = std::max(mx, std::abs(rho_v[i]));
        dev = std::max(dev, std::abs(rho_g[i] - rho_v[i]));
    }
    return dev / mx;
}

void c7_oracle_equivalence(const EquilibriumProfile& cp, const GreenContext& cctx,
                           const EquilibriumProfile& gp, const GreenContext& gctx) {
    auto t0 = Clock::now();
    double dev_g = oracle_deviation(gp, gctx, 1.0, 50.0);
    double dev_c = oracle_deviation(cp, cctx, 0.5 * cctx.kappa0(), 100.0);
    double el = seconds_since(t0);
    bool pass = dev_g <= 1e-4 && dev_c <= 1e-4 && el < 120.0;
    std::snprintf(buf, sizeof buf, "gaussian k=1: %.2e, compact k=k0/2: %.2e (%.1fs)",
                  dev_g, dev_c, el);
    report("oracle equivalence", pass, buf);
}

void c8_residues(const EquilibriumProfile& cp, const GreenContext& cctx,
                 const GreenContext& gctx) {
    // contour-integral residue oracle at lambda_+ (compact, k = kappa0/2)
    double k = 0.5 * cctx.kappa0();
    Complex lam = cctx.lambda_plus(k);
    Complex dD = eval_D_deriv(cp, lam, k, 1);
    double r = 0.5 * k;
    int n = 256;
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double th = 2.0 * M_PI * j / n;
        Complex z = lam + r * std::exp(I * th);
        acc += I * r * std::exp(I * th) / eval_D(cp, z, k).value;
    }
    Complex res = acc / double(n) / I;
    double gap = std::abs(res - 1.0 / dD);
    // a_plus(k -> 0) -> i tau0/2 for the Gaussian (tau0 = 1)
    Complex a_small = residue_weight(gctx, 1e-3);
    double gap0 = std::abs(a_small - I * 0.5);
    bool pass = gap < 1e-8 && gap0 < 1e-6;
    std::snprintf(buf, sizeof buf, "|oint - 1/dD|=%.2e  |a+(1e-3)-i tau0/2|=%.2e", gap,
                  gap0);
    report("residue weights", pass, buf);
}

void c9_remainder_decay(const GreenContext& cctx) {
    double k0 = cctx.kappa0();
    double slope_main = 0.0;
    std::vector<double> sups;
    std::vector<double> kk = {k0 / 8, k0 / 4, k0 / 2};
    for (double k : kk) {
        std::vector<double> tg;
        tg.push_back(0.0);
        for (int i = 0; i < 80; ++i) tg.push_back((5.0 + 45.0 * i / 79.0) / k);
        // also early grid for the sup
        for (double kt = 0.25; kt < 5.0; kt += 0.25) tg.push_back(kt / k);
        std::sort(tg.begin(), tg.end());
        auto g = green_remainder(cctx, k, tg);
        double sup = 0.0;
        double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < tg.size(); ++i) {
            double kt = tg[i] * k;
            double v = std::abs(g.remainder[i]);
            sup = std::max(sup, v);
            if (kt >= 5.0 && kt <= 50.0 && v > 0) {
                double lx = std::log(kt), ly = std::log(v);
                n += 1; sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            }
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (k == k0 / 2) slope_main = slope;
        sups.push_back(sup);
    }
    double s1 = std::log(sups[1] / sups[0]) / std::log(2.0);
    double s2 = std::log(sups[2] / sups[1]) / std::log(2.0);
    bool pass = slope_main <= -(4.0 - 0.5) && std::abs(s1 - 3.0) <= 0.3 &&
                std::abs(s2 - 3.0) <= 0.3;
    std::snprintf(buf, sizeof buf, "fit slope=%.3f (<=-3.5), k-scaling %.2f, %.2f (3+-0.3)",
                  slope_main, s1, s2);
    report("remainder decay", pass, buf);
}

void c10_field_identity(const EquilibriumProfile& cp, const GreenContext& cctx) {
    InitialData data;
    data.velocity = cp;
    double k = 0.5 * cctx.kappa0();
    double h = 0.005 / std::max(1.0, std::sqrt(cctx.tau0_sq()));
    std::vector<double> tg;
    for (double x = 0.0; x <= 50.0 + 1e-12; x += h) tg.push_back(x);
    FieldTrace tr = field_decomposition(cctx, data, k, tg);
    bool pass = tr.decomposition_residual <= 1e-6;
    std::snprintf(buf, sizeof buf, "max |E_osc+E_r-E| / max|E| = %.2e",
                  tr.decomposition_residual);
    report("field decomposition", pass, buf);
}

void c11_point_synthesis(const EquilibriumProfile& cp, const GreenContext& cctx) {
    auto t0 = Clock::now();
    BranchTable table(cctx);
    InitialData data;
    data.velocity = cp;
    std::vector<double> ts, vs;
    for (int i = 0; i < 80; ++i) {
        double t = 10.0 * std::pow(20.0, i / 79.0);
        ts.push_back(t);
        vs.push_back(synth_osc_point(table, data, t, 1.0));
    }
    DecayFit f = decay_exponent_fit(ts, vs, 10.0, 200.0);
    double alpha = -f.slope;
    double el = seconds_since(t0);
    bool pass = std::abs(alpha - 1.5) <= 0.1 && el < 300.0;
    std::snprintf(buf, sizeof buf, "alpha = %.4f (1.5 +- 0.1), residual %.2f (%.1fs)",
                  alpha, f.residual, el);
    report("point-synthesis dispersion", pass, buf);
}

void c12_plemelj(const EquilibriumProfile& cp, const EquilibriumProfile& gp) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const EquilibriumProfile& p = (trial % 2) ? cp : gp;
        double cut = p.compact() ? p.upsilon() : p.support_cut();
        double frac = std::fmod(0.618033988749895 * (trial + 1), 1.0);
        double x = (2.0 * frac - 1.0) * 0.9 * cut;
        Complex hb = eval_H(p, Complex(x, 0.0)).value;
        Complex h1 = eval_H(p, Complex(x, 1e-2)).value;
        Complex h2 = eval_H(p, Complex(x, 1e-3)).value;
        Complex h3 = eval_H(p, Complex(x, 1e-4)).value;
        Complex e1 = (10.0 * h2 - h1) / 9.0;
        Complex e2 = (10.0 * h3 - h2) / 9.0;
        Complex lim = (100.0 * e2 - e1) / 99.0;
        worst = std::max(worst, std::abs(lim - hb));
    }
    // the resolved boundary sign must put the continued roots in Re < 0
    double k0 = survival_threshold(cp);
    double k1sq = moment_kappa(cp, 1);
    bool damped = true;
    for (double dk : {1e-2, 3e-2}) {
        double k = k0 + dk;
        double nu = cp.upsilon() - 2.0 * k0 / k1sq * dk;
        DampedRoot r = damped_root(cp, k, I * nu * k - Complex(1e-9, 0));
        damped = damped && r.lambda.real() < 0.0;
    }
    bool pass = worst < 1e-6 && damped;
    std::snprintf(buf, sizeof buf, "max boundary gap %.2e, roots damped past k0: %d",
                  worst, damped);
    report("Plemelj consistency", pass, buf);
}

} // namespace

int main() {
    auto t0 = Clock::now();
    auto compact = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    auto gauss = EquilibriumProfile::gaussian(kA3, 1.0);

    std::printf("acceptance suite: compact = CompactPolynomial(A=1, e_max=1, N1=4), "
                "gaussian = Gaussian(A=(2pi)^-3/2, beta=1)\n");

    c1_survival_threshold(compact);
    c2_endpoint_identities(compact);
    c3_bohm_gross(compact);
    c4_branch_structure(compact);
    c5_landau_law(compact);
    c6_stability(compact, gauss);

    GreenContext cctx(compact, 0.02, 0.6);
    GreenContext gctx(gauss, 0.05, 1.0);
    c7_oracle_equivalence(compact, cctx, gauss, gctx);
    c8_residues(compact, cctx, gctx);
    c9_remainder_decay(cctx);
    c10_field_identity(compact, cctx);
    c11_point_synthesis(compact, cctx);
    c12_plemelj(compact, gauss);

    std::printf("%d/%d criteria passed (total %.1fs)\n", g_index - g_failures, g_index,
                seconds_since(t0));
    return g_failures == 0 ? 0 : 1;
}
