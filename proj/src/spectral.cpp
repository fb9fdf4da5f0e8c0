#include "vpspec/spectral.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vpspec {

namespace {

constexpr Complex kI{0.0, 1.0};

double solve_xstar(const EquilibriumProfile& p, double k, double kappa0) {
    // x = omega(k^2/x) has a unique root in [tau0^2, kappa0^2 U^2]:
    // the left side increases, the right side decreases in x.
    const double tau0sq = eval_omega(p, 0.0, 0);
    const double U = p.upsilon();
    // omega's argument k^2/x stays within [0, U^-2] iff x >= k^2 U^2
    double lo = std::max(tau0sq, k * k * U * U), hi = kappa0 * kappa0 * U * U;
    auto g = [&](double x) { return x - eval_omega(p, k * k / x, 0); };
    double glo = g(lo), ghi = g(hi);
    if (glo > 0 && glo < 1e-9) return lo;
    if (ghi < 0 && ghi > -1e-9) return hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (std::abs(gm) < 1e-13 * std::max(1.0, mid) || hi - lo < 1e-15 * hi) {
            lo = hi = mid;
            break;
        }
        (gm > 0 ? hi : lo) = mid;
    }
    double x = 0.5 * (lo + hi);
    // Newton polish: g'(x) = 1 + (k^2/x^2) omega'(k^2/x) > 0
    for (int it = 0; it < 4; ++it) {
        double y = k * k / x;
        double gp = 1.0 + (k * k / (x * x)) * eval_omega(p, y, 1);
        x -= g(x) / gp;
    }
    return x;
}

BranchPoint branch_point_impl(const EquilibriumProfile& p, double k, double kappa0,
                              bool with_fd) {
    BranchPoint b;
    b.k = k;
    b.x_star = solve_xstar(p, k, kappa0);
    b.x_residual = std::abs(b.x_star - eval_omega(p, k * k / b.x_star, 0));
    b.tau_star = std::sqrt(b.x_star);
    b.phase_velocity = b.tau_star / k;

    const double x = b.x_star;
    const double y = k * k / x;
    const double w1 = eval_omega(p, y, 1);
    const double w2 = eval_omega(p, y, 2);
    const double den = 1.0 + (k * k / (x * x)) * w1;
    const double dx = (2.0 * k / x) * w1 / den;
    const double t1 = 2.0 * std::pow(x - k * dx, 2) / (x * x * x) * w1;
    const double t2 = k * k * std::pow(2.0 * x - k * dx, 2) / (x * x * x * x) * w2;
    const double d2x = (t1 + t2) / den;
    b.dtau = dx / (2.0 * b.tau_star);
    b.group_velocity = b.dtau;
    b.d2tau = (2.0 * d2x * x - dx * dx) / (4.0 * std::pow(x, 1.5));

    if (with_fd) {
        // centered difference, one-sided shrink at the grid ends
        double h = 1e-4 * kappa0;
        if (k - h <= 0) h = 0.5 * k;
        double kp = std::min(k + h, kappa0), km = k - h;
        double tp = std::sqrt(solve_xstar(p, kp, kappa0));
        double tm = std::sqrt(solve_xstar(p, km, kappa0));
        double fd = (tp - tm) / (kp - km);
        b.fd_discrepancy = std::abs(fd - b.dtau) / std::max(std::abs(b.dtau), 1e-30);
    }
    return b;
}

} // namespace

BranchPoint langmuir_branch(const EquilibriumProfile& p, double k) {
    if (!p.compact())
        throw InfiniteSupport("Langmuir branch collapses to tau0 for infinite support");
    const double kappa0 = survival_threshold(p);
    if (!(k > 0) || k > kappa0 * (1 + 1e-12))
        throw OutOfRange("Langmuir branch requires 0 < k <= kappa0");
    return branch_point_impl(p, std::min(k, kappa0), kappa0, true);
}

std::vector<BranchPoint> branch_scan(const EquilibriumProfile& p,
                                     const std::vector<double>& k_grid) {
    std::vector<BranchPoint> out;
    out.reserve(k_grid.size());
    for (double k : k_grid) {
        BranchPoint b = langmuir_branch(p, k);
        if (b.fd_discrepancy > 1e-4)
            throw NewtonDiverged("branch derivative identity vs finite differences "
                                 "disagree beyond 1e-4");
        out.push_back(b);
    }
    return out;
}

DampedRoot damped_root(const EquilibriumProfile& p, double k, Complex seed) {
    if (!(k > 0)) throw OutOfRange("wave number must be positive");
    const double U = p.upsilon();
    Complex lam = seed;
    double res = 0.0;
    const double step_cap = 0.5 * std::max(1.0, std::abs(seed));
    bool done = false;
    for (int it = 0; it < 80; ++it) {
        DispersionSample d = eval_D(p, lam, k);
        res = std::abs(d.value);
        Complex dp = eval_D_deriv(p, lam, k, 1);
        if (std::abs(dp) < 1e-8)
            throw DegenerateRoot("dD/dlambda vanished during Newton iteration");
        Complex step = d.value / dp;
        if (std::abs(step) > step_cap)
            throw NewtonDiverged("Newton step exceeded cap");
        lam -= step;
        if (p.compact() && std::abs(lam.imag() / k) >= U * (1 + 1e-9))
            throw ContinuationUnavailable("root left the continuation strip");
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(lam))) {
            done = true;
            break;
        }
    }
    DispersionSample d = eval_D(p, lam, k);
    res = std::abs(d.value);
    if (!done && res > 1e-12) throw NewtonDiverged("Newton did not converge");

    DampedRoot r;
    r.k = k;
    r.lambda = lam;
    r.newton_residual = res;
    const double kappa0 = survival_threshold(p);
    bool law_valid = p.compact() ? (k > kappa0) : true;
    r.predicted_rate = law_valid ? landau_rate_asymptotic(p, k) : 0.0;
    return r;
}

double landau_rate_asymptotic(const EquilibriumProfile& p, double k) {
    if (!(k > 0)) throw OutOfRange("wave number must be positive");
    if (!p.compact()) {
        const double tau0 = std::sqrt(moment_tau(p, 0));
        const double nu = tau0 / k;
        return -(M_PI * M_PI / tau0) * nu * nu * nu * eval_mu(p, 0.5 * nu * nu);
    }
    const double kappa0 = survival_threshold(p);
    if (k <= kappa0) throw OutOfRange("compact-support law applies for k > kappa0");
    const double U = p.upsilon();
    const double k1sq = moment_kappa(p, 1);
    const double k2sq = moment_kappa(p, 2);
    // endpoint expansion k^2 = kappa0^2 + kappa1^2 e + kappa2^2 e^2, e = U - nu
    const double disc = k1sq * k1sq + 4.0 * k2sq * (k * k - kappa0 * kappa0);
    const double e = (-k1sq + std::sqrt(disc)) / (2.0 * k2sq);
    const double nu = U - e;
    return -(2.0 * M_PI * M_PI * k / k1sq) * nu * eval_mu(p, 0.5 * nu * nu);
}

RootCurve damped_continuation(const EquilibriumProfile& p, double dk, double k_cap) {
    RootCurve c;
    const double kappa0 = survival_threshold(p);
    const double tau0 = std::sqrt(moment_tau(p, 0));
    const double tau1sq = moment_tau(p, 1);

    double k_start, k_end;
    Complex seed;
    if (p.compact()) {
        k_start = kappa0 + dk;
        k_end = kappa0 + k_cap;
        const double k1sq = moment_kappa(p, 1);
        double nu = p.upsilon() - 2.0 * kappa0 / k1sq * dk;
        seed = kI * nu * k_start - Complex(1e-9, 0.0);
    } else {
        k_start = dk;
        k_end = k_cap;
        double s = std::sqrt(tau0 * tau0 * tau0 * tau0 + 4.0 * tau1sq * dk * dk);
        seed = kI * std::sqrt(0.5 * (tau0 * tau0 + s));
    }

    Complex prev1, prev2;
    int n = 0;
    for (double k = k_start; k <= k_end + 1e-12; k += dk) {
        Complex s = seed;
        if (n >= 2) s = prev1 + (prev1 - prev2); // secant extrapolation in k
        else if (n == 1) s = prev1;
        try {
            DampedRoot r = damped_root(p, k, s);
            if (r.lambda.real() > 1e-10) break; // spurious sign: stop
            c.k.push_back(k);
            c.lambda.push_back(r.lambda);
            prev2 = prev1;
            prev1 = r.lambda;
            ++n;
        } catch (const NewtonDiverged&) {
            // restart once from an asymptotic-law seed before giving up
            try {
                if (!p.compact()) break;
                const double rate = landau_rate_asymptotic(p, k);
                const double k1sq = moment_kappa(p, 1);
                double nu = p.upsilon() - 2.0 * kappa0 / k1sq * (k - kappa0);
                if (nu <= 0) break;
                DampedRoot r = damped_root(p, k, Complex(rate, nu * k));
                if (r.lambda.real() > 1e-10) break;
                c.k.push_back(k);
                c.lambda.push_back(r.lambda);
                prev2 = prev1;
                prev1 = r.lambda;
                ++n;
            } catch (...) {
                break;
            }
        } catch (const ContinuationUnavailable&) {
            break;
        } catch (const DegenerateRoot&) {
            break;
        }
    }
    double base = p.compact() ? kappa0 : 0.0;
    c.delta0 = c.k.empty() ? 0.0 : (c.k.back() - base);
    return c;
}

int winding_number(const EquilibriumProfile& p, double k, const Rectangle& rect,
                   double* residual) {
    if (rect.re_min < 1e-3)
        throw OutOfRange("winding contour must avoid the imaginary axis by 1e-3");
    auto logd = [&](Complex lam) {
        return eval_D_deriv(p, lam, k, 1) / eval_D(p, lam, k).value;
    };
    // counterclockwise rectangle
    struct Side {
        Complex a, b;
    };
    const Side sides[4] = {
        {{rect.re_min, rect.im_min}, {rect.re_max, rect.im_min}},
        {{rect.re_max, rect.im_min}, {rect.re_max, rect.im_max}},
        {{rect.re_max, rect.im_max}, {rect.re_min, rect.im_max}},
        {{rect.re_min, rect.im_max}, {rect.re_min, rect.im_min}}};

    const auto& xs = quad::gl16_nodes();
    const auto& ws = quad::gl16_weights();
    double w = 0.0;
    for (int doubling = 0; doubling < 4; ++doubling) {
        Complex acc = 0.0;
        for (const auto& s : sides) {
            double len = std::abs(s.b - s.a);
            int npan = std::max(6, int(len)) << doubling;
            for (int i = 0; i < npan; ++i) {
                Complex lo = s.a + (s.b - s.a) * (double(i) / npan);
                Complex hi = s.a + (s.b - s.a) * (double(i + 1) / npan);
                Complex mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                for (std::size_t j = 0; j < xs.size(); ++j)
                    acc += ws[j] * half * logd(mid + half * xs[j]);
            }
        }
        w = (acc / (2.0 * M_PI * kI)).real();
        if (std::abs(w - std::round(w)) < 0.02) break;
    }
    double res = std::abs(w - std::round(w));
    if (residual) *residual = res;
    if (res > 0.1) throw ContourTooCoarse("winding number integral did not settle");
    return int(std::lround(w));
}

double penrose_margin(const EquilibriumProfile& p, double k_min, double k_max,
                      int nk, int ntau) {
    const double tau0sq = moment_tau(p, 0);
    const double Uc = p.support_cut();
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nk; ++i) {
        double k = k_min + (k_max - k_min) * (nk == 1 ? 0.0 : double(i) / (nk - 1));
        // beyond tau_hi the far-field bound |D-1| <= tau0^2/(tau^2 - k^2 Uc^2)
        // keeps |D| >= 1/2
        double tau_hi = std::sqrt(k * k * Uc * Uc + 2.0 * tau0sq) + 1.0;
        for (int j = 0; j < ntau; ++j) {
            double tau = tau_hi * double(j) / (ntau - 1);
            double v = std::abs(eval_D(p, kI * tau, k).value);
            margin = std::min(margin, v);
        }
        margin = std::min(margin, 0.5);
    }
    return margin;
}

} // namespace vpspec
