#include "vpspec/dispersion.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <cmath>

namespace vpspec {

namespace {

constexpr Complex kI{0.0, 1.0};

// Window around the real axis inside which the Cauchy integral uses
// second-order singularity subtraction instead of plain quadrature.
constexpr double kNearAxis = 0.5;

// cauchy_m(z) = int_{-cut}^{cut} f_m(u) / (z - u) du, f_m = d^m/du^m [u mu(u^2/2)].
Complex cauchy_cut(const EquilibriumProfile& p, int m, Complex z) {
    const double cut = p.support_cut();
    const double x = z.real();
    const double y = z.imag();
    auto fm = [&](double u) { return eval_umu_deriv(p, u, m); };

    if (std::abs(x) < cut && std::abs(y) < kNearAxis) {
        // second-order singularity subtraction: the quadratic Taylor part of
        // f_m is removed and integrated in closed form through the moments
        //   L0 = int du/(z-u) = log((z+c)/(z-c))
        //   L1 = int (u-x)/(z-u) du = -2c + (z-x) L0
        //   L2 = int (u-x)^2/(z-u) du = 2c(2x-z) + (z-x)^2 L0,
        // leaving an integrand whose only length scales are O(1): the spike
        // of width Im z near u = x is gone, and the remaining numerator is
        // evaluated in Taylor form inside a small window so it never becomes
        // cancellation noise.
        const double fx = fm(x);
        const double dfx = eval_umu_deriv(p, x, m + 1);
        const bool second = (m + 2 <= 5);
        const double f2 = second ? eval_umu_deriv(p, x, m + 2) : 0.0;
        const double f3 = (m + 3 <= 5) ? eval_umu_deriv(p, x, m + 3) : 0.0;
        const double f4 = (m + 4 <= 5) ? eval_umu_deriv(p, x, m + 4) : 0.0;
        const double f5 = (m + 5 <= 5) ? eval_umu_deriv(p, x, m + 5) : 0.0;
        const double sw = 1e-3 * (1.0 + std::abs(x));
        const bool taylor_ok = (m + 3 <= 5);
        auto reg = [&](double u) -> Complex {
            Complex d = z - u;
            double du = u - x;
            if (du == 0.0) return {0.0, 0.0};
            double num;
            if (taylor_ok && std::abs(du) < sw)
                num = du * du * du * (f3 / 6.0 + du * (f4 / 24.0 + du * (f5 / 120.0)));
            else
                num = fm(u) - fx - dfx * du - (second ? 0.5 * f2 * du * du : 0.0);
            return num / d;
        };
        Complex I1 = quad::integrate_c(reg, -cut, x);
        Complex I2 = quad::integrate_c(reg, x, cut);
        Complex L0;
        if (y == 0.0) {
            L0 = Complex(std::log((cut + x) / (cut - x)), -M_PI); // limit from above
        } else {
            L0 = std::log((z + cut) / (z - cut));
        }
        Complex L1 = -2.0 * cut + (z - x) * L0;
        Complex L2 = 2.0 * cut * (2.0 * x - z) + (z - x) * (z - x) * L0;
        Complex v = I1 + I2 + fx * L0 + dfx * L1;
        if (second) v += 0.5 * f2 * L2;
        return v;
    }

    if (y == 0.0) {
        // |x| >= cut: real, singularity-free after mu's endpoint vanishing
        auto f = [&](double u) { return fm(u) / (x - u); };
        return Complex(quad::integrate(f, -cut, cut), 0.0);
    }
    auto f = [&](double u) -> Complex { return fm(u) / (z - u); };
    return quad::integrate_c(f, -cut, cut);
}

// Jump of the Cauchy transform across the velocity support:
// continued value below the axis = direct value - 2 pi i f_m(z).
Complex jump_term(const EquilibriumProfile& p, int m, Complex z) {
    return -2.0 * M_PI * kI * eval_umu_deriv_c(p, z, m);
}

bool jump_applies(const EquilibriumProfile& p, Complex z) {
    if (p.family == ProfileFamily::PowerLaw)
        throw ContinuationUnavailable(
            "analytic continuation below the axis unavailable for PowerLaw");
    if (p.compact()) return std::abs(z.real()) < p.upsilon();
    return true;
}

Complex H_deriv_impl(const EquilibriumProfile& p, Complex z, int m, HBranch* branch) {
    if (m < 0 || m > 4) throw OutOfRange("H derivative order must be 0..4");
    const double y = z.imag();
    if (y > 0.0) {
        if (branch) *branch = HBranch::upper;
        return 2.0 * M_PI * cauchy_cut(p, m, z);
    }
    if (y == 0.0) {
        if (branch) *branch = HBranch::boundary;
        return 2.0 * M_PI * cauchy_cut(p, m, z);
    }
    if (branch) *branch = HBranch::continued;
    Complex v = 2.0 * M_PI * cauchy_cut(p, m, z);
    if (jump_applies(p, z)) v += 2.0 * M_PI * jump_term(p, m, z);
    return v;
}

} // namespace

HValue eval_H(const EquilibriumProfile& p, Complex z) {
    // exploit the even reduction for real z outside the support
    if (z.imag() == 0.0 && std::abs(z.real()) >= p.support_cut()) {
        const double x = z.real();
        const double cut = p.support_cut();
        auto f = [&](double u) {
            return 4.0 * M_PI * u * u * eval_mu(p, 0.5 * u * u) / (x * x - u * u);
        };
        return {Complex(quad::integrate(f, 0.0, cut), 0.0), HBranch::boundary};
    }
    HBranch b;
    Complex v = H_deriv_impl(p, z, 0, &b);
    return {v, b};
}

Complex eval_H_deriv(const EquilibriumProfile& p, Complex z, int order) {
    return H_deriv_impl(p, z, order, nullptr);
}

DispersionSample eval_D(const EquilibriumProfile& p, Complex lambda, double k) {
    if (!(k > 0)) throw OutOfRange("wave number must be positive");
    Complex z = kI * lambda / k;
    HValue h = eval_H(p, z);
    DispersionSample s;
    s.k = k;
    s.lambda = lambda;
    s.value = 1.0 - h.value / (k * k);
    s.branch = h.branch;
    return s;
}

Complex eval_D_deriv(const EquilibriumProfile& p, Complex lambda, double k, int order) {
    if (order < 1 || order > 4) throw OutOfRange("D derivative order must be 1..4");
    Complex z = kI * lambda / k;
    Complex scale = -std::pow(kI / k, order) / (k * k);
    return scale * eval_H_deriv(p, z, order);
}

Complex eval_N(const EquilibriumProfile& p, double t) {
    if (t < 0) throw OutOfRange("N(t) defined for t >= 0");
    const double cut = p.support_cut();
    auto f = [&](double u) { return std::sin(u * t) * u * eval_mu(p, 0.5 * u * u); };
    // phase-resolved panels: adaptive GK struggles once u t >> 1
    double val = 0.0;
    auto panels = quad::build_panels(0.0, cut, t);
    for (std::size_t i = 0; i < panels.nodes.size(); ++i)
        val += panels.weights[i] * f(panels.nodes[i]);
    if (panels.nodes.empty()) val = quad::integrate(f, 0.0, cut);
    return -4.0 * M_PI * kI * val;
}

double volterra_kernel(const EquilibriumProfile& p, double k, double s) {
    if (!(k > 0)) throw OutOfRange("wave number must be positive");
    Complex n = eval_N(p, k * s);
    return (-kI * n).real() / k;
}

double eval_omega(const EquilibriumProfile& p, double y, int order) {
    const double cut = p.support_cut();
    if (!p.compact()) {
        // Upsilon = inf collapses the domain to y = 0
        if (y != 0.0) throw OutOfRange("omega argument must be 0 for infinite support");
    } else {
        double ymax = 1.0 / (p.upsilon() * p.upsilon());
        if (y < 0 || y > ymax * (1 + 1e-12))
            throw OutOfRange("omega argument outside [0, Upsilon^-2]");
        // at the endpoint the vanishing order must absorb the denominator power
        if (order >= p.decay_order && y >= ymax * (1 - 1e-12))
            throw DivergentMoment("omega derivative diverges at y = Upsilon^-2");
    }
    double c0;
    int pw;
    switch (order) {
    case 0: c0 = 2.0 * M_PI; pw = 2; break;
    case 1: c0 = 2.0 * M_PI; pw = 4; break;
    case 2: c0 = 4.0 * M_PI; pw = 6; break;
    default: throw OutOfRange("omega derivative order must be 0, 1 or 2");
    }
    auto f = [&](double u) {
        double den = 1.0 - y * u * u;
        return 2.0 * c0 * std::pow(u, pw) * eval_mu(p, 0.5 * u * u) /
               std::pow(den, order + 1);
    };
    return quad::integrate(f, 0.0, cut);
}

} // namespace vpspec
