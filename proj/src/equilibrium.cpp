#include "vpspec/equilibrium.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace vpspec {

namespace {

constexpr double kTailLevel = 1e-16;

// Small dense polynomial helper used for the closed-form u-derivatives of
// f(u) = u mu(u^2/2).  Coefficients are in increasing powers of u.
struct Poly {
    std::vector<double> c;
    double eval(double u) const {
        double v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
        return v;
    }
    std::complex<double> eval(std::complex<double> u) const {
        std::complex<double> v = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
        return v;
    }
    Poly deriv() const {
        if (c.size() <= 1) return Poly{{0.0}};
        Poly d;
        d.c.resize(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d.c[i - 1] = c[i] * double(i);
        return d;
    }
    // this * (a + b u^2)
    Poly mul_quadratic(double a, double b) const {
        Poly r;
        r.c.assign(c.size() + 2, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            r.c[i] += a * c[i];
            r.c[i + 2] += b * c[i];
        }
        return r;
    }
    Poly scaled_axpy(const Poly& other, double s) const { // this + s * u * other
        Poly r = *this;
        if (r.c.size() < other.c.size() + 1) r.c.resize(other.c.size() + 1, 0.0);
        for (std::size_t i = 0; i < other.c.size(); ++i) r.c[i + 1] += s * other.c[i];
        return r;
    }
};

// f(u) = u mu(u^2/2) and derivatives, written per family in factored form so
// the edge behaviour is computed without cancellation:
//   Gaussian:          p_m(u) exp(-beta u^2/2),     p_{m+1} = p_m' - beta u p_m
//   CompactPolynomial: q_m(u) (e_max - u^2/2)^{N1-m},
//                      q_{m+1} = q_m'(e_max - u^2/2) - (N1-m) u q_m   (m < N1),
//                      expanded polynomial derivatives beyond order N1
//   PowerLaw:          q_m(u) (1 + u^2/2)^{-(N1+m)},
//                      q_{m+1} = q_m'(1+u^2/2) - (N1+m) u q_m
constexpr int kMaxUMuOrder = 5;

struct UMuRep {
    std::vector<Poly> cof;      // cofactor polynomials q_m / p_m
    std::vector<Poly> expanded; // compact only: plain derivatives for m > N1
};

UMuRep umu_polys(const EquilibriumProfile& p) {
    UMuRep r;
    r.cof.reserve(kMaxUMuOrder + 1);
    switch (p.family) {
    case ProfileFamily::Gaussian: {
        r.cof.push_back(Poly{{0.0, p.amplitude}});
        for (int m = 0; m < kMaxUMuOrder; ++m)
            r.cof.push_back(r.cof.back().deriv().scaled_axpy(r.cof.back(), -p.beta));
        break;
    }
    case ProfileFamily::CompactPolynomial: {
        r.cof.push_back(Poly{{0.0, p.amplitude}});
        for (int m = 0; m < kMaxUMuOrder && m < p.decay_order; ++m) {
            Poly d = r.cof.back().deriv().mul_quadratic(p.e_max, -0.5);
            r.cof.push_back(d.scaled_axpy(r.cof.back(), -double(p.decay_order - m)));
        }
        // expanded representation for the orders past the vanishing degree
        Poly full{{p.amplitude}};
        for (int i = 0; i < p.decay_order; ++i) full = full.mul_quadratic(p.e_max, -0.5);
        full = Poly{{0.0}}.scaled_axpy(full, 1.0); // times u
        r.expanded.push_back(full);
        for (int m = 0; m < kMaxUMuOrder; ++m)
            r.expanded.push_back(r.expanded.back().deriv());
        break;
    }
    case ProfileFamily::PowerLaw: {
        r.cof.push_back(Poly{{0.0, p.amplitude}});
        for (int m = 0; m < kMaxUMuOrder; ++m) {
            Poly d = r.cof.back().deriv().mul_quadratic(1.0, 0.5);
            r.cof.push_back(d.scaled_axpy(r.cof.back(), -double(p.decay_order + m)));
        }
        break;
    }
    }
    return r;
}

const UMuRep& cached_umu_polys(const EquilibriumProfile& p) {
    thread_local EquilibriumProfile last;
    thread_local UMuRep cache;
    if (cache.cof.empty() || last.family != p.family || last.amplitude != p.amplitude ||
        last.beta != p.beta || last.e_max != p.e_max || last.decay_order != p.decay_order) {
        cache = umu_polys(p);
        last = p;
    }
    return cache;
}

double falling(double x, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i) v *= (x - i);
    return v;
}

double rising(double x, int m) {
    double v = 1.0;
    for (int i = 0; i < m; ++i) v *= (x + i);
    return v;
}

} // namespace

EquilibriumProfile EquilibriumProfile::gaussian(double A, double b) {
    EquilibriumProfile p;
    p.family = ProfileFamily::Gaussian;
    p.amplitude = A;
    p.beta = b;
    p.decay_order = 1000; // super-polynomial decay
    p.smoothness_order = 1000;
    return p;
}

EquilibriumProfile EquilibriumProfile::compact_poly(double A, double emax, int n1) {
    EquilibriumProfile p;
    p.family = ProfileFamily::CompactPolynomial;
    p.amplitude = A;
    p.e_max = emax;
    p.decay_order = n1;
    p.smoothness_order = n1;
    return p;
}

EquilibriumProfile EquilibriumProfile::power_law(double A, int n1) {
    EquilibriumProfile p;
    p.family = ProfileFamily::PowerLaw;
    p.amplitude = A;
    p.decay_order = n1;
    p.smoothness_order = n1;
    return p;
}

double EquilibriumProfile::support_cut() const {
    switch (family) {
    case ProfileFamily::CompactPolynomial:
        return std::sqrt(2.0 * e_max);
    case ProfileFamily::Gaussian: {
        double a = std::abs(amplitude);
        if (a <= 0) return 1.0;
        double e = std::log(a / kTailLevel) / beta;
        return std::sqrt(2.0 * std::max(e, 1.0));
    }
    case ProfileFamily::PowerLaw: {
        double a = std::abs(amplitude);
        if (a <= 0) return 1.0;
        double e = std::pow(a / kTailLevel, 1.0 / decay_order) - 1.0;
        return std::sqrt(2.0 * std::max(e, 1.0));
    }
    }
    return 1.0;
}

std::string EquilibriumProfile::name() const {
    switch (family) {
    case ProfileFamily::Gaussian: return "Gaussian";
    case ProfileFamily::CompactPolynomial: return "CompactPolynomial";
    case ProfileFamily::PowerLaw: return "PowerLaw";
    }
    return "?";
}

double eval_mu(const EquilibriumProfile& p, double e) {
    switch (p.family) {
    case ProfileFamily::Gaussian:
        return p.amplitude * std::exp(-p.beta * e);
    case ProfileFamily::CompactPolynomial:
        if (e >= p.e_max) return 0.0;
        return p.amplitude * std::pow(p.e_max - e, p.decay_order);
    case ProfileFamily::PowerLaw:
        return p.amplitude * std::pow(1.0 + e, -p.decay_order);
    }
    return 0.0;
}

double eval_mu_deriv(const EquilibriumProfile& p, double e, int order) {
    if (order == 0) return eval_mu(p, e);
    switch (p.family) {
    case ProfileFamily::Gaussian:
        return p.amplitude * std::pow(-p.beta, order) * std::exp(-p.beta * e);
    case ProfileFamily::CompactPolynomial: {
        if (e >= p.e_max || order > p.decay_order) return 0.0;
        double sign = (order % 2 == 0) ? 1.0 : -1.0;
        return sign * p.amplitude * falling(p.decay_order, order) *
               std::pow(p.e_max - e, p.decay_order - order);
    }
    case ProfileFamily::PowerLaw: {
        double sign = (order % 2 == 0) ? 1.0 : -1.0;
        return sign * p.amplitude * rising(p.decay_order, order) *
               std::pow(1.0 + e, -p.decay_order - order);
    }
    }
    return 0.0;
}

std::complex<double> eval_mu_half_zsq(const EquilibriumProfile& p, std::complex<double> z) {
    std::complex<double> e = 0.5 * z * z;
    switch (p.family) {
    case ProfileFamily::Gaussian:
        return p.amplitude * std::exp(-p.beta * e);
    case ProfileFamily::CompactPolynomial: {
        std::complex<double> v = 1.0;
        for (int i = 0; i < p.decay_order; ++i) v *= (p.e_max - e);
        return p.amplitude * v;
    }
    case ProfileFamily::PowerLaw:
        throw ContinuationUnavailable("PowerLaw has no certified closed-form continuation");
    }
    return 0.0;
}

double eval_umu_deriv(const EquilibriumProfile& p, double u, int order) {
    const auto& rep = cached_umu_polys(p);
    if (order < 0 || order > kMaxUMuOrder)
        throw OutOfRange("umu derivative order out of range");
    switch (p.family) {
    case ProfileFamily::Gaussian:
        return rep.cof[order].eval(u) * std::exp(-0.5 * p.beta * u * u);
    case ProfileFamily::CompactPolynomial: {
        if (u * u >= 2.0 * p.e_max) return 0.0;
        if (order <= p.decay_order) {
            double fac = std::pow(p.e_max - 0.5 * u * u, p.decay_order - order);
            return rep.cof[order].eval(u) * fac;
        }
        return rep.expanded[order].eval(u);
    }
    case ProfileFamily::PowerLaw:
        return rep.cof[order].eval(u) *
               std::pow(1.0 + 0.5 * u * u, -double(p.decay_order + order));
    }
    return 0.0;
}

std::complex<double> eval_umu_deriv_c(const EquilibriumProfile& p,
                                      std::complex<double> u, int order) {
    const auto& rep = cached_umu_polys(p);
    if (order < 0 || order > kMaxUMuOrder)
        throw OutOfRange("umu derivative order out of range");
    switch (p.family) {
    case ProfileFamily::Gaussian:
        return rep.cof[order].eval(u) * std::exp(-0.5 * p.beta * u * u);
    case ProfileFamily::CompactPolynomial: {
        // polynomial continuation, |Re u| < Upsilon
        if (order <= p.decay_order) {
            std::complex<double> base = p.e_max - 0.5 * u * u;
            std::complex<double> fac = 1.0;
            for (int i = 0; i < p.decay_order - order; ++i) fac *= base;
            return rep.cof[order].eval(u) * fac;
        }
        return rep.expanded[order].eval(u);
    }
    case ProfileFamily::PowerLaw:
        throw ContinuationUnavailable("PowerLaw has no certified closed-form continuation");
    }
    return 0.0;
}

double moment_tau(const EquilibriumProfile& p, int j) {
    if (j < 0) throw OutOfRange("moment index must be >= 0");
    if (p.family == ProfileFamily::PowerLaw && 2 * j + 2 >= 2 * p.decay_order - 1)
        throw DivergentMoment("tau moment diverges for this decay order");
    double cut = p.support_cut();
    auto f = [&](double u) {
        return 4.0 * M_PI * std::pow(u, 2 * j + 2) * eval_mu(p, 0.5 * u * u);
    };
    return quad::integrate(f, 0.0, cut);
}

double moment_kappa(const EquilibriumProfile& p, int j) {
    if (!p.compact()) throw InfiniteSupport("kappa moments require compact support");
    if (j < 0) throw OutOfRange("moment index must be >= 0");
    if (j + 1 >= p.decay_order)
        throw DivergentMoment("kappa moment diverges: j+1 >= vanishing order");
    const double U = p.upsilon();
    const int N1 = p.decay_order;
    const double A = p.amplitude;
    // mu(u^2/2) = A 2^-N1 (U-u)^N1 (U+u)^N1 absorbs the (U-u)^{j+1} endpoint
    // factor analytically, leaving a smooth integrand.
    auto f = [&](double u) {
        double c = A * std::pow(0.5, N1);
        double t1 = c * std::pow(U - u, N1 - j - 1) * std::pow(U + u, N1);
        double t2 = c * std::pow(U - u, N1) * std::pow(U + u, N1 - j - 1);
        return 2.0 * M_PI * u * (t1 - t2);
    };
    return quad::integrate(f, 0.0, U);
}

double survival_threshold(const EquilibriumProfile& p) {
    if (!p.compact()) return 0.0;
    const double U = p.upsilon();
    const int N1 = p.decay_order;
    const double A = p.amplitude;
    // 4 pi int_0^U u^2 mu/(U^2-u^2) du with the (U^2-u^2)^N1 factor of mu
    // cancelling one denominator power.
    auto f = [&](double u) {
        double c = A * std::pow(0.5, N1);
        return 4.0 * M_PI * u * u * c * std::pow((U - u) * (U + u), N1 - 1);
    };
    double ksq = quad::integrate(f, 0.0, U);
    return std::sqrt(std::max(ksq, 0.0));
}

MomentTable build_moment_table(const EquilibriumProfile& p, int jmax) {
    MomentTable t;
    for (int j = 0; j <= jmax; ++j) {
        bool ok = true;
        if (p.family == ProfileFamily::PowerLaw && 2 * j + 2 >= 2 * p.decay_order - 1)
            ok = false;
        if (ok) t.tau_sq.push_back(moment_tau(p, j));
    }
    t.kappa0 = survival_threshold(p);
    if (p.compact()) {
        for (int j = 0; j <= jmax && j + 1 < p.decay_order; ++j)
            t.kappa_sq.push_back(moment_kappa(p, j));
        double U = p.upsilon();
        if (t.kappa_sq.size() >= 2)
            t.endpoint_identity_residual =
                std::abs(t.kappa0 * t.kappa0 * U * U - (t.tau_sq[0] + t.kappa_sq[1]));
    }
    return t;
}

ValidationReport validate_profile(const EquilibriumProfile& p) {
    ValidationReport r;
    auto fail = [&r](const std::string& s) {
        r.pass = false;
        r.failures.push_back(s);
    };
    if (!(p.amplitude > 0)) fail("negativity: amplitude must be positive");
    if (p.smoothness_order < 4) fail("smoothness_order below 4");
    if (p.decay_order < 4) fail("decay_order below 4");
    if (p.family == ProfileFamily::Gaussian && !(p.beta > 0))
        fail("Gaussian scale beta must be positive");
    if (p.family == ProfileFamily::CompactPolynomial && !(p.e_max > 0))
        fail("CompactPolynomial energy cutoff must be positive");

    if (r.pass) {
        // positivity of mu(u^2/2) on the open support
        double cut = p.compact() ? p.upsilon() : p.support_cut();
        for (int i = 1; i < 128; ++i) {
            double u = cut * i / 128.0 * (p.compact() ? (1.0 - 1e-9) : 1.0);
            if (!(eval_mu(p, 0.5 * u * u) > 0.0)) {
                fail("connected-support positivity violated at sampled speed");
                break;
            }
        }
        if (p.compact()) {
            // vanishing order: mu(u^2/2)/(U-u)^N1 has a positive limit at U
            double U = p.upsilon();
            double eps = 1e-5 * U;
            double lim = eval_mu(p, 0.5 * (U - eps) * (U - eps)) / std::pow(eps, p.decay_order);
            if (!(lim > 0.0) || !std::isfinite(lim))
                fail("vanishing-order limit at maximal speed not positive");
        } else {
            // decay bound mu(e) <= C <e>^-N1 with C from e=1
            double C = 2.0 * eval_mu(p, 1.0) * std::pow(2.0, p.family == ProfileFamily::PowerLaw
                                                                 ? p.decay_order
                                                                 : 4);
            for (double e : {2.0, 5.0, 10.0, 50.0}) {
                double bound = (p.family == ProfileFamily::PowerLaw)
                                   ? C * std::pow(1.0 + e, -p.decay_order)
                                   : C; // Gaussian decays faster than any power
                if (eval_mu(p, e) > bound + 1e-300) {
                    fail("decay bound violated at sampled energy");
                    break;
                }
            }
        }
    }
    return r;
}

} // namespace vpspec
