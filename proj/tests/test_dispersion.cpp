#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vpspec/dispersion.hpp"
#include "vpspec/equilibrium.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <cmath>
#include <future>

using namespace vpspec;

namespace {
const double kA3 = std::pow(2 * M_PI, -1.5);
const Complex I{0.0, 1.0};
const auto gauss = EquilibriumProfile::gaussian(kA3, 1.0);
const auto compact = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
const double U = std::sqrt(2.0);
const double kKappa0Sq = 64.0 * std::sqrt(2.0) * M_PI / 315.0;
} // namespace

TEST_CASE("H decays like tau0^2/z^2 on the imaginary axis") {
    for (const auto& p : {gauss, compact}) {
        double tau0sq = moment_tau(p, 0);
        Complex z{0.0, 1e3};
        Complex v = eval_H(p, z).value * z * z;
        CHECK(std::abs(v - tau0sq) / tau0sq < 1e-4);
    }
}

TEST_CASE("H at the maximal speed equals kappa0^2") {
    HValue h = eval_H(compact, Complex(U, 0.0));
    CHECK(h.branch == HBranch::boundary);
    CHECK(h.value.real() == doctest::Approx(kKappa0Sq).epsilon(1e-10));
    CHECK(h.value.imag() == 0.0);
}

TEST_CASE("H even symmetry for real z beyond the support") {
    // the even reduction H(z) = 4 pi int_0^U u^2 mu/(z^2-u^2) du forces
    // H(-z) = H(z); both signs of the endpoint identity D(+-ikU,k) need it
    double z = 1.7;
    double hp = eval_H(compact, Complex(z, 0.0)).value.real();
    double hm = eval_H(compact, Complex(-z, 0.0)).value.real();
    CHECK(hp == doctest::Approx(hm).epsilon(1e-12));
    CHECK(hp > 0.0); // z^2 > u^2 on the support makes the integrand positive
}

TEST_CASE("Plemelj boundary value matches the upper limit") {
    // gamma -> 0+ Richardson extrapolation, per-profile
    for (const auto& p : {gauss, compact}) {
        double cut = p.compact() ? U : p.support_cut();
        for (double frac : {-0.8, -0.35, 0.12, 0.5, 0.87}) {
            double x = frac * 0.9 * cut;
            Complex hb = eval_H(p, Complex(x, 0.0)).value;
            Complex h1 = eval_H(p, Complex(x, 1e-2)).value;
            Complex h2 = eval_H(p, Complex(x, 1e-3)).value;
            Complex h3 = eval_H(p, Complex(x, 1e-4)).value;
            Complex e1 = (10.0 * h2 - h1) / 9.0;
            Complex e2 = (10.0 * h3 - h2) / 9.0;
            Complex lim = (100.0 * e2 - e1) / 99.0;
            CHECK(std::abs(lim - hb) < 1e-6);
        }
    }
}

TEST_CASE("boundary value against direct Plemelj formula") {
    // independent check: P.V. quadrature + local term, against eval_H
    double x = 0.4;
    auto f = [&](double u) { return eval_umu_deriv(compact, u, 0); };
    auto df = [&](double u) { return eval_umu_deriv(compact, u, 1); };
    double pv = -quad::pv_integral(f, df, x, -U, U); // f/(x-u) = -f/(u-x)
    Complex expect = 2 * M_PI * pv - 2.0 * I * M_PI * M_PI * x * eval_mu(compact, x * x / 2);
    Complex got = eval_H(compact, Complex(x, 0.0)).value;
    CHECK(std::abs(got - expect) < 1e-10);
}

TEST_CASE("continuation joins the boundary from below") {
    for (const auto& p : {gauss, compact}) {
        double cut = p.compact() ? U : p.support_cut();
        double x = 0.3 * cut;
        Complex hb = eval_H(p, Complex(x, 0.0)).value;
        Complex h1 = eval_H(p, Complex(x, -1e-2)).value;
        Complex h2 = eval_H(p, Complex(x, -1e-3)).value;
        Complex h3 = eval_H(p, Complex(x, -1e-4)).value;
        CHECK(eval_H(p, Complex(x, -1e-3)).branch == HBranch::continued);
        Complex e1 = (10.0 * h2 - h1) / 9.0;
        Complex e2 = (10.0 * h3 - h2) / 9.0;
        Complex lim = (100.0 * e2 - e1) / 99.0;
        CHECK(std::abs(lim - hb) < 1e-6);
    }
}

TEST_CASE("continuation unavailable for PowerLaw") {
    auto pl = EquilibriumProfile::power_law(1.0, 5);
    CHECK_THROWS_AS(eval_H(pl, Complex(0.3, -0.1)), ContinuationUnavailable);
}

TEST_CASE("H derivative consistency") {
    for (const auto& p : {gauss, compact}) {
        for (Complex z : {Complex(0.3, 0.4), Complex(1.8, 0.0), Complex(0.2, -0.05)}) {
            double h = 1e-5;
            Complex fd =
                (eval_H_deriv(p, z + h, 0) - eval_H_deriv(p, z - h, 0)) / (2.0 * h);
            Complex an = eval_H_deriv(p, z, 1);
            CHECK(std::abs(fd - an) / std::max(1.0, std::abs(an)) < 1e-8);
        }
    }
}

TEST_CASE("H' at Upsilon equals -kappa1^2") {
    double k1sq = moment_kappa(compact, 1);
    Complex hp = eval_H_deriv(compact, Complex(U, 0.0), 1);
    CHECK(hp.real() == doctest::Approx(-k1sq).epsilon(1e-9));
}

TEST_CASE("uniform bound on H in the closed upper half plane") {
    // C from the time-integral bound: |H| <= int_0^inf |N(t)| dt
    for (const auto& p : {gauss, compact}) {
        double C = quad::integrate([&](double t) { return std::abs(eval_N(p, t).imag()); },
                                   0.0, 60.0, 1e-10, 1e-8) +
                   0.01;
        for (Complex z : {Complex(0.0, 0.1), Complex(0.9, 0.0), Complex(-2.0, 1.0),
                          Complex(0.3, 3.0), Complex(5.0, 0.5)}) {
            CHECK(std::abs(eval_H(p, z).value) <= C * 1.0001);
        }
    }
}

TEST_CASE("D limits and identities") {
    SUBCASE("D -> 1 for large real lambda") {
        Complex d = eval_D(compact, Complex(1e4, 0.0), 1.0).value;
        CHECK(std::abs(d - 1.0) < 1e-6);
    }
    SUBCASE("D(ikU, k) = 1 - kappa0^2/k^2") {
        double k0 = std::sqrt(kKappa0Sq);
        for (double k : {0.5 * k0, k0, 2.0 * k0}) {
            Complex d = eval_D(compact, I * k * U, k).value;
            CHECK(std::abs(d - (1.0 - kKappa0Sq / (k * k))) < 1e-10);
        }
    }
    SUBCASE("D(0,k) = 1 + (2pi/k^2) int mu du > 1") {
        double k = 0.8;
        double m = quad::integrate(
            [&](double u) { return eval_mu(compact, u * u / 2); }, -U, U);
        Complex d = eval_D(compact, Complex(0.0, 0.0), k).value;
        CHECK(d.real() == doctest::Approx(1.0 + 2 * M_PI * m / (k * k)).epsilon(1e-10));
        CHECK(d.real() > 1.0);
        CHECK(std::abs(d.imag()) < 1e-12);
    }
    SUBCASE("reality on the positive real axis") {
        CHECK(std::abs(eval_D(gauss, Complex(0.7, 0.0), 1.3).value.imag()) < 1e-12);
    }
    SUBCASE("conjugate symmetry") {
        Complex lam(0.5, 1.1);
        for (const auto& p : {gauss, compact}) {
            Complex a = eval_D(p, std::conj(lam), 0.9).value;
            Complex b = std::conj(eval_D(p, lam, 0.9).value);
            CHECK(std::abs(a - b) < 1e-12);
        }
    }
}

TEST_CASE("N(t): odd reduction, Gaussian closed form, decay") {
    CHECK(std::abs(eval_N(gauss, 0.0)) == 0.0);
    // N(t) = -i t e^{-t^2/2} for the standard Gaussian
    Complex n1 = eval_N(gauss, 1.0);
    CHECK(n1.real() == 0.0);
    CHECK(n1.imag() == doctest::Approx(-std::exp(-0.5)).epsilon(1e-12));
    // |N| <= C <t>^-N0: the measured tail slope must be at least as steep
    // as -N0 = -4 (it comes out near -(N1+1) = -5 for this family)
    double slope = std::log(std::abs(eval_N(compact, 100.0).imag()) /
                            std::abs(eval_N(compact, 20.0).imag())) /
                   std::log(100.0 / 20.0);
    CHECK(slope <= -4.0);
}

TEST_CASE("volterra kernel: Laplace transform equals 1 - D") {
    // quadrature Laplace-transform oracle at lambda in {1, 1+i, 2 i tau-ish}
    for (const auto& p : {gauss, compact}) {
        double k = 0.9;
        double tail = 60.0 / k;
        for (Complex lam : {Complex(1.0, 0.0), Complex(1.0, 1.0), Complex(0.0, 2.3)}) {
            auto panels = quad::build_panels(0.0, tail, std::abs(lam.imag()) + 0.5);
            Complex lap = 0.0;
            for (std::size_t i = 0; i < panels.nodes.size(); ++i) {
                double s = panels.nodes[i];
                lap += panels.weights[i] * std::exp(-lam * s) * volterra_kernel(p, k, s);
            }
            // first integration-by-parts term corrects the truncated tail
            lap += std::exp(-lam * tail) * volterra_kernel(p, k, tail) / lam;
            Complex want = 1.0 - eval_D(p, lam, k).value;
            CHECK(std::abs(lap - want) < 1e-6);
        }
    }
}

TEST_CASE("omega endpoints and convexity chain") {
    double tau0sq = moment_tau(compact, 0);
    CHECK(eval_omega(compact, 0.0, 0) == doctest::Approx(tau0sq).epsilon(1e-10));
    CHECK(eval_omega(compact, 0.5, 0) ==
          doctest::Approx(kKappa0Sq * U * U).epsilon(1e-9)); // y = U^-2 = 1/2
    // Cauchy-Schwarz omega'^2 <= omega omega''/2 on a y-grid
    for (double y : {0.05, 0.2, 0.35, 0.49}) {
        double w = eval_omega(compact, y, 0);
        double w1 = eval_omega(compact, y, 1);
        double w2 = eval_omega(compact, y, 2);
        CHECK(w1 * w1 <= 0.5 * w * w2 * (1 + 1e-12));
        CHECK(w1 >= 0.0);
        CHECK(w2 >= 0.0);
    }
    CHECK_THROWS_AS(eval_omega(gauss, 0.1, 0), OutOfRange);
}

TEST_CASE("thread safety of dispersion evaluations") {
    auto worker = [&](double off) {
        double acc = 0.0;
        for (int i = 0; i < 24; ++i) {
            Complex lam(0.3 + off, 0.8 + 0.01 * i);
            acc += std::abs(eval_D(compact, lam, 0.7).value);
        }
        return acc;
    };
    auto f1 = std::async(std::launch::async, worker, 0.0);
    auto f2 = std::async(std::launch::async, worker, 0.1);
    auto f3 = std::async(std::launch::async, worker, 0.2);
    double s1 = f1.get(), s2 = f2.get(), s3 = f3.get();
    CHECK(s1 == doctest::Approx(worker(0.0)));
    CHECK(s2 == doctest::Approx(worker(0.1)));
    CHECK(s3 == doctest::Approx(worker(0.2)));
}
