#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vpspec/equilibrium.hpp"
#include "vpspec/errors.hpp"
#include "vpspec/quadrature.hpp"

#include <cmath>

using namespace vpspec;

namespace {
const double kA3 = std::pow(2 * M_PI, -1.5);

// Independent composite-Simpson integrator for brute-force oracles.
double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    double h = (b - a) / n, acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}
} // namespace

TEST_CASE("eval_mu closed forms") {
    auto g = EquilibriumProfile::gaussian(kA3, 1.0);
    CHECK(eval_mu(g, 0.0) == doctest::Approx(kA3).epsilon(1e-14));
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    CHECK(eval_mu(c, 1.0) == 0.0);
    CHECK(eval_mu(c, 1.5) == 0.0);
    CHECK(eval_mu(c, 0.5) == doctest::Approx(0.0625).epsilon(1e-14));
    auto pl = EquilibriumProfile::power_law(2.0, 4);
    CHECK(eval_mu(pl, 1.0) == doctest::Approx(2.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("umu derivatives against finite differences") {
    for (auto p : {EquilibriumProfile::gaussian(0.7, 1.3),
                   EquilibriumProfile::compact_poly(1.1, 1.0, 4),
                   EquilibriumProfile::power_law(0.9, 5)}) {
        for (double u : {0.1, 0.5, 1.1}) {
            for (int m = 1; m <= 4; ++m) {
                double h = 1e-5;
                double fd = (eval_umu_deriv(p, u + h, m - 1) -
                             eval_umu_deriv(p, u - h, m - 1)) /
                            (2 * h);
                CHECK(eval_umu_deriv(p, u, m) == doctest::Approx(fd).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("gaussian tau moments: closed-form identities") {
    auto g = EquilibriumProfile::gaussian(kA3, 1.0);
    // 2 pi A int u^2 e^{-u^2/2} du = 1, fourth moment = 3 (verified by the
    // independent Simpson oracle before freezing)
    double t0_oracle =
        simpson([&](double u) { return 2 * M_PI * kA3 * u * u * std::exp(-u * u / 2); },
                -12.0, 12.0, 4000);
    CHECK(moment_tau(g, 0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(moment_tau(g, 0) == doctest::Approx(t0_oracle).epsilon(1e-9));
    CHECK(moment_tau(g, 1) == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("compact tau moment against brute-force quadrature") {
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    double U = std::sqrt(2.0);
    double oracle = simpson(
        [&](double u) {
            double m = std::max(1.0 - u * u / 2, 0.0);
            return 2 * M_PI * u * u * m * m * m * m;
        },
        -U, U, 4000);
    CHECK(moment_tau(c, 0) == doctest::Approx(oracle).epsilon(1e-9));
    // closed form 1024 sqrt(2) pi / 3465
    CHECK(moment_tau(c, 0) ==
          doctest::Approx(1024.0 * std::sqrt(2.0) * M_PI / 3465.0).epsilon(1e-11));
}

TEST_CASE("survival threshold: closed form and brute-force oracle") {
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    double U = std::sqrt(2.0);
    // brute force on the singular form (integrand is (U-u)^3-smooth)
    double oracle = simpson(
        [&](double u) {
            double m = std::pow(std::max(1.0 - u * u / 2, 0.0), 4);
            double den = U * U - u * u;
            return den > 1e-300 ? 4 * M_PI * u * u * m / den : 0.0;
        },
        0.0, U, 8000);
    double k0sq = 64.0 * std::sqrt(2.0) * M_PI / 315.0;
    CHECK(oracle == doctest::Approx(k0sq).epsilon(1e-9));
    double k0 = survival_threshold(c);
    CHECK(k0 * k0 == doctest::Approx(k0sq).epsilon(1e-11));
    CHECK(k0 == doctest::Approx(0.9500952467576822).epsilon(1e-10));

    SUBCASE("amplitude scaling: kappa0 scales by sqrt(A)") {
        auto c2 = EquilibriumProfile::compact_poly(2.0, 1.0, 4);
        CHECK(survival_threshold(c2) ==
              doctest::Approx(std::sqrt(2.0) * k0).epsilon(1e-12));
    }
    SUBCASE("infinite support gives zero") {
        CHECK(survival_threshold(EquilibriumProfile::gaussian(1.0, 1.0)) == 0.0);
        CHECK(survival_threshold(EquilibriumProfile::power_law(1.0, 4)) == 0.0);
    }
}

TEST_CASE("kappa moments: identity with threshold and brute force") {
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    double U = std::sqrt(2.0);
    double k0 = survival_threshold(c);
    CHECK(moment_kappa(c, 0) == doctest::Approx(k0 * k0).epsilon(1e-8));
    // kappa_1^2 via brute force 8 pi U int u^2 mu / (U^2-u^2)^2 du
    double oracle = simpson(
        [&](double u) {
            double m = std::pow(std::max(1.0 - u * u / 2, 0.0), 4);
            double den = (U * U - u * u);
            return den > 1e-300 ? 8 * M_PI * U * u * u * m / (den * den) : 0.0;
        },
        0.0, U, 8000);
    CHECK(moment_kappa(c, 1) == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(moment_kappa(c, 1) == doctest::Approx(64.0 * M_PI / 105.0).epsilon(1e-11));

    CHECK_THROWS_AS(moment_kappa(EquilibriumProfile::gaussian(1.0, 1.0), 0),
                    InfiniteSupport);
    CHECK_THROWS_AS(moment_kappa(c, 3), DivergentMoment);
}

TEST_CASE("divergent tau moments for thin power laws") {
    auto pl = EquilibriumProfile::power_law(1.0, 4);
    CHECK_NOTHROW(moment_tau(pl, 1));            // 2j+2 = 4 < 7
    CHECK_THROWS_AS(moment_tau(pl, 3), DivergentMoment); // 2j+2 = 8 > 7
}

TEST_CASE("moment table: endpoint identity residual is reported, nonzero") {
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    MomentTable t = build_moment_table(c, 2);
    REQUIRE(t.tau_sq.size() == 3);
    REQUIRE(t.kappa_sq.size() == 3);
    double U = std::sqrt(2.0);
    // kappa0^2 U^2 = 1.8054, tau0^2 + kappa1^2 = 3.2279: the printed identity
    // of the source theory does not hold for these moment definitions, and the
    // residual must be surfaced rather than assumed away.
    CHECK(t.endpoint_identity_residual ==
          doctest::Approx(std::abs(t.kappa0 * t.kappa0 * U * U -
                                   (t.tau_sq[0] + t.kappa_sq[1]))));
    CHECK(t.endpoint_identity_residual > 1.0);
    CHECK(t.endpoint_identity_residual < 2.0);
}

TEST_CASE("moment linearity in amplitude") {
    auto c1 = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    auto c3 = EquilibriumProfile::compact_poly(3.0, 1.0, 4);
    for (int j : {0, 1}) {
        CHECK(moment_tau(c3, j) == doctest::Approx(3.0 * moment_tau(c1, j)).epsilon(1e-12));
    }
}

TEST_CASE("validate_profile") {
    CHECK(validate_profile(EquilibriumProfile::gaussian(1.0, 1.0)).pass);
    CHECK(validate_profile(EquilibriumProfile::compact_poly(1.0, 1.0, 4)).pass);

    auto bad_order = EquilibriumProfile::compact_poly(1.0, 1.0, 2);
    auto r = validate_profile(bad_order);
    CHECK_FALSE(r.pass);
    bool mentions_decay = false;
    for (auto& f : r.failures)
        if (f.find("decay_order") != std::string::npos) mentions_decay = true;
    CHECK(mentions_decay);

    auto negative = EquilibriumProfile::compact_poly(-1.0, 1.0, 4);
    auto r2 = validate_profile(negative);
    CHECK_FALSE(r2.pass);
    bool mentions_neg = false;
    for (auto& f : r2.failures)
        if (f.find("negativity") != std::string::npos) mentions_neg = true;
    CHECK(mentions_neg);
}

TEST_CASE("quadrature refinement stability") {
    auto c = EquilibriumProfile::compact_poly(1.0, 1.0, 4);
    double loose = survival_threshold(c);
    // same computation at the default (tight) tolerance must agree better than
    // the reported tolerance
    CHECK(loose * loose == doctest::Approx(64.0 * std::sqrt(2.0) * M_PI / 315.0)
                               .epsilon(1e-10));
}
