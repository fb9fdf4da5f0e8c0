#ifndef VPSPEC_SPECTRAL_HPP
#define VPSPEC_SPECTRAL_HPP

#include "vpspec/dispersion.hpp"
#include "vpspec/equilibrium.hpp"

#include <complex>
#include <vector>

namespace vpspec {

/// One point of the oscillatory (Langmuir) branch lambda = +- i tau_*(k),
/// 0 < k <= kappa0, with derivative data from the omega identities.
struct BranchPoint {
    double k = 0.0;
    double tau_star = 0.0;       // oscillation frequency
    double dtau = 0.0;           // tau_*'(k), the group velocity
    double d2tau = 0.0;          // tau_*''(k)
    double phase_velocity = 0.0; // nu_* = tau_*/k
    double group_velocity = 0.0; // = dtau
    double x_star = 0.0;         // tau_*^2, solves x = omega(k^2/x)
    double x_residual = 0.0;     // |x_* - omega(k^2/x_*)|
    double fd_discrepancy = 0.0; // relative gap, identity vs finite differences
};

BranchPoint langmuir_branch(const EquilibriumProfile& p, double k);

/// Branch scan over a k-grid; throws if the finite-difference cross-check of
/// tau_*' disagrees with the omega-identity value beyond 1e-4 relative.
std::vector<BranchPoint> branch_scan(const EquilibriumProfile& p,
                                     const std::vector<double>& k_grid);

struct DampedRoot {
    double k = 0.0;
    Complex lambda;              // Re lambda <= 0
    double newton_residual = 0.0;
    double predicted_rate = 0.0; // asymptotic-law value of Re lambda
};

/// Newton iteration on the analytically continued D, |D| < 1e-12 at the root.
DampedRoot damped_root(const EquilibriumProfile& p, double k, Complex seed);

/// Landau damping law.
/// Gaussian (Upsilon = inf):  -(pi^2/tau0) [u^3 mu(u^2/2)] at u = nu_* = tau0/k.
/// Compact:  -(2 pi^2 k / kappa1^2) [u mu(u^2/2)] at u = nu_*(k), nu_* solved
/// from the quadratic endpoint expansion k^2 = kappa0^2 + kappa1^2 (U - nu)
/// + kappa2^2 (U - nu)^2.  (The extra factor k and the quadratic nu_* follow
/// from the derivation; see README notes on conventions.)
double landau_rate_asymptotic(const EquilibriumProfile& p, double k);

/// Upper half lambda_+(k) continued past the survival threshold.
struct RootCurve {
    std::vector<double> k;
    std::vector<Complex> lambda;
    double delta0 = 0.0; // width of validated continuation past kappa0
};

/// Pseudo-arclength continuation of lambda_+ upward from kappa0 (compact) or
/// from 0+ (infinite support), until Newton fails, the root leaves the
/// continuation strip |Im lambda / k| < Upsilon, or k reaches kappa0 + k_cap.
RootCurve damped_continuation(const EquilibriumProfile& p, double dk = 0.01,
                              double k_cap = 1.0);

struct Rectangle {
    double re_min, re_max, im_min, im_max;
};

/// Argument-principle zero count (1/2 pi i) oint D'/D over the rectangle,
/// which must lie in Re lambda >= 1e-3.
int winding_number(const EquilibriumProfile& p, double k, const Rectangle& rect,
                   double* residual = nullptr);

/// min |D| over the boundary Re lambda = 0 on a (k, tau) grid, combined with
/// the analytic far-field bound; spectral stability makes it the min over the
/// whole closed right half-plane.
double penrose_margin(const EquilibriumProfile& p, double k_min, double k_max,
                      int nk = 32, int ntau = 400);

} // namespace vpspec

#endif
