#ifndef VPSPEC_DISPERSION_HPP
#define VPSPEC_DISPERSION_HPP

#include "vpspec/equilibrium.hpp"

#include <complex>

namespace vpspec {

using Complex = std::complex<double>;

/// Which branch of H(z) a value came from.  `upper` is the half-plane of
/// analyticity Im z > 0, `boundary` the Im z -> 0+ limit on the real axis,
/// `continued` the extension below the axis past the velocity support.
enum class HBranch { upper, boundary, continued };

struct HValue {
    Complex value;
    HBranch branch;
};

struct DispersionSample {
    double k = 0.0;
    Complex lambda;
    Complex value;
    HBranch branch = HBranch::upper;
};

/// H(z) = 2 pi int u mu(u^2/2) / (z - u) du.
/// Im z > 0: direct integral (singularity-subtracted near the axis).
/// Im z = 0, |Re z| < Upsilon: Plemelj boundary value from above,
///   2 pi P.V. int u mu/(x-u) du - 2 i pi^2 x mu(x^2/2).
///   (The boundary-value sign is fixed by the gamma -> 0+ limit; the test
///   suite verifies it produces Re lambda < 0 past the survival threshold.)
/// Im z = 0, |Re z| >= Upsilon: real integral 4 pi int_0^U u^2 mu/(z^2-u^2) du.
/// Im z < 0: direct value plus the jump -4 pi^2 i z mu(z^2/2) across the
///   velocity support, using the family's closed-form continuation of mu.
HValue eval_H(const EquilibriumProfile& p, Complex z);

/// d^m H / dz^m on the same branches, m <= 4, computed by moving the
/// derivative onto u mu(u^2/2) (its endpoint values vanish to the orders
/// required for decay_order >= 4).
Complex eval_H_deriv(const EquilibriumProfile& p, Complex z, int order);

/// D(lambda, k) = 1 - H(i lambda / k) / k^2.
DispersionSample eval_D(const EquilibriumProfile& p, Complex lambda, double k);
/// d^m D / d lambda^m, m >= 1.
Complex eval_D_deriv(const EquilibriumProfile& p, Complex lambda, double k, int order = 1);

/// N(t) = 2 pi int e^{-iut} u mu(u^2/2) du = -4 pi i int_0^inf sin(ut) u mu du.
Complex eval_N(const EquilibriumProfile& p, double t);

/// Real time-domain kernel of the per-mode Volterra equation
/// rho = S + K * rho, with Laplace transform 1 - D(lambda, k):
/// K_k(s) = -i N(ks)/k = -(4 pi / k) int_0^inf sin(u k s) u mu(u^2/2) du.
double volterra_kernel(const EquilibriumProfile& p, double k, double s);

/// omega(y) = 2 pi int u^2 mu/(1 - y u^2) du and its first two y-derivatives
/// (order = 0, 1, 2), for y in [0, Upsilon^-2].
double eval_omega(const EquilibriumProfile& p, double y, int order);

} // namespace vpspec

#endif
