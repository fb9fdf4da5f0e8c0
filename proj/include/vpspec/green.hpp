#ifndef VPSPEC_GREEN_HPP
#define VPSPEC_GREEN_HPP

#include "vpspec/dispersion.hpp"
#include "vpspec/equilibrium.hpp"
#include "vpspec/spectral.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <vector>

namespace vpspec {

/// Deformed inverse-Laplace contour: the imaginary axis with semicircular
/// detours of the given radius into Re lambda >= 0 around +-i tau_center,
/// truncated at |Im lambda| = tau_max.
struct ContourSpec {
    double tau_center = 0.0;
    double radius = 0.0;
    double tau_max = 0.0;
    double upsilon_star = 0.0; // effective cutoff speed (Upsilon, or the mu < 1e-16 radius)
    std::size_t segment_nodes = 0;
    std::size_t arc_nodes = 0;
};

/// Per-profile state shared across modes: moments, survival threshold, and
/// the root curve lambda_+(k) continued past the threshold.  Immutable after
/// construction.
class GreenContext {
public:
    explicit GreenContext(const EquilibriumProfile& p, double continuation_step = 0.01,
                          double continuation_cap = 1.0);

    const EquilibriumProfile& profile() const { return profile_; }
    double kappa0() const { return kappa0_; }
    double tau0_sq() const { return tau0_sq_; }
    double tau1_sq() const { return tau1_sq_; }
    double tau2_sq() const { return tau2_sq_; }
    double delta0() const { return curve_.delta0; }

    /// Do tracked oscillatory poles exist at this k?
    bool has_roots(double k) const;
    /// lambda_+(k); lambda_-(k) = conj(lambda_+(k)).
    Complex lambda_plus(double k) const;
    /// C^2 smoothstep taper: 1 for k <= kappa0 + delta0/2, 0 past the support
    /// edge min(kappa0 + delta0, kappa0 + 1).
    double taper(double k) const;
    /// Support edge of the oscillatory symbols a_pm.
    double taper_end() const;

private:
    EquilibriumProfile profile_;
    double kappa0_, tau0_sq_, tau1_sq_, tau2_sq_;
    RootCurve curve_;
};

/// Tapered residue weight a_+(k) = taper(k)/dD(lambda_+(k), k); a_- = conj(a_+).
/// Returns 0 outside the oscillatory support.
Complex residue_weight(const GreenContext& ctx, double k);

/// Mode-wise Green function split G_k(t) = delta(t) + sum_pm e^{lambda_pm t}
/// a_pm(k) + remainder; the delta part stays symbolic.
struct GreenDecomposition {
    double k = 0.0;
    bool has_poles = false;
    Complex lambda_plus;
    Complex a_plus;           // tapered
    double taper_value = 0.0; // taper factor baked into a_plus
    std::vector<double> t;
    std::vector<double> remainder; // real G^r_k(t_i)
    ContourSpec contour;
};

/// Oscillatory part sum_pm e^{lambda_pm t} a_pm = 2 Re[a_+ e^{lambda_+ t}].
double green_oscillatory(const GreenDecomposition& g, double t);

/// Remainder by Bromwich quadrature on the deformed contour of
/// 1/D - 1 - G0, where G0 = (-lambda^2 tau0^2 + k^2 tau1^2) /
/// (lambda^4 + tau0^2 lambda^2 - k^2 tau1^2) is the rational model whose
/// inverse transform is known in closed form; the model residues are added
/// back and the (tapered) pole contribution is subtracted.
GreenDecomposition green_remainder(const GreenContext& ctx, double k,
                                   const std::vector<double>& t_grid);

/// The remainder is smooth on the oscillation scale, so a decomposition
/// computed on a coarse grid can be resampled onto a fine one by cubic
/// interpolation (4-point Lagrange), which keeps dense convolutions cheap.
GreenDecomposition resample_remainder(const GreenDecomposition& g,
                                      const std::vector<double>& t_fine);

/// rho(t) = S(t) + int_0^t K(t-s) rho(s) ds by trapezoidal product
/// integration on the uniform grid t_i = i h.
std::vector<double> volterra_density(const EquilibriumProfile& p, double k,
                                     const std::vector<double>& source, double h);

/// Same density through the Green route:
/// rho = S + sum_pm a_pm e^{lambda_pm .} * S + G^r * S (trapezoid).
std::vector<double> green_density(const GreenDecomposition& g,
                                  const std::vector<double>& source, double h);

/// Exact-exponential convolution int_0^t e^{lambda (t-s)} f(s) ds on the grid
/// t_i = i h, with f supplied in closed form (per-step Gauss quadrature);
/// used where trapezoid accuracy is not enough.
std::vector<Complex> convolve_exp(Complex lambda, const std::function<Complex(double)>& f,
                                  std::size_t n, double h);

} // namespace vpspec

#endif
