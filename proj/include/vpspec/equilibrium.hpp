#ifndef VPSPEC_EQUILIBRIUM_HPP
#define VPSPEC_EQUILIBRIUM_HPP

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace vpspec {

enum class ProfileFamily { Gaussian, CompactPolynomial, PowerLaw };

/// Radial equilibrium mu(e), e = |v|^2/2, from one of three closed-form
/// families.  Closed forms (rather than tabulated data) are required so the
/// smoothness and vanishing orders that drive the spectral theory are exact.
/// A user-supplied family would need mu, its u-derivatives through order 5,
/// and declared (smoothness_order, decay_order, upsilon); see eval_umu_deriv.
struct EquilibriumProfile {
    ProfileFamily family = ProfileFamily::Gaussian;
    double amplitude = 1.0;   // A
    double beta = 1.0;        // Gaussian: mu = A exp(-beta e)
    double e_max = 1.0;       // CompactPolynomial: mu = A (e_max - e)^N1, e <= e_max
    int decay_order = 4;      // N1 (vanishing order at e_max / power-law decay)
    int smoothness_order = 4; // N0

    static EquilibriumProfile gaussian(double A, double b);
    static EquilibriumProfile compact_poly(double A, double emax, int n1);
    static EquilibriumProfile power_law(double A, int n1);

    bool compact() const { return family == ProfileFamily::CompactPolynomial; }
    /// Maximal particle speed: sqrt(2 e_max) for compact support, else +inf.
    double upsilon() const {
        return compact() ? std::sqrt(2.0 * e_max)
                         : std::numeric_limits<double>::infinity();
    }
    /// Radius beyond which mu(u^2/2) < 1e-16: upsilon for compact support,
    /// a documented tail cut otherwise. All velocity quadratures integrate
    /// over |u| <= support_cut.
    double support_cut() const;
    std::string name() const;
};

/// mu(e); zero outside the support.
double eval_mu(const EquilibriumProfile& p, double e);
/// d^m mu / de^m, m <= 6.
double eval_mu_deriv(const EquilibriumProfile& p, double e, int order);
/// Closed-form complex continuation of mu(.) evaluated at e = z^2/2.
/// Available for Gaussian (entire) and CompactPolynomial (polynomial);
/// PowerLaw throws ContinuationUnavailable.
std::complex<double> eval_mu_half_zsq(const EquilibriumProfile& p, std::complex<double> z);

/// d^m/du^m [ u mu(u^2/2) ], m <= 5 (closed form per family).
double eval_umu_deriv(const EquilibriumProfile& p, double u, int order);
/// Same derivative evaluated at a complex argument through the family's
/// closed-form continuation (families as in eval_mu_half_zsq).
std::complex<double> eval_umu_deriv_c(const EquilibriumProfile& p,
                                      std::complex<double> u, int order);

/// tau_j^2 = 2 pi int u^{2j+2} mu(u^2/2) du over |u| < Upsilon.
double moment_tau(const EquilibriumProfile& p, int j);

/// kappa_j^2 = 2 pi int u mu(u^2/2) / (Upsilon - u)^{j+1} du, compact support
/// only, computed through the symmetrized nonsingular form.
double moment_kappa(const EquilibriumProfile& p, int j);

/// kappa_0: zero when Upsilon = inf, else sqrt(4 pi int_0^U u^2 mu/(U^2-u^2) du).
double survival_threshold(const EquilibriumProfile& p);

struct MomentTable {
    std::vector<double> tau_sq;
    std::vector<double> kappa_sq; // empty unless compact support
    double kappa0 = 0.0;
    /// | kappa0^2 Upsilon^2 - (tau0^2 + kappa1^2) |, reported because the
    /// two endpoint expressions do not agree for these definitions; all
    /// downstream code uses tau*(kappa0) = kappa0 * Upsilon.
    double endpoint_identity_residual = 0.0;
};
MomentTable build_moment_table(const EquilibriumProfile& p, int jmax);

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> failures;
};
ValidationReport validate_profile(const EquilibriumProfile& p);

} // namespace vpspec

#endif
