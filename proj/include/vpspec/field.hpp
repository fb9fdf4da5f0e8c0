#ifndef VPSPEC_FIELD_HPP
#define VPSPEC_FIELD_HPP

#include "vpspec/equilibrium.hpp"
#include "vpspec/green.hpp"

#include <complex>
#include <vector>

namespace vpspec {

/// Spatial factor a(x) of the separable data f0 = a(x) b(|v|), carried as the
/// closed-form transform a_hat(k): a Gaussian bump of width sigma, optionally
/// projected to zero average (a_hat(0) = 0) via the sigma^2 k^2 multiplier.
struct SpatialProfile {
    double amplitude = 1.0;
    double sigma = 1.0;
    bool zero_average = false;
    double a_hat(double k) const;
};

/// Separable initial data; the velocity factor b(u) = mu_b(u^2/2) reuses the
/// equilibrium families.
struct InitialData {
    SpatialProfile spatial;
    EquilibriumProfile velocity = EquilibriumProfile::gaussian(1.0, 1.0);

    /// 4 pi int_0^inf b(u) u^2 du (the r-mass of b).
    double b_mass() const;
    /// B(r) = 4 pi int_0^inf b(u) u^2 sinc(ru) du and d^m B / dr^m, m <= 2.
    double B(double r, int order = 0) const;
    /// Free-transport mode density S_k(t) = a_hat(k) B(kt); real for these
    /// families.  order = 0,1,2 gives d^m/dt^m.
    double S_hat(double k, double t, int order = 0) const;
};

/// Per-mode trace of the free density, charge density, potential and field,
/// with the oscillatory/remainder field split when requested.
struct FieldTrace {
    double k = 0.0;
    std::vector<double> t;
    std::vector<double> S_hat;
    std::vector<double> rho_green;
    std::vector<double> rho_volterra;
    std::vector<Complex> phi_hat; // rho/k^2
    std::vector<Complex> E_hat;   // -ik phi
    std::vector<Complex> E_osc_plus, E_osc_minus, E_r;
    double decomposition_residual = 0.0; // max |E_osc + E_r - E| / max |E|
    double route_deviation = 0.0;        // max |rho_green - rho_volterra| / max |rho|
};

/// rho through the Green route with the Volterra cross-check, then
/// phi = rho/k^2 and E = -ik phi.
FieldTrace potential_trace(const GreenContext& ctx, const InitialData& data, double k,
                           const std::vector<double>& t_grid);

/// Adds the per-mode split E = E_osc+ + E_osc- + E_r from the integration-by-
/// parts form of the resolvent convolution; the per-mode multipliers
/// P2 = 1 - sum a/lambda, P4 = -sum a/lambda^2 come out of the same algebra.
FieldTrace field_decomposition(const GreenContext& ctx, const InitialData& data, double k,
                               const std::vector<double>& t_grid);

/// Chebyshev tables of lambda_+(k) and a_+(k) over the oscillatory support,
/// built once per profile and interpolated inside synthesis integrals.
class BranchTable {
public:
    BranchTable(const GreenContext& ctx, int nodes_per_piece = 48);
    Complex lambda_plus(double k) const;
    Complex a_plus(double k) const;
    double k_max() const { return k_hi_; }

private:
    struct Piece {
        double a, b;
        std::vector<double> nodes;
        std::vector<Complex> lam, res;
    };
    Complex interp(const Piece& pc, const std::vector<Complex>& v, double k) const;
    const Piece& piece(double k) const;
    std::vector<Piece> pieces_;
    double k_hi_ = 0.0;
};

/// Radial component of the oscillatory field synthesized at distance r0 from
/// a point source of separable data (envelope magnitude |2 E_+(t)|):
///   E_+(t) = (1/2 pi^2) int_0^{kmax} k j1(k r0) a_+(k) e^{lambda_+(k) t}
///            [ S_k(0)/lambda_+ + S_k'(0)/lambda_+^2 ] dk.
double synth_osc_point(const BranchTable& table, const InitialData& data, double t,
                       double r0 = 1.0);

struct DecayFit {
    double slope = 0.0;    // exponent alpha in |v| ~ t^-alpha (slope of -log fit)
    double residual = 0.0; // rms log-residual
    bool poor_fit = false; // set when the log-log model explains the data badly
};

/// Least-squares slope of log|v| vs log t restricted to [t_min, t_max];
/// requires at least 8 strictly positive samples in the window.
DecayFit decay_exponent_fit(const std::vector<double>& t, const std::vector<double>& v,
                            double t_min, double t_max);

/// Dominant angular frequency of a sampled real trace (windowed DFT peak,
/// refined far below the bin width by local maximization).
double peak_frequency(const std::vector<double>& values, double dt);

} // namespace vpspec

#endif
