#ifndef VPSPEC_QUADRATURE_HPP
#define VPSPEC_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace vpspec::quad {

// Default tolerances for all adaptive quadratures in the library.
inline constexpr double kAbsTol = 1e-12;
inline constexpr double kRelTol = 1e-10;

/// Adaptive Gauss-Kronrod integration of f on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = kAbsTol, double rel_tol = kRelTol);

/// Complex-valued integrand, real interval.
std::complex<double> integrate_c(const std::function<std::complex<double>(double)>& f,
                                 double a, double b,
                                 double abs_tol = kAbsTol, double rel_tol = kRelTol);

/// Cauchy principal value of int_a^b f(u)/(u - pole) du with second-order
/// singularity subtraction:
///   int [f(u) - f(p) - f'(p)(u-p)]/(u-p) du + f(p) log|(b-p)/(p-a)| + f'(p)(b-a).
/// df is f'; if absent it is computed by Richardson finite differences.
double pv_integral(const std::function<double(double)>& f,
                   const std::function<double(double)>& df,
                   double pole, double a, double b,
                   double abs_tol = kAbsTol, double rel_tol = kRelTol);
double pv_integral(const std::function<double(double)>& f,
                   double pole, double a, double b,
                   double abs_tol = kAbsTol, double rel_tol = kRelTol);

/// Composite Gauss-Legendre panels with precomputed nodes and weights,
/// for oscillatory contour segments where the same nodes serve many t.
struct Panels {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Panels on [a,b] sized so that a phase factor e^{i w x} with |w| <= max_phase
/// is resolved: panel length keeps |w|*len <= phase_per_panel (with a floor on
/// the panel count). Node count per panel is 16.
Panels build_panels(double a, double b, double max_phase,
                    double phase_per_panel = 2.5, int min_panels = 4,
                    std::size_t max_nodes = 2000000);

/// 16-point Gauss-Legendre rule on [-1,1].
const std::vector<double>& gl16_nodes();
const std::vector<double>& gl16_weights();

} // namespace vpspec::quad

#endif
