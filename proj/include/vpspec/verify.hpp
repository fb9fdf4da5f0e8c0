#ifndef VPSPEC_VERIFY_HPP
#define VPSPEC_VERIFY_HPP

#include "vpspec/equilibrium.hpp"

#include <string>
#include <vector>

namespace vpspec {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured residual / quantity
    double threshold = 0.0; // bound it was held against
};

/// Property suite over one profile; `tol_scale` scales every threshold
/// (1 = shipped tolerances).
std::vector<CheckResult> verify_profile(const EquilibriumProfile& p, double tol_scale = 1.0);

/// Suite over both shipped default profiles.
std::vector<CheckResult> verify_default_suite(double tol_scale = 1.0);

} // namespace vpspec

#endif
