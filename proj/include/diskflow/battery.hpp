#pragma once

// Kernel and oracle test battery behind the validate-kernels command:
// closed-form Green values, symmetry, boundary vanishing, gradient
// consistency against finite differences, symmetrization equivalence, and
// the rigid-rotation analytic solution on a modest grid.

#include <string>
#include <vector>

namespace diskflow {

struct BatteryCheck {
    std::string name;
    double value = 0.0;     // measured metric (error or probe value)
    double threshold = 0.0; // pass when value <= threshold (0 = informational)
    bool pass = false;
};

std::vector<BatteryCheck> kernel_battery(unsigned seed);

std::string battery_text(const std::vector<BatteryCheck>& checks);
bool battery_all_pass(const std::vector<BatteryCheck>& checks);

} // namespace diskflow
