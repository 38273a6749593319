#include "diskflow/kernel.hpp"

#include <random>

namespace diskflow {

double kernel_grad_probe(int samples, unsigned seed, double min_sep) {
    if (samples < 1) throw std::invalid_argument("kernel_grad_probe: samples >= 1");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto interior_point = [&]() {
        // rejection sample inside the disk, away from boundary and center
        for (;;) {
            Point2 p{2.0 * u01(rng) - 1.0, 2.0 * u01(rng)};
            const double rc = norm(p - disk_center);
            if (rc < 0.95 && rc > 5e-3) return p;
        }
    };

    double worst = 0.0;
    for (int n = 0; n < samples; ++n) {
        Point2 x, y;
        double sep;
        do {
            x = interior_point();
            y = interior_point();
            sep = norm(x - y);
        } while (sep < std::max(min_sep, 1e-3));

        const double h = std::min(1e-5, 1e-3 * sep);
        const KernelValue kxp = kernel_K({x.x1 + h, x.x2}, y);
        const KernelValue kxm = kernel_K({x.x1 - h, x.x2}, y);
        const KernelValue kyp = kernel_K({x.x1, x.x2 + h}, y);
        const KernelValue kym = kernel_K({x.x1, x.x2 - h}, y);
        const double g11 = (kxp.k1 - kxm.k1) / (2 * h);
        const double g12 = (kyp.k1 - kym.k1) / (2 * h);
        const double g21 = (kxp.k2 - kxm.k2) / (2 * h);
        const double g22 = (kyp.k2 - kym.k2) / (2 * h);
        const double frob = std::sqrt(g11 * g11 + g12 * g12 + g21 * g21 + g22 * g22);
        worst = std::max(worst, frob * sep * sep);
    }
    return worst;
}

} // namespace diskflow
