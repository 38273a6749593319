#include "diskflow/battery.hpp"
#include "diskflow/biot_savart.hpp"
#include "diskflow/field_io.hpp"
#include "diskflow/kernel.hpp"
#include "diskflow/stream.hpp"

#include <random>
#include <sstream>

namespace diskflow {

namespace {

Point2 random_interior(std::mt19937& rng, double margin) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (;;) {
        Point2 p{2.0 * u01(rng) - 1.0, 2.0 * u01(rng)};
        const double rc = norm(p - disk_center);
        if (rc < 1.0 - margin && rc > 1e-2) return p;
    }
}

} // namespace

std::vector<BatteryCheck> kernel_battery(unsigned seed) {
    std::vector<BatteryCheck> out;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    {
        const double got = green({0.0, 1.0}, {0.0, 1.5});
        const double want = -std::log(2.0) / (2.0 * M_PI);
        out.push_back({"green hand value at center/(0,1.5)", std::abs(got - want), 1e-12,
                       std::abs(got - want) <= 1e-12});
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            Point2 x = random_interior(rng, 0.02), y = random_interior(rng, 0.02);
            if (norm(x - y) < 1e-3) continue;
            worst = std::max(worst, std::abs(green(x, y) - green(y, x)));
        }
        out.push_back({"green symmetry over 100 pairs", worst, 1e-12, worst <= 1e-12});
    }
    {
        // boundary vanishing via Richardson extrapolation along radii
        double worst = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double phi = 2.0 * M_PI * (k + 0.5) / 16.0;
            const Point2 dir{std::sin(phi), -std::cos(phi)};
            const Point2 y = random_interior(rng, 0.3);
            const double d = 1e-3;
            const Point2 x1 = disk_center + (1.0 - d) * dir;
            const Point2 x2 = disk_center + (1.0 - 0.5 * d) * dir;
            worst = std::max(worst, std::abs(2.0 * green(x2, y) - green(x1, y)));
        }
        out.push_back({"green boundary limit (extrapolated)", worst, 1e-6, worst <= 1e-6});
    }
    {
        double worst = 0.0;
        const double h = 1e-5;
        for (int k = 0; k < 100; ++k) {
            Point2 x = random_interior(rng, 0.05), y = random_interior(rng, 0.05);
            if (norm(x - y) < 0.05) continue;
            const KernelValue kv = kernel_K(x, y);
            const double d2 = (green({x.x1, x.x2 + h}, y) - green({x.x1, x.x2 - h}, y)) / (2 * h);
            const double d1 = (green({x.x1 + h, x.x2}, y) - green({x.x1 - h, x.x2}, y)) / (2 * h);
            worst = std::max(worst, std::abs(kv.k1 - d2));
            worst = std::max(worst, std::abs(kv.k2 + d1));
        }
        out.push_back({"kernel matches finite-difference gradient", worst, 1e-6,
                       worst <= 1e-6});
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const double phi = 2.0 * M_PI * u01(rng);
            const Point2 n{std::sin(phi), -std::cos(phi)};
            const Point2 x = disk_center + n;
            const Point2 y = random_interior(rng, 0.05);
            const KernelValue kv = kernel_K(x, y);
            worst = std::max(worst, std::abs(kv.k1 * n.x1 + kv.k2 * n.x2));
        }
        out.push_back({"no-flow: kernel normal component on boundary", worst, 1e-10,
                       worst <= 1e-10});
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 50; ++k) {
            const Point2 x{0.0, 0.1 + 1.8 * u01(rng)};
            const Point2 y = random_interior(rng, 0.05);
            if (y.x1 <= 1e-6) continue;
            worst = std::max(worst, std::abs(kernel_sym(x, y).k1));
        }
        out.push_back({"symmetrized kernel first component on axis", worst, 0.0,
                       worst == 0.0});
    }
    {
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            Point2 x = random_interior(rng, 0.02), y = random_interior(rng, 0.02);
            const double sep = norm(x - y);
            if (sep < 1e-3) continue;
            const KernelValue kv = kernel_K(x, y);
            worst = std::max(worst, std::hypot(kv.k1, kv.k2) * sep);
        }
        out.push_back({"|K| |x-y| bounded over 1e4 pairs", worst, 5.0, worst <= 5.0});
    }
    {
        // half-disk symmetrized quadrature vs full-disk odd-extension quadrature
        auto grid = std::make_shared<PolarGrid>(GridSpec{48, 96, 2.0, ThetaMap::Uniform,
                                                         1e-6, 1.15});
        const VorticityField f = build_strip_data(0.3, 0.15, grid);
        const QuadratureCache q = QuadratureCache::build(f);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const Point2 x = random_interior(rng, 0.1);
            const Point2 xr = x.x1 >= 0 ? x : reflect(x);
            double s1 = 0.0, s2 = 0.0, t1 = 0.0, t2 = 0.0;
            for (size_t c = 0; c < q.x1.size(); ++c) {
                const Point2 y{q.x1[c], q.x2[c]};
                if (norm2(xr - y) < 1e-8) continue;
                const double wv = q.w[c] * q.val[c];
                const KernelValue ks = kernel_sym(xr, y);
                const KernelValue ka = kernel_K(xr, y);
                const KernelValue kb = kernel_K(xr, reflect(y));
                s1 += wv * ks.k1;
                s2 += wv * ks.k2;
                t1 += wv * (ka.k1 - kb.k1);
                t2 += wv * (ka.k2 - kb.k2);
            }
            worst = std::max(worst, std::max(std::abs(s1 - t1), std::abs(s2 - t2)));
        }
        out.push_back({"symmetrized kernel equals odd-extension pair", worst, 1e-8,
                       worst <= 1e-8});
    }
    {
        // solid rotation: even extension of 1 gives u = ((x2-1)/2, -x1/2)
        auto grid = std::make_shared<PolarGrid>(GridSpec{96, 192, 1.0, ThetaMap::Uniform,
                                                         1e-6, 1.15});
        const VorticityField f = build_uniform_data(grid);
        const StreamField s = solve_stream(f, Symmetry::Even);
        const QuadratureCache q = QuadratureCache::build(f, Symmetry::Even);
        double worst = 0.0;
        for (int k = 0; k < 60; ++k) {
            // cell midpoints away from the axis (quadrature-aligned probes)
            const int i = 8 + (k * 7) % (grid->nr() - 16);
            const int j = 4 + (k * 11) % (grid->ntheta() - 8);
            const Point2 p = PolarGrid::point(0.5 * (grid->r(i) + grid->r(i + 1)),
                                              0.5 * (grid->theta(j) + grid->theta(j + 1)));
            if (p.x1 < 0.05) continue;
            const Vec2 want{0.5 * (p.x2 - 1.0), -0.5 * p.x1};
            const double scale = std::max(0.05, std::hypot(want.u1, want.u2));
            const Vec2 us = velocity_from_stream(s, p);
            const Vec2 ud = velocity_direct(p, q);
            worst = std::max(worst, std::hypot(us.u1 - want.u1, us.u2 - want.u2) / scale);
            worst = std::max(worst, std::hypot(ud.u1 - want.u1, ud.u2 - want.u2) / scale);
        }
        out.push_back({"solid-rotation analytic velocity, both paths", worst, 5e-3,
                       worst <= 5e-3});
    }
    {
        const double all = kernel_grad_probe(2000, seed);
        const double far = kernel_grad_probe(2000, seed, 0.5);
        out.push_back({"gradient-bound probe (restricted below unrestricted)",
                       far <= all ? 0.0 : far - all, 0.0, far <= all});
    }
    return out;
}

std::string battery_text(const std::vector<BatteryCheck>& checks) {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
           << " (value=" << format_double(c.value)
           << ", threshold=" << format_double(c.threshold) << ")\n";
    return os.str();
}

bool battery_all_pass(const std::vector<BatteryCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

} // namespace diskflow
