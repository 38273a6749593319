#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diskflow/biot_savart.hpp"
#include "diskflow/stream.hpp"

using namespace diskflow;

namespace {

std::shared_ptr<PolarGrid> uniform_grid(int nr, int nt, double q = 2.0) {
    return std::make_shared<PolarGrid>(GridSpec{nr, nt, q, ThetaMap::Uniform, 1e-6, 1.15});
}

// manufactured odd solution: psi* = (r - r^3) sin(theta), so w = -8 x1 and
// u = (2 x1 (1 - x2), 3 x1^2 + (1 - x2)^2 - 1)
VorticityField manufactured_field(std::shared_ptr<const PolarGrid> grid) {
    VorticityField f(grid);
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.ntheta(); ++j)
            f.at(i, j) = -8.0 * grid->node_point(i, j).x1;
    return f;
}

double manufactured_psi(double r, double theta) { return (r - r * r * r) * std::sin(theta); }

Vec2 manufactured_velocity(Point2 p) {
    const double om = 1.0 - p.x2;
    return {2.0 * p.x1 * om, 3.0 * p.x1 * p.x1 + om * om - 1.0};
}

double mms_error(int nr, int nt) {
    auto grid = uniform_grid(nr, nt);
    const VorticityField f = manufactured_field(grid);
    const StreamField s = solve_stream(f);
    double worst = 0.0;
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j)
            worst = std::max(worst, std::abs(s.at(i, j) -
                                             manufactured_psi(grid->r(i), grid->theta(j))));
    return worst;
}

} // namespace

TEST_CASE("zero vorticity gives zero stream") {
    auto grid = uniform_grid(48, 96);
    const VorticityField f(grid);
    const StreamField s = solve_stream(f);
    for (double v : s.values()) CHECK(v == 0.0);
}

TEST_CASE("manufactured solution converges at second order") {
    const double e1 = mms_error(48, 96);
    const double e2 = mms_error(96, 192);
    CHECK(e1 < 2e-3);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.5);
}

TEST_CASE("boundary row and axis rows are exactly zero, residual tiny") {
    auto grid = uniform_grid(64, 128);
    const VorticityField f = build_strip_data(0.3, 0.15, grid);
    const StreamField s = solve_stream(f);
    for (int j = 0; j < s.ntheta(); ++j) CHECK(s.at(s.nr() - 1, j) == 0.0);
    for (int i = 0; i < s.nr(); ++i) {
        CHECK(s.at(i, 0) == 0.0);
        CHECK(s.at(i, s.ntheta() - 1) == 0.0);
    }
    CHECK(s.solve_residual() <= 1e-10);
}

TEST_CASE("banded grid solve keeps a tiny solve-lattice residual") {
    auto grid = std::make_shared<PolarGrid>(GridSpec{160, 256, 2.0, ThetaMap::Band, 1e-7,
                                                     1.15, RadialMap::Band, 1e-7, 1.15});
    const VorticityField f = manufactured_field(grid);
    const StreamField s = solve_stream(f);
    CHECK(s.solve_residual() <= 1e-10);
    // values still track the manufactured stream
    double worst = 0.0;
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.ntheta(); ++j)
            worst = std::max(worst, std::abs(s.at(i, j) -
                                             manufactured_psi(grid->r(i), grid->theta(j))));
    CHECK(worst < 2e-3);
}

TEST_CASE("velocity_from_stream matches the manufactured velocity") {
    auto grid = uniform_grid(128, 256);
    const VorticityField f = manufactured_field(grid);
    const StreamField s = solve_stream(f);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double r = 0.15 + 0.7 * (k + 0.5) / 100.0;
        const double th = 0.2 + (M_PI - 0.4) * ((k * 37) % 100 + 0.5) / 100.0;
        const Point2 p = PolarGrid::point(r, th);
        const Vec2 got = velocity_from_stream(s, p);
        const Vec2 want = manufactured_velocity(p);
        worst = std::max(worst, std::hypot(got.u1 - want.u1, got.u2 - want.u2));
    }
    CHECK(worst < 2e-3);
}

TEST_CASE("no-flow at the boundary for the spectral path") {
    auto grid = uniform_grid(96, 192);
    const VorticityField f = build_strip_data(0.3, 0.15, grid);
    const StreamField s = solve_stream(f);
    double umax = 0.0;
    for (const Vec2& u : velocity_at_nodes(s)) umax = std::max(umax, std::hypot(u.u1, u.u2));
    for (int k = 0; k < 100; ++k) {
        const double th = M_PI * (k + 0.5) / 100.0;
        const Point2 n{std::sin(th), -std::cos(th)};
        const Vec2 u = velocity_from_stream(s, disk_center + n);
        CHECK(std::abs(u.u1 * n.x1 + u.u2 * n.x2) <= 1e-8 * umax);
    }
}

TEST_CASE("axis velocity vanishes for odd fields") {
    auto grid = uniform_grid(96, 192);
    const VorticityField f = build_strip_data(0.3, 0.15, grid);
    const StreamField s = solve_stream(f);
    for (double x2 : {0.05, 0.3, 0.9, 1.4, 1.9})
        CHECK(std::abs(velocity_from_stream(s, {0.0, x2}).u1) <= 1e-10);
}

TEST_CASE("velocity across the axis follows the odd symmetry") {
    auto grid = uniform_grid(96, 192);
    const VorticityField f = build_strip_data(0.3, 0.15, grid);
    const StreamField s = solve_stream(f);
    const Vec2 up = velocity_from_stream(s, {0.25, 0.8});
    const Vec2 um = velocity_from_stream(s, {-0.25, 0.8});
    CHECK(um.u1 == doctest::Approx(-up.u1).epsilon(1e-13));
    CHECK(um.u2 == doctest::Approx(up.u2).epsilon(1e-13));
}

TEST_CASE("direct quadrature matches the manufactured velocity (odd path)") {
    auto grid = uniform_grid(128, 256);
    const VorticityField f = manufactured_field(grid);
    const QuadratureCache q = QuadratureCache::build(f);
    double worst = 0.0;
    for (int k = 0; k < 40; ++k) {
        const int i = 10 + (k * 11) % (grid->nr() - 20);
        const int j = 6 + (k * 17) % (grid->ntheta() - 12);
        const Point2 p = PolarGrid::point(0.5 * (grid->r(i) + grid->r(i + 1)),
                                          0.5 * (grid->theta(j) + grid->theta(j + 1)));
        if (p.x1 < 0.05) continue;
        const Vec2 got = velocity_direct(p, q);
        const Vec2 want = manufactured_velocity(p);
        worst = std::max(worst, std::hypot(got.u1 - want.u1, got.u2 - want.u2));
    }
    CHECK(worst < 5e-3);
}

TEST_CASE("direct and spectral paths agree on the strip field") {
    auto grid = uniform_grid(128, 384);
    const VorticityField f = build_strip_data(0.2, 0.1, grid);
    const StreamField s = solve_stream(f);
    const QuadratureCache q = QuadratureCache::build(f);

    double umax = 0.0;
    for (const Vec2& u : velocity_at_nodes(s)) umax = std::max(umax, std::hypot(u.u1, u.u2));

    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const int i = 12 + (k * 13) % (grid->nr() - 24);
        const int j = 8 + (k * 23) % (grid->ntheta() - 16);
        const Point2 p = PolarGrid::point(0.5 * (grid->r(i) + grid->r(i + 1)),
                                          0.5 * (grid->theta(j) + grid->theta(j + 1)));
        if (p.x1 < 0.05) continue;
        const Vec2 ud = velocity_direct(p, q);
        const Vec2 us = velocity_from_stream(s, p);
        worst = std::max(worst, std::hypot(ud.u1 - us.u1, ud.u2 - us.u2) / umax);
    }
    CHECK(worst <= 1e-3);
}

TEST_CASE("velocity paths are linear in the vorticity") {
    auto grid = uniform_grid(64, 128);
    VorticityField f = build_strip_data(0.3, 0.15, grid);
    VorticityField f2 = f;
    for (double& v : f2.values()) v *= 2.5;

    const Point2 p{0.4, 0.6};
    const Vec2 u1 = velocity_direct(p, QuadratureCache::build(f));
    const Vec2 u2 = velocity_direct(p, QuadratureCache::build(f2));
    CHECK(u2.u1 == doctest::Approx(2.5 * u1.u1).epsilon(1e-12));
    CHECK(u2.u2 == doctest::Approx(2.5 * u1.u2).epsilon(1e-12));

    const Vec2 s1 = velocity_from_stream(solve_stream(f), p);
    const Vec2 s2 = velocity_from_stream(solve_stream(f2), p);
    CHECK(s2.u1 == doctest::Approx(2.5 * s1.u1).epsilon(1e-12));
    CHECK(s2.u2 == doctest::Approx(2.5 * s1.u2).epsilon(1e-12));
}
