#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "diskflow/field.hpp"
#include "diskflow/field_io.hpp"

#include <cstdio>
#include <fstream>

using namespace diskflow;

namespace {

std::shared_ptr<PolarGrid> uniform_grid(int nr, int nt, double q = 2.0) {
    return std::make_shared<PolarGrid>(GridSpec{nr, nt, q, ThetaMap::Uniform, 1e-6, 1.15});
}

std::shared_ptr<PolarGrid> band_grid(int nr, int nt, double q, double h0, double g) {
    return std::make_shared<PolarGrid>(GridSpec{nr, nt, q, ThetaMap::Band, h0, g});
}

// grid resolving the seeded-data cutoff scale for epsilon=0.05, p=3:
// geometric refinement toward the origin in both directions
std::shared_ptr<PolarGrid> scenario_grid() {
    return std::make_shared<PolarGrid>(GridSpec{224, 512, 2.0, ThetaMap::Band, 1e-10,
                                                1.15, RadialMap::Band, 1e-10, 1.15});
}

std::string temp_path(const char* name) {
    return std::string("/tmp/diskflow_test_") + name;
}

} // namespace

TEST_CASE("grid construction and lookup") {
    auto g = band_grid(64, 128, 4.0, 1e-6, 1.2);
    CHECK(g->r(0) == 0.0);
    CHECK(g->r(63) == 1.0);
    CHECK(g->theta(0) == 0.0);
    CHECK(g->theta(127) == doctest::Approx(M_PI));
    for (int i = 0; i + 1 < 64; ++i) CHECK(g->r(i) < g->r(i + 1));
    for (int j = 0; j + 1 < 128; ++j) CHECK(g->theta(j) < g->theta(j + 1));
    // total area of all cells is the half disk
    double area = 0.0;
    for (int i = 0; i + 1 < 64; ++i)
        for (int j = 0; j + 1 < 128; ++j) area += g->cell_area(i, j);
    CHECK(area == doctest::Approx(M_PI / 2).epsilon(1e-12));
    // cell lookup brackets
    for (double r : {0.001, 0.3, 0.77, 0.9999}) {
        const int i = g->radial_cell(r);
        CHECK(g->r(i) <= r);
        CHECK(r <= g->r(i + 1));
    }
}

TEST_CASE("strip data plateau, axis and sup norm") {
    auto grid = uniform_grid(96, 192);
    const VorticityField f = build_strip_data(0.2, 0.1, grid);

    // value 1 well past the strip
    CHECK(sample(f, {0.4, boundary_height(0.4) + 0.3}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sample(f, {0.0, 0.3}) == 0.0);
    CHECK(sup_norm(f) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(build_strip_data(0.6, 0.1, grid), std::invalid_argument);
    CHECK_THROWS_AS(build_strip_data(0.2, 0.3, grid), std::invalid_argument);
}

TEST_CASE("seeded data: plateau on the wedge, axis zero, gradient scale") {
    auto grid = scenario_grid();
    DataParams p; // epsilon 0.05, delta 0.2, exponent 3
    const VorticityField f = build_ks_data(p, grid);

    const double eps = p.epsilon;
    CHECK(sample(f, {eps / 2, eps / 4}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sample(f, {0.0, 0.5}) == 0.0);
    CHECK(sup_norm(f) == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : f.values()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }

    // unit jump over the inner cutoff width
    const double a0 = std::pow(eps, 3.0);
    const double w0 = 0.3 * a0;
    const double gs = grad_sup_fd(f);
    CHECK(gs >= 0.1 / w0);
    CHECK(gs <= 10.0 / w0);

    // zero in the exclusion ball away from the wedge
    CHECK(sample(f, {0.1, 0.15}) == 0.0);
    // one outside the strip and the ball
    CHECK(sample(f, {0.4, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("seeded data rejects unresolvable cutoff") {
    auto coarse = uniform_grid(64, 128);
    DataParams p;
    CHECK_THROWS_WITH_AS(build_ks_data(p, coarse),
                         doctest::Contains("does not resolve the cutoff"),
                         std::invalid_argument);
    CHECK_THROWS_AS(build_ks_data({.epsilon = 0.3, .delta = 0.2}, coarse),
                    std::invalid_argument);
}

TEST_CASE("sample: node exactness, odd reflection, plateau") {
    auto grid = uniform_grid(64, 128);
    const VorticityField f = build_strip_data(0.3, 0.15, grid);

    for (int i : {0, 5, 31, 62, 63})
        for (int j : {0, 17, 64, 126, 127}) {
            const Point2 p = grid->node_point(i, j);
            CHECK(sample(f, p) == doctest::Approx(f.at(i, j)).epsilon(1e-14));
        }

    CHECK(sample(f, {-0.3, 0.8}) == doctest::Approx(-sample(f, {0.3, 0.8})).epsilon(1e-14));
    CHECK(sample(f, {0.55, 0.9}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(sample(f, {1.4, 1.8}), std::domain_error);
}

TEST_CASE("sample scaling and near-additivity") {
    auto grid = uniform_grid(48, 96);
    VorticityField f(grid);
    VorticityField g(grid);
    for (int i = 0; i < 48; ++i)
        for (int j = 0; j < 96; ++j) {
            const Point2 p = grid->node_point(i, j);
            f.at(i, j) = p.x1 * p.x2;
            g.at(i, j) = std::sin(3 * p.x1) + 0.2 * p.x2;
        }
    const Point2 probe{0.33, 0.71};

    // the monotone slopes are 1-homogeneous, so scaling is exact
    VorticityField fs(grid);
    for (size_t k = 0; k < fs.values().size(); ++k) fs.values()[k] = -2.5 * f.values()[k];
    CHECK(sample(fs, probe) == doctest::Approx(-2.5 * sample(f, probe)).epsilon(1e-14));

    // additivity only holds to interpolation accuracy: the slope limiter
    // trades exact superposition for the maximum principle
    VorticityField h(grid);
    for (size_t k = 0; k < h.values().size(); ++k)
        h.values()[k] = 2.0 * f.values()[k] - 0.5 * g.values()[k];
    CHECK(sample(h, probe) ==
          doctest::Approx(2.0 * sample(f, probe) - 0.5 * sample(g, probe)).epsilon(1e-4));
}

TEST_CASE("sup_norm basics") {
    auto grid = uniform_grid(32, 64);
    VorticityField z(grid);
    CHECK(sup_norm(z) == 0.0);

    VorticityField f = build_strip_data(0.2, 0.1, grid);
    CHECK(sup_norm(f) == doctest::Approx(1.0));
    for (double& v : f.values()) v *= 0.5;
    CHECK(sup_norm(f) == doctest::Approx(0.5));
}

TEST_CASE("grad_sup_fd on known fields") {
    auto grid = uniform_grid(96, 192);
    VorticityField c(grid);
    std::fill(c.values().begin(), c.values().end(), 0.7);
    CHECK(grad_sup_fd(c) <= 1e-10);

    VorticityField lin(grid);
    for (int i = 0; i < 96; ++i)
        for (int j = 0; j < 192; ++j) lin.at(i, j) = grid->node_point(i, j).x1;
    CHECK(grad_sup_fd(lin) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("level_set_area") {
    auto grid = uniform_grid(96, 192);
    VorticityField z(grid);
    CHECK(level_set_area(z, 0.5) == 0.0);

    const VorticityField one = build_uniform_data(grid);
    CHECK(level_set_area(one, 0.5) == doctest::Approx(M_PI / 2).epsilon(0.01));

    const double delta = 0.1;
    const VorticityField strip = build_strip_data(delta, delta / 2, grid);
    CHECK(level_set_area(strip, 0.5) >= M_PI / 2 - 2 * delta);
    CHECK(level_set_area(strip, 0.5) < M_PI / 2);
}

TEST_CASE("axis rows stay pinned") {
    auto grid = scenario_grid();
    const VorticityField f = build_ks_data(DataParams{}, grid);
    const int nt = f.ntheta();
    for (int i = 0; i < f.nr(); ++i) {
        CHECK(f.at(i, 0) == 0.0);
        CHECK(f.at(i, nt - 1) == 0.0);
    }
    for (int j = 0; j < nt; ++j) CHECK(f.at(0, j) == 0.0);
}

TEST_CASE("snapshot round trip is bit exact") {
    auto grid = band_grid(48, 96, 3.0, 1e-5, 1.3);
    VorticityField f = build_strip_data(0.25, 0.1, grid);
    f.set_time(1.25);

    const std::string p1 = temp_path("snap1.bin");
    const std::string p2 = temp_path("snap2.bin");
    save_snapshot(f, p1);
    const VorticityField g = load_snapshot(p1);
    CHECK(g.nr() == f.nr());
    CHECK(g.ntheta() == f.ntheta());
    CHECK(g.time() == f.time());
    CHECK(g.values() == f.values());
    CHECK(g.grid().spec() == f.grid().spec());

    save_snapshot(g, p2);
    std::ifstream a(p1, std::ios::binary), b(p2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);

    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("snapshot rejects corrupted magic") {
    const std::string p = temp_path("snap_bad.bin");
    {
        std::ofstream os(p, std::ios::binary);
        os << "NOTMAGIC" << std::string(64, '\0');
    }
    CHECK_THROWS_WITH_AS(load_snapshot(p), doctest::Contains("bad magic"),
                         std::runtime_error);
    std::remove(p.c_str());
}

TEST_CASE("csv export row count and header") {
    auto grid = uniform_grid(12, 16);
    const VorticityField f = build_uniform_data(grid);
    const std::string p = temp_path("field.csv");
    export_csv(f, p);
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    CHECK(line == "r,theta,x1,x2,value");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 12 * 16);
    std::remove(p.c_str());
}
