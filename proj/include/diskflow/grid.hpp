#pragma once

// Tensor polar grid about the disk center. Node (i,j) sits at
// (r_i, theta_j) with physical position (r sin(theta), 1 - r cos(theta)),
// so theta = 0 is the lower vertical axis and theta = pi the upper one;
// all nodes lie in the closed half disk D+.
//
// Radial maps: the polynomial grading law r_i = 1 - (1 - s_i)^q (uniform
// s_i, default q = 2), or a band map whose depth spacing below the
// boundary circle grows geometrically from radial_h0. The polynomial law
// is the default; the band map exists because large q drives the last
// cell width below machine epsilon long before it reaches deep relative
// resolution. Angular maps: uniform, or the analogous geometric band
// at theta = 0. Band maps give scale-relative resolution around the
// origin, where the flow's hyperbolic point sits.

#include "diskflow/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace diskflow {

enum class ThetaMap { Uniform, Band };
enum class RadialMap { Poly, Band };

struct GridSpec {
    int nr = 128;
    int ntheta = 256;
    double radial_q = 2.0;
    ThetaMap theta_map = ThetaMap::Uniform;
    double band_h0 = 1e-6;       // nominal first angular spacing (band map)
    double band_growth = 1.15;   // angular spacing ratio per interval
    RadialMap radial_map = RadialMap::Poly;
    double radial_h0 = 1e-8;     // nominal first depth spacing below r = 1
    double radial_growth = 1.15; // radial depth spacing ratio

    bool operator==(const GridSpec&) const = default;
};

class PolarGrid {
public:
    explicit PolarGrid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int nr() const { return spec_.nr; }
    int ntheta() const { return spec_.ntheta; }
    bool uniform_theta() const { return spec_.theta_map == ThetaMap::Uniform; }

    double r(int i) const { return r_[i]; }
    double theta(int j) const { return theta_[j]; }
    const std::vector<double>& radii() const { return r_; }
    const std::vector<double>& thetas() const { return theta_; }

    Point2 node_point(int i, int j) const { return point(r_[i], theta_[j]); }

    static Point2 point(double r, double theta) {
        return {r * std::sin(theta), 1.0 - r * std::cos(theta)};
    }

    // (r, theta) of a physical point; theta uses |x1| (callers handle the
    // odd reflection). r may exceed 1 for points outside the disk.
    static void polar_of(Point2 p, double& r, double& theta);

    // Cell index with r_i <= r (clamped to [0, nr-2]); same for theta.
    int radial_cell(double r) const;
    int angular_cell(double theta) const;

    // Local node spacing around theta (max of the two adjacent intervals).
    double theta_spacing_at(double theta) const;
    double boundary_radial_spacing() const { return r_[spec_.nr - 1] - r_[spec_.nr - 2]; }

    // Exact area of the cell [r_i, r_i+1] x [theta_j, theta_j+1].
    double cell_area(int i, int j) const;

    std::string describe() const;

private:
    GridSpec spec_;
    std::vector<double> r_;
    std::vector<double> theta_;
};

} // namespace diskflow
