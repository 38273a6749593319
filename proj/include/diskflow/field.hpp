#pragma once

// Discrete vorticity on the half disk D+. The representation stores only
// D+ node values; the full-disk field is the implicit odd extension, so
// queries with x1 < 0 route through the reflection with a sign flip and
// the symmetry residual is exactly zero. The axis columns (theta = 0, pi)
// and the center row are pinned to zero for odd fields.

#include "diskflow/grid.hpp"

#include <memory>
#include <vector>

namespace diskflow {

enum class Symmetry { Odd, Even };

class VorticityField {
public:
    VorticityField(std::shared_ptr<const PolarGrid> grid, double time = 0.0);

    const PolarGrid& grid() const { return *grid_; }
    std::shared_ptr<const PolarGrid> grid_ptr() const { return grid_; }
    int nr() const { return grid_->nr(); }
    int ntheta() const { return grid_->ntheta(); }

    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double at(int i, int j) const { return values_[size_t(i) * ntheta() + j]; }
    double& at(int i, int j) { return values_[size_t(i) * ntheta() + j]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Zero the odd-symmetry rows: theta = 0, theta = pi, and the center.
    void pin_axis();

private:
    std::shared_ptr<const PolarGrid> grid_;
    std::vector<double> values_;
    double time_ = 0.0;
};

struct DataParams {
    double epsilon = 0.05;        // outer abscissa of the seeded region
    double delta = 0.2;           // strip / exclusion-ball scale
    double cutoff_exponent = 3.0; // inner abscissa a0 = epsilon^cutoff_exponent
    double smoothing_width = 0.0; // inner cutoff scale; 0 = 0.3 * a0
};

// Quintic smoothstep ramp: 0 for t <= lo, 1 for t >= hi, C2 monotone between.
double smooth_ramp(double t, double lo, double hi);

// Vorticity equal to one on D+ except a strip of width delta along the
// vertical axis, where it ramps smoothly from zero over [delta - w, delta].
VorticityField build_strip_data(double delta, double w,
                                std::shared_ptr<const PolarGrid> grid);

// Seeded data: one on the wedge O(a0, epsilon) along the lower boundary
// (with a smoothing_width margin), zero elsewhere inside the ball of radius
// delta and in the axis strip, one in the rest of D+. Throws if the grid
// cannot resolve the inner cutoff scale.
VorticityField build_ks_data(const DataParams& params,
                             std::shared_ptr<const PolarGrid> grid);

// Test helper: field identically one on D+ (odd extension implied).
VorticityField build_uniform_data(std::shared_ptr<const PolarGrid> grid);

// Interpolated value at p; odd-symmetric fields return -sample(reflect(p))
// for p.x1 < 0. Monotone cubic, exact at nodes and on constant plateaus.
// Throws if p lies outside the closed disk.
double sample(const VorticityField& f, Point2 p, Symmetry sym = Symmetry::Odd);

double sup_norm(const VorticityField& f);

// Max over nodes of the physical gradient magnitude, by centered
// differences through the polar map.
double grad_sup_fd(const VorticityField& f);

// Measure of {p in D+ : value > threshold}, cell counting with fractional
// boundary cells (bilinear sub-sampling).
double level_set_area(const VorticityField& f, double threshold);

// Midpoint-rule quadrature view of a field: one node per grid cell with
// nonzero midpoint value, image points and area*value weights precomputed.
// Built once per snapshot and shared by every kernel quadrature against it.
struct QuadratureCache {
    const PolarGrid* grid = nullptr;
    Symmetry sym = Symmetry::Odd;
    std::vector<double> x1, x2;         // cell midpoints
    std::vector<double> yb1, yb2;       // their disk-inversion images
    std::vector<double> w, val, wv;     // area, midpoint value, product
    std::vector<int> ci, cj;            // cell indices of packed entries
    std::vector<int> cell_to_packed;    // (nr-1)*(ntheta-1) -> packed or -1
    int cells_r = 0, cells_t = 0;

    int packed_of(int i, int j) const { return cell_to_packed[size_t(i) * cells_t + j]; }

    static QuadratureCache build(const VorticityField& f, Symmetry sym = Symmetry::Odd);
};

} // namespace diskflow
