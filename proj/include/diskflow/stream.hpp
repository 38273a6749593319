#pragma once

// Stream function psi with Laplacian(psi) = w and psi = 0 on the boundary
// circle, and velocity recovery u = perp(grad psi).
//
// The solve decomposes into angular sine modes (odd symmetry built in, one
// tridiagonal radial solve per mode with psi(1) = 0 and regularity
// psi(0) = 0). Sine modes need uniformly spaced angles, so grids with a
// banded angular map are solved on an internal uniform-angle lattice of the
// same node count and the result is evaluated back onto the field lattice;
// the discrete-Laplacian residual is measured on the solve lattice. An even
// (cosine-mode) branch exists for full-disk test fields.

#include "diskflow/field.hpp"

namespace diskflow {

struct Vec2 {
    double u1 = 0.0;
    double u2 = 0.0;
};

class StreamField {
public:
    StreamField(std::shared_ptr<const PolarGrid> grid, Symmetry sym, double time);

    const PolarGrid& grid() const { return *grid_; }
    std::shared_ptr<const PolarGrid> grid_ptr() const { return grid_; }
    int nr() const { return grid_->nr(); }
    int ntheta() const { return grid_->ntheta(); }
    Symmetry symmetry() const { return sym_; }
    double time() const { return time_; }

    double at(int i, int j) const { return values_[size_t(i) * ntheta() + j]; }
    double& at(int i, int j) { return values_[size_t(i) * ntheta() + j]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Row-relative residual of the discrete Laplacian on the solve
    // lattice: |L_h psi - w| scaled per row by |w|_inf plus the row's own
    // operator-term magnitudes.
    double solve_residual() const { return residual_; }
    void set_solve_residual(double r) { residual_ = r; }

private:
    std::shared_ptr<const PolarGrid> grid_;
    std::vector<double> values_;
    Symmetry sym_;
    double time_ = 0.0;
    double residual_ = 0.0;
};

// ntheta_solve = 0 picks the solve-lattice angular count automatically:
// the field's own count for uniform grids, a finer uniform lattice
// (max(4 ntheta, 2048)) for banded ones.
StreamField solve_stream(const VorticityField& f, Symmetry sym = Symmetry::Odd,
                         int ntheta_solve = 0);

// perp gradient of the stream interpolant at p, chain-ruled through the
// polar map. Odd fields have u1 odd / u2 even across the axis.
Vec2 velocity_from_stream(const StreamField& s, Point2 p);

// Velocities at every grid node (node slopes of the interpolant).
std::vector<Vec2> velocity_at_nodes(const StreamField& s);

} // namespace diskflow
