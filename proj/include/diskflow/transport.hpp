#pragma once

// Time evolution: semi-Lagrangian advection of vorticity along backward
// characteristics, forward tracer trajectories (flow-map samples), and
// co-integration of the comparison abscissae a(t), b(t) in log variables.

#include "diskflow/biot_savart.hpp"
#include "diskflow/field.hpp"
#include "diskflow/stream.hpp"

#include <string>
#include <vector>

namespace diskflow {

struct TracerSet {
    std::vector<Point2> positions;
    std::vector<std::string> labels;
    std::vector<char> on_boundary;

    size_t size() const { return positions.size(); }
};

struct ABState {
    double log_a = 0.0;
    double log_b = 0.0;
    bool valid = true;

    double a() const { return std::exp(log_a); }
    double b() const { return std::exp(log_b); }
};

// dt = cfl * (min physical cell diameter) / (max grid velocity magnitude),
// capped at dt_max; dt_max when the field induces no motion.
double cfl_dt(const VorticityField& f, double cfl, double dt_max,
              Symmetry sym = Symmetry::Odd);

// One transport step: backward two-stage midpoint characteristics with the
// velocity frozen at the step's start time, monotone cubic sampling of the
// old field at the feet, axis rows re-pinned. Feet that leave the closed
// disk are projected onto the boundary; projections beyond round-off are
// counted into *projections.
VorticityField advect(const VorticityField& f, const StreamField& s, double dt,
                      long* projections = nullptr);
VorticityField step(const VorticityField& f, double dt, long* projections = nullptr,
                    Symmetry sym = Symmetry::Odd);

// Forward two-stage midpoint tracer update; boundary-flagged tracers are
// re-projected radially onto the circle after each stage. Velocities come
// from the direct-quadrature path so that tracer contraction matches the
// a(t)/b(t) integration at sub-grid scales.
TracerSet advance_tracers(const TracerSet& tracers, const QuadratureCache& q, double dt);

// Midpoint update of log a, log b with rates from segment extrema of the
// scaled velocity ratio; marks the state invalid if the bracket collapses.
ABState integrate_ab(const ABState& state, const QuadratureCache& q, double dt,
                     int samples = 64, int refine = 6);

// Minimum interpolated vorticity over a probe lattice of O(a, b),
// uniform in both relative coordinates.
double occupancy(const VorticityField& f, const ABState& state,
                 int probes_x1 = 24, int probes_x2 = 12);

} // namespace diskflow
