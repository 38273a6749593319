#pragma once

// Velocity recovery by direct singular quadrature of the symmetrized
// kernel (the oracle path; the spectral stream solve is the production
// path), the nonlocal factor Omega, and the stabilized ratio u1/x1.
//
// All quadratures share the cell-midpoint rule of QuadratureCache with the
// cell containing the target excluded; no analytic self-cell correction.

#include "diskflow/field.hpp"
#include "diskflow/stream.hpp"

namespace diskflow {

// The cache remembers which extension it was built for.
Vec2 velocity_direct(Point2 x, const QuadratureCache& q);
Vec2 velocity_direct(Point2 x, const VorticityField& f, Symmetry sym = Symmetry::Odd);

// Omega(x) = (4/pi) integral over Q(x) of y1 y2 / |y|^4 times the field,
// midpoint integrand with fractional weights on cells straddling the
// quadrant boundary. Unbounded as x -> origin when the field does not
// vanish there; that is reported, not an error.
double omega_factor(Point2 x, const QuadratureCache& q);
double omega_factor(Point2 x, const VorticityField& f);

// u1(x)/x1 through the cancellation-free kernel pairing; finite as x1 -> 0.
double scaled_u1(Point2 x, const QuadratureCache& q);
double scaled_u1(Point2 x, const VorticityField& f);

struct SegmentExtrema {
    double lower = 0.0;        // min of u1 over the segment
    double upper = 0.0;        // max of u1 over the segment
    double scaled_lower = 0.0; // same extrema divided by x1
    double scaled_upper = 0.0;
};

// Extrema of u1 over the vertical segment {(x1, x2) in D+ : x2 < x1},
// dense sampling clustered toward the boundary arc plus local ternary
// refinement around each discrete extremizer.
SegmentExtrema segment_extrema_u1(double x1, const QuadratureCache& q,
                                  int samples = 64, int refine = 6);
SegmentExtrema segment_extrema_u1(double x1, const VorticityField& f,
                                  int samples = 64, int refine = 6);

} // namespace diskflow
