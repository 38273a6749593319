#pragma once

// Dirichlet Green's function of the unit disk in closed form, its
// perpendicular gradient (the Biot-Savart kernel), and the four-term
// odd-symmetrized kernel used for half-disk integration.
//
// Gradient convention throughout: perp(f) = (df/dx2, -df/dx1).
// Everything here is inline; these functions sit inside quadrature loops.

#include "diskflow/geometry.hpp"

namespace diskflow {

struct KernelValue {
    double k1 = 0.0;
    double k2 = 0.0;
};

namespace detail {
inline void require_regular(Point2 x, Point2 y) {
    if (norm2(x - y) == 0.0)
        throw std::domain_error("kernel: coincident source and target");
    if (norm2(y - disk_center) == 0.0)
        throw std::domain_error("kernel: source at the disk center");
}
} // namespace detail

// G(x,y) = (1/2pi) (log|x-y| - log|x-ybar| - log|y-e2|), ybar the image of y.
inline double green(Point2 x, Point2 y) {
    detail::require_regular(x, y);
    const Point2 yb = image_point(y);
    return (std::log(norm(x - y)) - std::log(norm(x - yb)) -
            std::log(norm(y - disk_center))) / (2.0 * M_PI);
}

// Closed-form perp x-gradient of green, image point supplied or computed.
inline KernelValue kernel_K_pre(Point2 x, Point2 y, Point2 yb) {
    const Point2 d = x - y;
    const Point2 db = x - yb;
    const double id2 = 1.0 / norm2(d);
    const double idb2 = 1.0 / norm2(db);
    return {(d.x2 * id2 - db.x2 * idb2) / (2.0 * M_PI),
            -(d.x1 * id2 - db.x1 * idb2) / (2.0 * M_PI)};
}

inline KernelValue kernel_K(Point2 x, Point2 y) {
    detail::require_regular(x, y);
    return kernel_K_pre(x, y, image_point(y));
}

// First symmetrized-kernel component divided by x1, with the image point
// of y supplied by the caller (quadrature caches precompute it). Uses the
// pairing 1/|x-y|^2 - 1/|xt-y|^2 = 4 x1 y1 / (|x-y|^2 |xt-y|^2), so no
// cancelling log differences appear; finite limit as x1 -> 0.
inline double kernel_sym_scaled_pre(Point2 x, Point2 y, Point2 yb) {
    const Point2 xt = reflect(x);
    const double q_dir = norm2(x - y) * norm2(xt - y);
    const double q_img = norm2(x - yb) * norm2(xt - yb);
    return (2.0 / M_PI) * (y.x1 * (x.x2 - y.x2) / q_dir -
                           yb.x1 * (x.x2 - yb.x2) / q_img);
}

inline double kernel_sym_scaled(Point2 x, Point2 y) {
    detail::require_regular(x, y);
    if (norm2(reflect(x) - y) == 0.0)
        throw std::domain_error("kernel_sym: target coincides with reflected source");
    return kernel_sym_scaled_pre(x, y, image_point(y));
}

// First component divided by x1, and the second component, in one pass.
struct SymKernelParts {
    double scaled_k1 = 0.0;
    double k2 = 0.0;
};

inline SymKernelParts kernel_sym_parts_pre(Point2 x, Point2 y, Point2 yb) {
    const double scaled = kernel_sym_scaled_pre(x, y, yb);
    const Point2 xt = reflect(x);
    const Point2 d = x - y;
    const Point2 db = x - yb;
    const double id2 = 1.0 / norm2(d);
    const double idb2 = 1.0 / norm2(db);
    const double itd2 = 1.0 / norm2(xt - y);
    const double itdb2 = 1.0 / norm2(xt - yb);
    return {scaled,
            -(d.x1 * id2 - db.x1 * idb2 + (x.x1 + yb.x1) * itdb2 -
              (x.x1 + y.x1) * itd2) / (2.0 * M_PI)};
}

inline SymKernelParts kernel_sym_parts(Point2 x, Point2 y) {
    detail::require_regular(x, y);
    if (norm2(reflect(x) - y) == 0.0)
        throw std::domain_error("kernel_sym: target coincides with reflected source");
    return kernel_sym_parts_pre(x, y, image_point(y));
}

// Perp x-gradient of the odd-symmetrized log
//   L(x,y) = log|x-y| - log|x-ybar| + log|xt-ybar| - log|xt-y|,  xt = (-x1,x2),
// divided by 2pi. Integrating kernel_sym(x,.) w over D+ reproduces the
// full-disk integral of kernel_K against the odd extension of w. The first
// component is x1 * kernel_sym_scaled(x,y) and vanishes identically on the axis.
inline KernelValue kernel_sym(Point2 x, Point2 y) {
    const SymKernelParts p = kernel_sym_parts(x, y);
    return {x.x1 * p.scaled_k1, p.k2};
}

// Value of L(x,y) itself via log1p pairings (finite-difference oracle hook).
inline double sym_log_value(Point2 x, Point2 y) {
    detail::require_regular(x, y);
    const Point2 xt = reflect(x);
    const Point2 yb = image_point(y);
    return 0.5 * (std::log1p(-4.0 * x.x1 * y.x1 / norm2(xt - y)) +
                  std::log1p(4.0 * x.x1 * yb.x1 / norm2(x - yb)));
}

// Empirical constant of the |grad K| <= C |x-y|^-2 bound: max over random
// interior pairs of |grad_x K(x,y)| |x-y|^2, gradient by centered finite
// differences of kernel_K. min_sep restricts the pair population.
double kernel_grad_probe(int samples, unsigned seed = 12345u, double min_sep = 0.0);

} // namespace diskflow
