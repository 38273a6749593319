#pragma once

// Coordinates and region predicates for the unit disk.
//
// Convention: the coordinate origin sits at the lowest boundary point of the
// disk, so the disk center is at (0,1). The half disk D+ is the part with
// x1 >= 0. Angles phi are measured at the origin, counterclockwise from the
// positive x1 axis.

#include <cmath>
#include <stdexcept>

namespace diskflow {

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }

inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm2(Point2 a) { return a.x1 * a.x1 + a.x2 * a.x2; }
inline double norm(Point2 a) { return std::sqrt(norm2(a)); }

inline constexpr Point2 disk_center{0.0, 1.0};

// Sector at the origin: index 1 is {0 <= phi <= pi/2 - gamma},
// index 2 is {gamma <= phi <= pi/2}, both intersected with D+.
struct SectorSpec {
    double gamma = 0.0;
    int index = 1;
};

// Region O(a_lo, b_hi): points of D+ with a_lo < x1 < b_hi and x2 < x1.
struct RegionO {
    double a_lo = 0.0;
    double b_hi = 0.0;
};

// Inversion of y across the disk boundary (image source of the Green's
// function). Fixed points are exactly the boundary; the center is excluded.
Point2 image_point(Point2 y);

// Mirror across the vertical axis x1 = 0.
inline Point2 reflect(Point2 x) { return {-x.x1, x.x2}; }

bool in_disk(Point2 p);
bool in_half_disk(Point2 p);
bool in_sector(Point2 p, SectorSpec s);

// Quadrant region Q(corner): D+ intersected with {y1 >= corner.x1, y2 >= corner.x2}.
bool in_Q(Point2 corner, Point2 y);

bool in_O(RegionO region, Point2 p);

// Lower-right boundary arc point with abscissa x1, i.e. (x1, 1 - sqrt(1 - x1^2)).
Point2 boundary_point(double x1);

// Height of the lower boundary arc at abscissa |x1| < 1.
inline double boundary_height(double x1) {
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - x1 * x1));
}

// Polar angle at the origin, in [0, pi] for points of the closed disk.
double origin_angle(Point2 p);

} // namespace diskflow
