#include "diskflow/geometry.hpp"

namespace diskflow {

namespace {
constexpr double kDiskTol = 1e-12;

bool finite(Point2 p) { return std::isfinite(p.x1) && std::isfinite(p.x2); }
} // namespace

Point2 image_point(Point2 y) {
    if (!finite(y)) throw std::domain_error("image_point: non-finite input");
    const Point2 d = y - disk_center;
    const double d2 = norm2(d);
    if (d2 == 0.0) throw std::domain_error("image_point: disk center has no image");
    return disk_center + (1.0 / d2) * d;
}

bool in_disk(Point2 p) {
    if (!finite(p)) return false;
    return norm2(p - disk_center) <= 1.0 + kDiskTol;
}

bool in_half_disk(Point2 p) {
    return in_disk(p) && p.x1 >= 0.0;
}

double origin_angle(Point2 p) {
    if (p.x1 == 0.0 && p.x2 == 0.0)
        throw std::domain_error("origin_angle: undefined at the origin");
    return std::atan2(p.x2, p.x1);
}

bool in_sector(Point2 p, SectorSpec s) {
    if (!(s.gamma > 0.0 && s.gamma < M_PI / 2))
        throw std::invalid_argument("in_sector: gamma must lie in (0, pi/2)");
    if (s.index != 1 && s.index != 2)
        throw std::invalid_argument("in_sector: sector index must be 1 or 2");
    const double phi = origin_angle(p); // throws at the origin
    if (!in_half_disk(p)) return false;
    if (s.index == 1) return phi >= 0.0 && phi <= M_PI / 2 - s.gamma;
    return phi >= s.gamma && phi <= M_PI / 2;
}

bool in_Q(Point2 corner, Point2 y) {
    return in_half_disk(y) && y.x1 >= corner.x1 && y.x2 >= corner.x2;
}

bool in_O(RegionO region, Point2 p) {
    if (!(region.a_lo > 0.0 && region.a_lo < region.b_hi && region.b_hi < 1.0))
        throw std::invalid_argument("in_O: region requires 0 < a_lo < b_hi < 1");
    return in_half_disk(p) && p.x1 > region.a_lo && p.x1 < region.b_hi && p.x2 < p.x1;
}

Point2 boundary_point(double x1) {
    if (!(x1 >= 0.0 && x1 < 1.0))
        throw std::domain_error("boundary_point: abscissa must lie in [0, 1)");
    return {x1, boundary_height(x1)};
}

} // namespace diskflow
