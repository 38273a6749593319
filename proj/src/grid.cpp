#include "diskflow/grid.hpp"

#include <algorithm>
#include <sstream>

namespace diskflow {

namespace {

// Geometric band spacings: h_j = min(h0 * g^j, hmax), with hmax solved by
// bisection so that `count - 1` intervals sum exactly to `total`.
std::vector<double> band_nodes(int count, double h0, double growth, double total,
                               const char* what) {
    const int m = count - 1;
    auto sum_for = [&](double hmax) {
        double sum = 0.0, h = h0;
        for (int j = 0; j < m; ++j) {
            sum += std::min(h, hmax);
            h *= growth;
        }
        return sum;
    };
    if (sum_for(total) < total)
        throw std::invalid_argument(std::string("grid: ") + what +
                                    " band map cannot span the domain; increase the "
                                    "node count or the first spacing");
    if (sum_for(h0) > total)
        throw std::invalid_argument(std::string("grid: ") + what +
                                    " band first spacing too large for the node count");
    double lo = h0, hi = total;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sum_for(mid) < total ? lo : hi) = mid;
    }
    const double hmax = 0.5 * (lo + hi);

    std::vector<double> nodes(count);
    nodes[0] = 0.0;
    double h = h0;
    for (int j = 0; j < m; ++j) {
        nodes[j + 1] = nodes[j] + std::min(h, hmax);
        h *= growth;
    }
    // absorb bisection slack into an exact endpoint
    const double scale = total / nodes[m];
    for (int j = 1; j <= m; ++j) nodes[j] *= scale;
    nodes[m] = total;
    return nodes;
}

} // namespace

PolarGrid::PolarGrid(const GridSpec& spec) : spec_(spec) {
    if (spec.nr < 4 || spec.ntheta < 4)
        throw std::invalid_argument("grid: nr and ntheta must be at least 4");

    if (spec.radial_map == RadialMap::Poly) {
        if (!(spec.radial_q >= 1.0))
            throw std::invalid_argument("grid: radial_q must be >= 1");
        r_.resize(spec.nr);
        for (int i = 0; i < spec.nr; ++i) {
            const double s = double(i) / double(spec.nr - 1);
            r_[i] = 1.0 - std::pow(1.0 - s, spec.radial_q);
        }
        r_.front() = 0.0;
        r_.back() = 1.0;
    } else {
        if (!(spec.radial_h0 > 0.0 && spec.radial_growth > 1.0))
            throw std::invalid_argument("grid: radial band needs radial_h0 > 0, growth > 1");
        // depth below the boundary grows geometrically; reverse into radii
        const auto depth = band_nodes(spec.nr, spec.radial_h0, spec.radial_growth,
                                      1.0, "radial");
        r_.resize(spec.nr);
        for (int i = 0; i < spec.nr; ++i) r_[i] = 1.0 - depth[spec.nr - 1 - i];
        r_.front() = 0.0;
        r_.back() = 1.0;
    }
    for (int i = 0; i + 1 < spec.nr; ++i)
        if (!(r_[i] < r_[i + 1]))
            throw std::invalid_argument(
                "grid: radial nodes collapsed (grading too steep for the node count)");

    if (spec.theta_map == ThetaMap::Uniform) {
        theta_.resize(spec.ntheta);
        for (int j = 0; j < spec.ntheta; ++j)
            theta_[j] = M_PI * double(j) / double(spec.ntheta - 1);
        theta_.back() = M_PI;
    } else {
        if (!(spec.band_h0 > 0.0 && spec.band_growth > 1.0))
            throw std::invalid_argument("grid: theta band needs band_h0 > 0, growth > 1");
        theta_ = band_nodes(spec.ntheta, spec.band_h0, spec.band_growth, M_PI, "angular");
    }
    for (int j = 0; j + 1 < spec.ntheta; ++j)
        if (!(theta_[j] < theta_[j + 1]))
            throw std::invalid_argument("grid: angular nodes collapsed");
}

void PolarGrid::polar_of(Point2 p, double& r, double& theta) {
    const Point2 d = p - disk_center;
    r = norm(d);
    theta = (r == 0.0) ? 0.0 : std::atan2(std::abs(p.x1), -d.x2);
}

int PolarGrid::radial_cell(double r) const {
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    int i = int(it - r_.begin()) - 1;
    return std::clamp(i, 0, spec_.nr - 2);
}

int PolarGrid::angular_cell(double theta) const {
    auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
    int j = int(it - theta_.begin()) - 1;
    return std::clamp(j, 0, spec_.ntheta - 2);
}

double PolarGrid::theta_spacing_at(double theta) const {
    const int j = angular_cell(theta);
    double h = theta_[j + 1] - theta_[j];
    if (j + 2 < spec_.ntheta) h = std::max(h, theta_[j + 2] - theta_[j + 1]);
    return h;
}

double PolarGrid::cell_area(int i, int j) const {
    const double r0 = r_[i], r1 = r_[i + 1];
    return 0.5 * (r1 * r1 - r0 * r0) * (theta_[j + 1] - theta_[j]);
}

std::string PolarGrid::describe() const {
    std::ostringstream os;
    os << "polar grid " << spec_.nr << "x" << spec_.ntheta;
    if (spec_.radial_map == RadialMap::Poly)
        os << " rq=" << spec_.radial_q;
    else
        os << " rband(h0=" << spec_.radial_h0 << ",g=" << spec_.radial_growth << ")";
    if (spec_.theta_map == ThetaMap::Band)
        os << " tband(h0=" << spec_.band_h0 << ",g=" << spec_.band_growth << ")";
    else
        os << " tuniform";
    return os.str();
}

} // namespace diskflow
