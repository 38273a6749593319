#include "diskflow/field.hpp"
#include "diskflow/interp.hpp"

#include <algorithm>
#include <sstream>

namespace diskflow {

VorticityField::VorticityField(std::shared_ptr<const PolarGrid> grid, double time)
    : grid_(std::move(grid)), values_(size_t(grid_->nr()) * grid_->ntheta(), 0.0),
      time_(time) {}

void VorticityField::pin_axis() {
    const int n = ntheta();
    for (int i = 0; i < nr(); ++i) {
        at(i, 0) = 0.0;
        at(i, n - 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) at(0, j) = 0.0;
}

double smooth_ramp(double t, double lo, double hi) {
    if (t <= lo) return 0.0;
    if (t >= hi) return 1.0;
    const double u = (t - lo) / (hi - lo);
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

VorticityField build_strip_data(double delta, double w,
                                std::shared_ptr<const PolarGrid> grid) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("strip data: delta must lie in (0, 0.5)");
    if (!(w > 0.0 && w < delta))
        throw std::invalid_argument("strip data: need 0 < w < delta");

    VorticityField f(std::move(grid));
    const PolarGrid& g = f.grid();
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.ntheta(); ++j) {
            const Point2 p = g.node_point(i, j);
            f.at(i, j) = smooth_ramp(p.x1, delta - w, delta);
        }
    f.pin_axis();
    return f;
}

VorticityField build_ks_data(const DataParams& params,
                             std::shared_ptr<const PolarGrid> grid) {
    const double eps = params.epsilon, delta = params.delta;
    if (!(eps > 0.0 && eps < delta && delta < 1.0))
        throw std::invalid_argument("ks data: need 0 < epsilon < delta < 1");
    if (!(params.cutoff_exponent >= 1.0))
        throw std::invalid_argument("ks data: cutoff_exponent must be >= 1");
    const double a0 = std::pow(eps, params.cutoff_exponent);
    const double b0 = eps;
    double w0 = params.smoothing_width;
    if (w0 == 0.0) w0 = 0.3 * a0;
    if (!(w0 > 0.0 && w0 <= 0.4 * a0))
        throw std::invalid_argument("ks data: smoothing_width must lie in (0, 0.4*a0]");
    if (!(1.5 * b0 <= 0.75 * delta))
        throw std::invalid_argument("ks data: epsilon too close to delta; need 2*epsilon <= delta");

    // the inner cutoff lives in the angular direction near theta ~ a0
    const double dtheta = grid->theta_spacing_at(std::max(a0 - 2.0 * w0, 0.5 * a0));
    const double dr = grid->r(grid->nr() - 1) - grid->r(grid->nr() - 2);
    if (dtheta > w0 || dr > w0) {
        std::ostringstream os;
        os << "ks data: grid does not resolve the cutoff scale " << w0
           << " near the origin (local dtheta=" << dtheta << ", boundary dr=" << dr
           << "); refine the grid until both fall below the smoothing width";
        throw std::invalid_argument(os.str());
    }

    const double pad_out = 0.25 * eps, w_out = 0.125 * eps;
    const double ws = 0.25 * delta;

    VorticityField f(std::move(grid));
    const PolarGrid& g = f.grid();
    for (int i = 0; i < f.nr(); ++i)
        for (int j = 0; j < f.ntheta(); ++j) {
            const Point2 p = g.node_point(i, j);
            // wedge along the lower boundary: one on O(a0,b0) plus margins
            const double rin = smooth_ramp(p.x1, a0 - 2.0 * w0, a0 - w0);
            const double rout = 1.0 - smooth_ramp(p.x1, b0 + pad_out, b0 + pad_out + w_out);
            const double pd = 0.25 * p.x1 + w0;
            const double rdiag = 1.0 - smooth_ramp(p.x2 - p.x1, pd, 2.0 * pd);
            const double wedge = rin * rout * rdiag;
            // plateau outside both the axis strip and the delta-ball
            const double far = smooth_ramp(p.x1, delta - ws, delta) *
                               smooth_ramp(norm(p), delta, delta + ws);
            f.at(i, j) = std::max(wedge, far);
        }
    f.pin_axis();
    return f;
}

VorticityField build_uniform_data(std::shared_ptr<const PolarGrid> grid) {
    VorticityField f(std::move(grid));
    std::fill(f.values().begin(), f.values().end(), 1.0);
    return f;
}

namespace {

// Tensor cubic evaluation at grid coordinates (r, theta), limited by a
// clamp to the bracketing cell's corner range. The clamp is what enforces
// the maximum principle; the slopes themselves stay unlimited so smooth
// profiles keep full cubic accuracy (plateau cells still reproduce
// constants exactly because their secants vanish).
double eval_rt(const VorticityField& f, double r, double theta) {
    const PolarGrid& g = f.grid();
    const int nr = g.nr(), nt = g.ntheta();
    const int ic = g.radial_cell(r), jc = g.angular_cell(theta);
    const int i0 = interp::window_start(ic, nr);
    const int j0 = interp::window_start(jc, nt);

    double col[4];
    const double* rs = g.radii().data() + i0;
    for (int c = 0; c < 4; ++c) {
        double vals[4];
        for (int k = 0; k < 4; ++k) vals[k] = f.at(i0 + k, j0 + c);
        col[c] = interp::window_cubic(rs, vals, ic - i0, false).eval(r);
    }
    const double* ts = g.thetas().data() + j0;
    double v = interp::window_cubic(ts, col, jc - j0, false).eval(theta);

    const double c00 = f.at(ic, jc), c01 = f.at(ic, jc + 1);
    const double c10 = f.at(ic + 1, jc), c11 = f.at(ic + 1, jc + 1);
    const double lo = std::min(std::min(c00, c01), std::min(c10, c11));
    const double hi = std::max(std::max(c00, c01), std::max(c10, c11));
    return std::clamp(v, lo, hi);
}

} // namespace

double sample(const VorticityField& f, Point2 p, Symmetry sym) {
    double sign = 1.0;
    if (p.x1 < 0.0) {
        p = reflect(p);
        if (sym == Symmetry::Odd) sign = -1.0;
    }
    double r, theta;
    PolarGrid::polar_of(p, r, theta);
    if (r > 1.0 + 1e-12)
        throw std::domain_error("sample: point outside the closed disk");
    r = std::min(r, 1.0);
    return sign * eval_rt(f, r, theta);
}

double sup_norm(const VorticityField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// centered first derivative on a non-uniform 3-point stencil
double deriv3(double fm, double f0, double fp, double hm, double hp) {
    return (-hp / (hm * (hm + hp))) * fm + ((hp - hm) / (hm * hp)) * f0 +
           (hm / (hp * (hm + hp))) * fp;
}

} // namespace

double grad_sup_fd(const VorticityField& f) {
    const PolarGrid& g = f.grid();
    const int nr = g.nr(), nt = g.ntheta();
    if (nr < 4 || nt < 4) throw std::invalid_argument("grad_sup_fd: grid too small");
    double worst = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = g.r(i);
        for (int j = 0; j < nt; ++j) {
            double dr;
            if (i == 0)
                dr = (f.at(1, j) - f.at(0, j)) / (g.r(1) - g.r(0));
            else if (i == nr - 1)
                dr = (f.at(nr - 1, j) - f.at(nr - 2, j)) / (g.r(nr - 1) - g.r(nr - 2));
            else
                dr = deriv3(f.at(i - 1, j), f.at(i, j), f.at(i + 1, j),
                            g.r(i) - g.r(i - 1), g.r(i + 1) - g.r(i));
            double grad2 = dr * dr;
            if (r > 1e-12) {
                double dt;
                if (j == 0)
                    dt = (f.at(i, 1) - f.at(i, 0)) / (g.theta(1) - g.theta(0));
                else if (j == nt - 1)
                    dt = (f.at(i, nt - 1) - f.at(i, nt - 2)) /
                         (g.theta(nt - 1) - g.theta(nt - 2));
                else
                    dt = deriv3(f.at(i, j - 1), f.at(i, j), f.at(i, j + 1),
                                g.theta(j) - g.theta(j - 1), g.theta(j + 1) - g.theta(j));
                grad2 += (dt / r) * (dt / r);
            }
            worst = std::max(worst, grad2);
        }
    }
    return std::sqrt(worst);
}

double level_set_area(const VorticityField& f, double threshold) {
    const PolarGrid& g = f.grid();
    const int nr = g.nr(), nt = g.ntheta();
    double area = 0.0;
    for (int i = 0; i + 1 < nr; ++i)
        for (int j = 0; j + 1 < nt; ++j) {
            const double v00 = f.at(i, j), v01 = f.at(i, j + 1);
            const double v10 = f.at(i + 1, j), v11 = f.at(i + 1, j + 1);
            const bool a = v00 > threshold, b = v01 > threshold;
            const bool c = v10 > threshold, d = v11 > threshold;
            const double cell = g.cell_area(i, j);
            if (a && b && c && d) {
                area += cell;
            } else if (a || b || c || d) {
                // fractional boundary cell: bilinear sub-sampling
                constexpr int ns = 4;
                int in = 0;
                for (int si = 0; si < ns; ++si)
                    for (int sj = 0; sj < ns; ++sj) {
                        const double u = (si + 0.5) / ns, v = (sj + 0.5) / ns;
                        const double val = (1 - u) * ((1 - v) * v00 + v * v01) +
                                           u * ((1 - v) * v10 + v * v11);
                        if (val > threshold) ++in;
                    }
                area += cell * double(in) / (ns * ns);
            }
        }
    return area;
}

QuadratureCache QuadratureCache::build(const VorticityField& f, Symmetry sym) {
    const PolarGrid& g = f.grid();
    QuadratureCache q;
    q.grid = &g;
    q.sym = sym;
    q.cells_r = g.nr() - 1;
    q.cells_t = g.ntheta() - 1;
    q.cell_to_packed.assign(size_t(q.cells_r) * q.cells_t, -1);

    const size_t ncells = size_t(q.cells_r) * q.cells_t;
    q.x1.reserve(ncells);
    for (int i = 0; i < q.cells_r; ++i) {
        const double rm = 0.5 * (g.r(i) + g.r(i + 1));
        for (int j = 0; j < q.cells_t; ++j) {
            const double tm = 0.5 * (g.theta(j) + g.theta(j + 1));
            const Point2 p = PolarGrid::point(rm, tm);
            const double v = sample(f, p, sym);
            if (v == 0.0) continue;
            const Point2 yb = image_point(p);
            q.cell_to_packed[size_t(i) * q.cells_t + j] = int(q.x1.size());
            q.x1.push_back(p.x1);
            q.x2.push_back(p.x2);
            q.yb1.push_back(yb.x1);
            q.yb2.push_back(yb.x2);
            q.w.push_back(g.cell_area(i, j));
            q.val.push_back(v);
            q.wv.push_back(g.cell_area(i, j) * v);
            q.ci.push_back(i);
            q.cj.push_back(j);
        }
    }
    return q;
}

} // namespace diskflow
