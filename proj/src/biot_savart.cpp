#include "diskflow/biot_savart.hpp"
#include "diskflow/kernel.hpp"
#include "diskflow/parallel.hpp"

#include <algorithm>

namespace diskflow {

namespace {

// packed index of the cell containing x, or -1
int self_cell(Point2 x, const QuadratureCache& q) {
    double r, theta;
    PolarGrid::polar_of(x, r, theta);
    if (r > 1.0) return -1;
    return q.packed_of(q.grid->radial_cell(r), q.grid->angular_cell(theta));
}

struct CellBounds {
    double x1min, x1max, x2min, x2max;
};

CellBounds cell_bounds(const PolarGrid& g, int i, int j) {
    const double r0 = g.r(i), r1 = g.r(i + 1);
    const double t0 = g.theta(j), t1 = g.theta(j + 1);
    const double s0 = std::sin(t0), s1 = std::sin(t1);
    const double c0 = std::cos(t0), c1 = std::cos(t1);
    CellBounds b;
    b.x1min = std::min(std::min(r0 * s0, r0 * s1), std::min(r1 * s0, r1 * s1));
    b.x1max = std::max(std::max(r0 * s0, r0 * s1), std::max(r1 * s0, r1 * s1));
    if (t0 < M_PI / 2 && t1 > M_PI / 2) b.x1max = r1;
    const double a00 = 1 - r0 * c0, a01 = 1 - r0 * c1, a10 = 1 - r1 * c0, a11 = 1 - r1 * c1;
    b.x2min = std::min(std::min(a00, a01), std::min(a10, a11));
    b.x2max = std::max(std::max(a00, a01), std::max(a10, a11));
    return b;
}

} // namespace

Vec2 velocity_direct(Point2 x, const QuadratureCache& q) {
    const Symmetry sym = q.sym;
    bool reflected = false;
    if (x.x1 < 0.0) {
        x = reflect(x);
        reflected = true;
    }
    const int self = self_cell(x, q);
    const long n = long(q.x1.size());

    struct Acc {
        double u1 = 0.0, u2 = 0.0;
    };
    // odd path accumulates the scaled first component and multiplies by x1
    // at the end, so u1 is identical to x1 * scaled_u1(x) by construction
    Acc acc = parallel_reduce(
        n, Acc{},
        [&](long k) -> Acc {
            if (int(k) == self) return {};
            const Point2 y{q.x1[k], q.x2[k]};
            const Point2 yb{q.yb1[k], q.yb2[k]};
            const double wv = q.wv[k];
            if (sym == Symmetry::Odd) {
                const SymKernelParts kv = kernel_sym_parts_pre(x, y, yb);
                return {wv * kv.scaled_k1, wv * kv.k2};
            }
            const KernelValue ka = kernel_K_pre(x, y, yb);
            const KernelValue kb = kernel_K_pre(x, reflect(y), reflect(yb));
            return {wv * (ka.k1 + kb.k1), wv * (ka.k2 + kb.k2)};
        },
        [](Acc a, Acc b) { return Acc{a.u1 + b.u1, a.u2 + b.u2}; });

    Vec2 u{sym == Symmetry::Odd ? x.x1 * acc.u1 : acc.u1, acc.u2};
    if (reflected) {
        if (sym == Symmetry::Odd) u.u1 = -u.u1;
        else u.u2 = -u.u2;
    }
    return u;
}

Vec2 velocity_direct(Point2 x, const VorticityField& f, Symmetry sym) {
    return velocity_direct(x, QuadratureCache::build(f, sym));
}

double scaled_u1(Point2 x, const QuadratureCache& q) {
    if (x.x1 < 0.0) throw std::domain_error("scaled_u1: requires x1 >= 0");
    if (q.sym != Symmetry::Odd)
        throw std::domain_error("scaled_u1: odd-extension quadrature required");
    const int self = self_cell(x, q);
    const long n = long(q.x1.size());
    return parallel_reduce(
        n, 0.0,
        [&](long k) {
            if (int(k) == self) return 0.0;
            return q.wv[k] * kernel_sym_scaled_pre(x, {q.x1[k], q.x2[k]},
                                                   {q.yb1[k], q.yb2[k]});
        },
        [](double a, double b) { return a + b; });
}

double scaled_u1(Point2 x, const VorticityField& f) {
    return scaled_u1(x, QuadratureCache::build(f));
}

double omega_factor(Point2 x, const QuadratureCache& q) {
    if (!in_half_disk(x)) throw std::domain_error("omega_factor: x must lie in D+");
    const PolarGrid& g = *q.grid;
    const long n = long(q.x1.size());
    constexpr int ns = 4;

    return parallel_reduce(
        n, 0.0,
        [&](long k) {
            const CellBounds b = cell_bounds(g, q.ci[k], q.cj[k]);
            if (b.x1max < x.x1 || b.x2max < x.x2) return 0.0;
            double frac = 1.0;
            if (!(b.x1min >= x.x1 && b.x2min >= x.x2)) {
                // straddles the quadrant boundary: area fraction by sub-cells
                const int ci = q.ci[k], cj = q.cj[k];
                const double r0 = g.r(ci), r1 = g.r(ci + 1);
                const double t0 = g.theta(cj), t1 = g.theta(cj + 1);
                double in_area = 0.0, tot = 0.0;
                for (int a = 0; a < ns; ++a) {
                    const double ra0 = r0 + (r1 - r0) * a / ns;
                    const double ra1 = r0 + (r1 - r0) * (a + 1) / ns;
                    const double rm = 0.5 * (ra0 + ra1);
                    const double band = 0.5 * (ra1 * ra1 - ra0 * ra0) * (t1 - t0) / ns;
                    for (int c = 0; c < ns; ++c) {
                        const double tm = t0 + (t1 - t0) * (c + 0.5) / ns;
                        const Point2 p = PolarGrid::point(rm, tm);
                        tot += band;
                        if (p.x1 >= x.x1 && p.x2 >= x.x2) in_area += band;
                    }
                }
                frac = tot > 0 ? in_area / tot : 0.0;
                if (frac == 0.0) return 0.0;
            }
            const double y1 = q.x1[k], y2 = q.x2[k];
            const double rho2 = y1 * y1 + y2 * y2;
            return (4.0 / M_PI) * q.w[k] * frac * q.val[k] * y1 * y2 / (rho2 * rho2);
        },
        [](double a, double b) { return a + b; });
}

double omega_factor(Point2 x, const VorticityField& f) {
    return omega_factor(x, QuadratureCache::build(f));
}

SegmentExtrema segment_extrema_u1(double x1, const QuadratureCache& q,
                                  int samples, int refine) {
    if (!(x1 > 0.0 && x1 < 1.0))
        throw std::domain_error("segment_extrema_u1: segment empty unless 0 < x1 < 1");
    if (samples < 4) throw std::invalid_argument("segment_extrema_u1: samples >= 4");

    const double h = boundary_height(x1);
    const double span = x1 - h;
    const double tmin = 1e-4;

    // geometric clustering toward the boundary end of the segment
    auto x2_of = [&](double t) { return h + span * t; };
    std::vector<double> ts(samples);
    for (int k = 0; k < samples; ++k) {
        const double u = double(k) / double(samples - 1);
        ts[k] = std::pow(tmin, 1.0 - u);
    }
    ts.back() = 1.0 - 1e-9;

    std::vector<double> vals(samples);
    parallel_ranges(samples, [&](long b, long e) {
        for (long k = b; k < e; ++k)
            vals[k] = scaled_u1({x1, x2_of(ts[k])}, q);
    });

    int kmin = 0, kmax = 0;
    for (int k = 1; k < samples; ++k) {
        if (vals[k] < vals[kmin]) kmin = k;
        if (vals[k] > vals[kmax]) kmax = k;
    }

    auto refine_extremum = [&](int k, bool want_max) {
        double lo = ts[std::max(0, k - 1)], hi = ts[std::min(samples - 1, k + 1)];
        double best = vals[k];
        for (int it = 0; it < refine; ++it) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            const double f1 = scaled_u1({x1, x2_of(m1)}, q);
            const double f2 = scaled_u1({x1, x2_of(m2)}, q);
            if (want_max) {
                best = std::max(best, std::max(f1, f2));
                if (f1 < f2) lo = m1; else hi = m2;
            } else {
                best = std::min(best, std::min(f1, f2));
                if (f1 > f2) lo = m1; else hi = m2;
            }
        }
        return best;
    };

    SegmentExtrema e;
    e.scaled_lower = refine > 0 ? refine_extremum(kmin, false) : vals[kmin];
    e.scaled_upper = refine > 0 ? refine_extremum(kmax, true) : vals[kmax];
    e.lower = x1 * e.scaled_lower;
    e.upper = x1 * e.scaled_upper;
    return e;
}

SegmentExtrema segment_extrema_u1(double x1, const VorticityField& f,
                                  int samples, int refine) {
    return segment_extrema_u1(x1, QuadratureCache::build(f), samples, refine);
}

} // namespace diskflow
