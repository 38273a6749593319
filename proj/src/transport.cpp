#include "diskflow/transport.hpp"
#include "diskflow/parallel.hpp"

#include <atomic>

namespace diskflow {

namespace {

// feet beyond this overshoot are counted as health events; smaller
// excursions are round-off against the exact no-flow condition and are
// projected silently
constexpr double kProjectionSlack = 1e-8;

// pull a point inside the closed disk; returns true if it moved more than slack
bool project_into_disk(Point2& p) {
    const Point2 d = p - disk_center;
    const double r = norm(d);
    if (r <= 1.0) return false;
    p = disk_center + (1.0 / r) * d;
    return r > 1.0 + kProjectionSlack;
}

Point2 project_onto_circle(Point2 p) {
    const Point2 d = p - disk_center;
    const double r = norm(d);
    if (r == 0.0) return {0.0, 0.0};
    return disk_center + (1.0 / r) * d;
}

} // namespace

double cfl_dt(const VorticityField& f, double cfl, double dt_max, Symmetry sym) {
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw std::invalid_argument("cfl_dt: cfl must lie in (0, 1]");
    if (!(dt_max > 0.0)) throw std::invalid_argument("cfl_dt: dt_max must be positive");

    const PolarGrid& g = f.grid();
    double hmin = std::numeric_limits<double>::max();
    for (int i = 0; i + 1 < g.nr(); ++i) {
        const double dr = g.r(i + 1) - g.r(i);
        for (int j = 0; j + 1 < g.ntheta(); ++j) {
            const double arc = g.r(i + 1) * (g.theta(j + 1) - g.theta(j));
            hmin = std::min(hmin, std::hypot(dr, arc));
        }
    }

    const StreamField s = solve_stream(f, sym);
    const auto vel = velocity_at_nodes(s);
    double vmax = 0.0;
    for (const Vec2& u : vel) vmax = std::max(vmax, std::hypot(u.u1, u.u2));
    if (vmax == 0.0) return dt_max;
    return std::min(dt_max, cfl * hmin / vmax);
}

VorticityField advect(const VorticityField& f, const StreamField& s, double dt,
                      long* projections) {
    const PolarGrid& g = f.grid();
    const int nr = g.nr(), nt = g.ntheta();
    const Symmetry sym = s.symmetry();
    VorticityField out(f.grid_ptr(), f.time() + dt);
    const auto vel = velocity_at_nodes(s);
    std::atomic<long> projected{0};

    parallel_ranges(nr, [&](long b, long e) {
        long local_proj = 0;
        for (long i = b; i < e; ++i) {
            for (int j = 0; j < nt; ++j) {
                if (sym == Symmetry::Odd && (j == 0 || j == nt - 1 || i == 0)) {
                    out.at(int(i), j) = 0.0;
                    continue;
                }
                const Point2 p = g.node_point(int(i), j);
                const Vec2 u1 = vel[size_t(i) * nt + j];
                Point2 mid{p.x1 - 0.5 * dt * u1.u1, p.x2 - 0.5 * dt * u1.u2};
                project_into_disk(mid);
                const Vec2 u2 = velocity_from_stream(s, mid);
                Point2 foot{p.x1 - dt * u2.u1, p.x2 - dt * u2.u2};
                if (project_into_disk(foot)) ++local_proj;
                out.at(int(i), j) = sample(f, foot, sym);
            }
        }
        projected.fetch_add(local_proj);
    });

    if (sym == Symmetry::Odd) out.pin_axis();
    if (projections) *projections += projected.load();
    return out;
}

VorticityField step(const VorticityField& f, double dt, long* projections, Symmetry sym) {
    return advect(f, solve_stream(f, sym), dt, projections);
}

TracerSet advance_tracers(const TracerSet& tracers, const QuadratureCache& q, double dt) {
    TracerSet out = tracers;
    for (size_t k = 0; k < out.size(); ++k) {
        Point2 p = out.positions[k];
        const bool on_b = out.on_boundary[k];
        const Vec2 v1 = velocity_direct(p, q);
        Point2 mid{p.x1 + 0.5 * dt * v1.u1, p.x2 + 0.5 * dt * v1.u2};
        if (on_b) mid = project_onto_circle(mid);
        else project_into_disk(mid);
        const Vec2 v2 = velocity_direct(mid, q);
        Point2 next{p.x1 + dt * v2.u1, p.x2 + dt * v2.u2};
        if (on_b) next = project_onto_circle(next);
        else project_into_disk(next);
        out.positions[k] = next;
    }
    return out;
}

ABState integrate_ab(const ABState& state, const QuadratureCache& q, double dt,
                     int samples, int refine) {
    if (!state.valid) return state;
    ABState out = state;

    auto rate_a = [&](double a) { return segment_extrema_u1(a, q, samples, refine).scaled_upper; };
    auto rate_b = [&](double b) { return segment_extrema_u1(b, q, samples, refine).scaled_lower; };

    const double a0 = state.a(), b0 = state.b();
    if (!(a0 > 0.0 && a0 < 1.0 && b0 > 0.0 && b0 < 1.0)) {
        out.valid = false;
        return out;
    }
    const double ra1 = rate_a(a0);
    const double ra2 = rate_a(a0 * std::exp(0.5 * dt * ra1));
    out.log_a = state.log_a + dt * ra2;

    const double rb1 = rate_b(b0);
    const double rb2 = rate_b(b0 * std::exp(0.5 * dt * rb1));
    out.log_b = state.log_b + dt * rb2;

    if (!(out.log_a < out.log_b) || !std::isfinite(out.log_a) || !std::isfinite(out.log_b))
        out.valid = false;
    return out;
}

double occupancy(const VorticityField& f, const ABState& state,
                 int probes_x1, int probes_x2) {
    if (!state.valid) throw std::domain_error("occupancy: region state is invalid");
    const double a = state.a(), b = state.b();
    if (!(a > 0.0 && a < b && b < 1.0))
        throw std::domain_error("occupancy: need 0 < a < b < 1");

    double lowest = std::numeric_limits<double>::max();
    for (int k = 1; k <= probes_x1; ++k) {
        const double x1 = a + (b - a) * double(k) / double(probes_x1 + 1);
        const double h = boundary_height(x1);
        for (int l = 1; l <= probes_x2; ++l) {
            const double x2 = h + (x1 - h) * double(l) / double(probes_x2 + 1);
            lowest = std::min(lowest, sample(f, {x1, x2}));
        }
    }
    return lowest;
}

} // namespace diskflow
