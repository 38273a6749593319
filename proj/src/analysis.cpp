#include "diskflow/analysis.hpp"
#include "diskflow/field_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace diskflow {

ResidualB residual_B(Point2 x, const QuadratureCache& q) {
    if (!(x.x1 > 0.0 && x.x2 > 0.0))
        throw std::domain_error("residual_B: both coordinates must be positive");
    const double omega = omega_factor(x, q);
    const double su1 = scaled_u1(x, q);
    const Vec2 u = velocity_direct(x, q);
    return {su1 + omega, u.u2 / x.x2 - omega};
}

ResidualB residual_B(Point2 x, const VorticityField& f) {
    return residual_B(x, QuadratureCache::build(f));
}

namespace {

double fit_slope_r2(const std::vector<double>& xs, const std::vector<double>& ys,
                    double* r2_out) {
    const size_t n = xs.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / den;
    if (r2_out) {
        const double varx = den / n;
        const double vary = (n * syy - sy * sy) / n;
        *r2_out = vary > 0 ? std::min(1.0, slope * slope * varx / vary) : 1.0;
    }
    return slope;
}

// fan of origin angles at radius s staying strictly inside D+
std::vector<double> sector_angles(double s, double lo, double hi, int fan) {
    const double bdry = std::asin(std::min(1.0, 0.5 * s));
    lo = std::max(lo, 1.2 * bdry + 0.02);
    hi = std::min(hi, M_PI / 2 - 0.02);
    std::vector<double> out;
    if (lo >= hi) return out;
    for (int k = 0; k < fan; ++k)
        out.push_back(lo + (hi - lo) * (fan == 1 ? 0.5 : double(k) / (fan - 1)));
    return out;
}

} // namespace

LemmaScanSummary lemma_scan(const VorticityField& f, double gamma,
                            const std::vector<double>& radii, int fan) {
    if (!(gamma > 0.0 && gamma < M_PI / 2))
        throw std::invalid_argument("lemma_scan: gamma must lie in (0, pi/2)");
    for (size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0)) throw std::invalid_argument("lemma_scan: radii must be positive");
        if (i > 0 && radii[i] >= radii[i - 1])
            throw std::invalid_argument("lemma_scan: radii must descend");
    }

    const QuadratureCache q = QuadratureCache::build(f);
    LemmaScanSummary s;
    s.radii = radii;

    for (double rad : radii) {
        double b1_rad = 0.0, b2_rad = 0.0;
        for (double phi : sector_angles(rad, 0.0, M_PI / 2 - gamma, fan)) {
            const Point2 x{rad * std::cos(phi), rad * std::sin(phi)};
            const ResidualB rb = residual_B(x, q);
            s.rows.push_back({rad, phi, omega_factor(x, q), rb.b1, rb.b2});
            b1_rad = std::max(b1_rad, std::abs(rb.b1));
        }
        for (double phi : sector_angles(rad, gamma, M_PI / 2, fan)) {
            const Point2 x{rad * std::cos(phi), rad * std::sin(phi)};
            const ResidualB rb = residual_B(x, q);
            s.rows.push_back({rad, phi, omega_factor(x, q), rb.b1, rb.b2});
            b2_rad = std::max(b2_rad, std::abs(rb.b2));
        }
        s.b1_by_radius.push_back(b1_rad);
        s.b2_by_radius.push_back(b2_rad);
        s.omega_diag.push_back(omega_factor({rad, rad}, q));
        s.max_b1 = std::max(s.max_b1, b1_rad);
        s.max_b2 = std::max(s.max_b2, b2_rad);
    }

    if (radii.size() >= 2) {
        std::vector<double> xs;
        for (double rad : radii) xs.push_back(std::log(1.0 / rad));
        s.omega_slope = fit_slope_r2(xs, s.omega_diag, nullptr);
    }
    return s;
}

StripBound strip_bound(const VorticityField& f, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("strip_bound: delta must lie in (0, 1)");
    const QuadratureCache q = QuadratureCache::build(f);
    double omega_min = std::numeric_limits<double>::max();
    bool any = false;
    for (double frac : {0.25, 0.5, 0.75, 1.0})
        for (double phi : sector_angles(frac * delta, 0.0, M_PI / 2, 6)) {
            const double rad = frac * delta;
            const Point2 x{rad * std::cos(phi), rad * std::sin(phi)};
            omega_min = std::min(omega_min, omega_factor(x, q));
            any = true;
        }
    if (!any) return {0.0, 0.0};
    return {omega_min, omega_min / std::log(1.0 / delta)};
}

StripDominance strip_dominance(const VorticityField& f, double delta) {
    const QuadratureCache q = QuadratureCache::build(f);
    double rate_min = std::numeric_limits<double>::max();
    bool any = false;
    for (double frac : {0.25, 0.5, 0.75, 1.0})
        for (double phi : sector_angles(frac * delta, 0.0, M_PI / 2, 6)) {
            const double rad = frac * delta;
            const Point2 x{rad * std::cos(phi), rad * std::sin(phi)};
            rate_min = std::min(rate_min, -scaled_u1(x, q));
            any = true;
        }
    if (!any) return {0.0, false};
    return {rate_min, rate_min >= 1.0};
}

ConeCheck cone_check(const VorticityField& f, double delta, int n) {
    if (!(delta > 0.0 && delta < 1.0) || n < 1)
        throw std::invalid_argument("cone_check: need delta in (0,1) and n >= 1");
    const QuadratureCache q = QuadratureCache::build(f);
    const double L = std::log(1.0 / delta);
    ConeCheck out;
    out.pass = true;
    for (int k = 0; k < n; ++k) {
        const double s = delta * (k + 0.5) / n;
        const Point2 x{s / std::sqrt(2.0), s / std::sqrt(2.0)};
        const Vec2 u = velocity_direct(x, q);
        if (!(u.u2 > 0.0) || !(u.u1 < 0.0)) {
            out.pass = false;
            continue;
        }
        const double ratio = -u.u1 / u.u2;
        out.c_fit = std::max(out.c_fit, L * std::abs(ratio - 1.0) / (ratio + 1.0));
    }
    return out;
}

double envelope_upper(const EnvelopeParams& p, double t) {
    if (t < 0.0) throw std::domain_error("envelope_upper: t must be >= 0");
    return (1.0 + std::log(1.0 + p.B / p.A)) * std::exp(p.C_upper * p.A * t);
}

double envelope_lower(const EnvelopeParams& p, double t) {
    if (t < 0.0) throw std::domain_error("envelope_lower: t must be >= 0");
    if (!(p.B / p.A > 1.0))
        throw std::domain_error("envelope_lower: requires B/A > 1");
    return std::pow(p.B / p.A, p.c_lower * std::exp(p.c_lower * p.A * t));
}

namespace {

// Cash-Karp embedded 4(5) pair on z = log(1 + y), where
// z' = C A (1 + z)(1 - exp(-z)).
double comparison_ode_z(const EnvelopeParams& p, double t, double tol) {
    if (t < 0.0) throw std::domain_error("comparison_ode: t must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("comparison_ode: tol must be positive");
    double z = std::log1p(p.B / p.A);
    if (t == 0.0) return z;

    auto rhs = [&](double zz) {
        return p.C_upper * p.A * (1.0 + zz) * (-std::expm1(-zz));
    };

    static constexpr double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0,
                            a6 = 7.0 / 8;
    static constexpr double b21 = 1.0 / 5;
    static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27,
                            b54 = 35.0 / 27;
    static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                            b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                            c6 = 512.0 / 1771;
    static constexpr double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384,
                            d4 = 13525.0 / 55296, d5 = 277.0 / 14336, d6 = 1.0 / 4;
    (void)a2; (void)a3; (void)a4; (void)a5; (void)a6;

    double s = 0.0, h = t / 64.0;
    const double hmin = t * 1e-14;
    while (s < t) {
        if (h < hmin) throw std::runtime_error("comparison_ode: step-size underflow");
        h = std::min(h, t - s);
        const double k1 = rhs(z);
        const double k2 = rhs(z + h * b21 * k1);
        const double k3 = rhs(z + h * (b31 * k1 + b32 * k2));
        const double k4 = rhs(z + h * (b41 * k1 + b42 * k2 + b43 * k3));
        const double k5 = rhs(z + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
        const double k6 =
            rhs(z + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
        const double z5 = z + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
        const double z4 = z + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
        const double err = std::abs(z5 - z4);
        // budget the local error so the accumulated error stays near tol
        const double budget = 0.2 * tol * std::max(std::abs(z5), 1.0) * (h / t);
        if (err > budget && h > hmin) {
            h *= std::max(0.2, 0.9 * std::pow(budget / err, 0.25));
            continue;
        }
        z = z5;
        s += h;
        if (err < 0.1 * budget)
            h *= std::min(4.0, 0.9 * std::pow(budget / std::max(err, 1e-300), 0.2));
    }
    return z;
}

} // namespace

double comparison_ode(const EnvelopeParams& p, double t, double tol) {
    return std::expm1(comparison_ode_z(p, t, tol));
}

double comparison_ode_log(const EnvelopeParams& p, double t, double tol) {
    return 1.0 + comparison_ode_z(p, t, tol);
}

double gronwall_gap(const EnvelopeParams& p, double t, double p_cut) {
    if (!(p.epsilon > 0.0 && p.epsilon < 1.0))
        throw std::domain_error("gronwall_gap: epsilon must lie in (0, 1)");
    return ((p_cut - 1.0) * std::log(p.epsilon) + p.C_gap) * std::exp(t / (2.0 * M_PI));
}

GrowthFit fit_growth(const std::vector<std::pair<double, double>>& series,
                     GrowthModel model) {
    if (series.size() < 4)
        throw std::invalid_argument("fit_growth: need at least 4 points");
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        xs.push_back(t);
        if (model == GrowthModel::Exponential) {
            if (!(v > 0.0)) throw std::domain_error("fit_growth: values must be positive");
            ys.push_back(std::log(v));
        } else {
            if (!(v > 1.0))
                throw std::domain_error("fit_growth: double-exponential fit needs values > 1");
            ys.push_back(std::log(std::log(v)));
        }
    }
    GrowthFit out;
    out.rate = fit_slope_r2(xs, ys, &out.quality);
    return out;
}

namespace {

std::vector<double> time_derivative(const std::vector<double>& t,
                                    const std::vector<double>& v) {
    const size_t n = t.size();
    std::vector<double> d(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        if (k == 0)
            d[k] = (v[1] - v[0]) / (t[1] - t[0]);
        else if (k == n - 1)
            d[k] = (v[n - 1] - v[n - 2]) / (t[n - 1] - t[n - 2]);
        else {
            const double hm = t[k] - t[k - 1], hp = t[k + 1] - t[k];
            d[k] = (-hp / (hm * (hm + hp))) * v[k - 1] +
                   ((hp - hm) / (hm * hp)) * v[k] +
                   (hm / (hp * (hm + hp))) * v[k + 1];
        }
    }
    return d;
}

} // namespace

const MonitorBlock* MonitorReport::find(const std::string& tag) const {
    for (const auto& b : blocks)
        if (b.tag == tag) return &b;
    return nullptr;
}

std::string MonitorReport::text() const {
    std::ostringstream os;
    for (const auto& b : blocks) {
        os << "[" << b.tag << "] " << b.name << "\n"
           << "  fitted_constant = " << format_double(b.fitted_c) << "\n"
           << "  pass = " << (b.pass ? "true" : "false") << "\n";
        if (!b.note.empty()) os << "  note = " << b.note << "\n";
    }
    os << "all_pass = " << (all_pass ? "true" : "false") << "\n";
    return os.str();
}

std::string MonitorReport::json_text() const {
    nlohmann::json j;
    j["all_pass"] = all_pass;
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : blocks)
        j["blocks"].push_back({{"name", b.name},
                               {"tag", b.tag},
                               {"fitted_constant", b.fitted_c},
                               {"pass", b.pass},
                               {"note", b.note}});
    return j.dump(2);
}

MonitorReport monitor(const std::vector<DiagnosticsRecord>& records,
                      const EnvelopeParams& p) {
    if (records.size() < 3)
        throw std::invalid_argument("monitor: need at least 3 records");
    const size_t n = records.size();
    std::vector<double> t(n), la(n), lb(n), gap(n), ombb(n), omseg(n), grad(n);
    for (size_t k = 0; k < n; ++k) {
        t[k] = records[k].t;
        la[k] = std::log(records[k].a);
        lb[k] = std::log(records[k].b);
        gap[k] = la[k] - lb[k];
        ombb[k] = records[k].omega_bb;
        omseg[k] = records[k].omega_seg_max;
        grad[k] = records[k].grad_sup;
    }
    const auto dla = time_derivative(t, la);
    const auto dlb = time_derivative(t, lb);
    const auto dgap = time_derivative(t, gap);

    MonitorReport rep;
    auto fit_max = [&](auto&& expr) {
        double c = 0.0;
        for (size_t k = 1; k + 1 < n; ++k) c = std::max(c, expr(k));
        return c;
    };

    {
        MonitorBlock b;
        b.name = "segment velocity floor: d/dt log b >= -Omega(b,b) - C";
        b.tag = "log_b_lower";
        b.fitted_c = fit_max([&](size_t k) { return -dlb[k] - ombb[k]; });
        b.pass = std::isfinite(b.fitted_c);
        rep.blocks.push_back(b);
    }
    {
        MonitorBlock b;
        b.name = "inner drift bound: d/dt log a <= (log a - log b)/2pi - Omega(b,b) + C";
        b.tag = "log_a_upper";
        b.fitted_c = fit_max([&](size_t k) { return dla[k] - gap[k] / (2 * M_PI) + ombb[k]; });
        b.pass = std::isfinite(b.fitted_c);
        rep.blocks.push_back(b);
    }
    {
        MonitorBlock b;
        b.name = "gap drift: d/dt (log a - log b) <= (log a - log b)/2pi + 2C";
        b.tag = "gap_drift";
        b.fitted_c = fit_max([&](size_t k) { return 0.5 * (dgap[k] - gap[k] / (2 * M_PI)); });
        b.pass = std::isfinite(b.fitted_c);
        rep.blocks.push_back(b);
    }
    {
        MonitorBlock b;
        b.name = "segment comparison: Omega(b, x2) <= Omega(b,b) + C";
        b.tag = "omega_segment";
        b.fitted_c = fit_max([&](size_t k) { return omseg[k] - ombb[k]; });
        b.pass = std::isfinite(b.fitted_c);
        rep.blocks.push_back(b);
    }
    {
        MonitorBlock b;
        b.name = "two-sided flow-map bound on tracer-pair separation";
        b.tag = "flowmap_bilipschitz";
        const size_t npairs = records[0].pair_sep.size();
        if (npairs == 0) {
            b.fitted_c = 0.0;
            b.pass = true;
            b.note = "no tracer pairs recorded";
        } else {
            // integral of (1 + log(1 + grad_sup / A)) by trapezoid
            std::vector<double> integ(n, 0.0);
            for (size_t k = 1; k < n; ++k) {
                const double fa = 1.0 + std::log1p(grad[k - 1] / p.A);
                const double fb = 1.0 + std::log1p(grad[k] / p.A);
                integ[k] = integ[k - 1] + 0.5 * (fa + fb) * (t[k] - t[k - 1]);
            }
            double c = 0.0;
            bool ok = true;
            for (size_t pr = 0; pr < npairs; ++pr) {
                const double s0 = records[0].pair_sep[pr];
                if (!(s0 > 0.0)) {
                    ok = false;
                    continue;
                }
                for (size_t k = 1; k < n; ++k) {
                    const double ratio = records[k].pair_sep[pr] / s0;
                    if (!(ratio > 0.0)) {
                        ok = false;
                        continue;
                    }
                    const double need = std::abs(std::log(ratio)) / (p.A * integ[k]);
                    c = std::max(c, need);
                }
            }
            b.fitted_c = c;
            b.pass = ok && std::isfinite(c);
        }
        rep.blocks.push_back(b);
    }

    rep.all_pass = true;
    for (const auto& b : rep.blocks) rep.all_pass = rep.all_pass && b.pass;
    return rep;
}

} // namespace diskflow
