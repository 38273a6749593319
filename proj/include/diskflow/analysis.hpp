#pragma once

// Quantitative diagnostics: velocity-decomposition residuals, region scans,
// growth envelopes with their comparison ODE, the per-run inequality
// monitor, and growth-rate fitting. Every bound constant is a fitted
// output (the smallest constant making the inequality hold on the data),
// never an input.

#include "diskflow/biot_savart.hpp"
#include "diskflow/field.hpp"

#include <string>
#include <utility>
#include <vector>

namespace diskflow {

struct EnvelopeParams {
    double A = 1.0;        // sup norm of the initial vorticity
    double B = 2.0;        // sup norm of the initial vorticity gradient
    double C_upper = 1.0;  // upper-envelope rate constant
    double c_lower = 1.0;  // lower-envelope rate constant
    double epsilon = 0.05; // initial-data scale
    double C_gap = 0.0;    // additive constant of the gap bound
};

struct DiagnosticsRecord {
    double t = 0.0;
    double a = 0.0, b = 0.0;
    double log_gap = 0.0; // log(b/a)
    double omega_bb = 0.0;
    double grad_sup = 0.0;
    double occupancy_min = 0.0;
    double supnorm = 0.0;
    double area_05 = 0.0;
    std::vector<double> tracer_x1;
    std::vector<double> pair_sep;
    double omega_seg_max = 0.0; // max Omega(b, x2) over the b-segment
    double b1_max = 0.0, b2_max = 0.0;
    long projections = 0;
    std::string warnings;
};

// Residuals of the hyperbolic velocity decomposition:
//   B1 = u1/x1 + Omega(x),  B2 = u2/x2 - Omega(x).
struct ResidualB {
    double b1 = 0.0;
    double b2 = 0.0;
};
ResidualB residual_B(Point2 x, const QuadratureCache& q);
ResidualB residual_B(Point2 x, const VorticityField& f);

struct LemmaScanRow {
    double radius = 0.0;
    double angle = 0.0;
    double omega = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
};

struct LemmaScanSummary {
    std::vector<LemmaScanRow> rows;
    std::vector<double> radii;
    std::vector<double> omega_diag;       // Omega at corners (s, s)
    std::vector<double> b1_by_radius;     // max |B1| per radius, sector 1
    std::vector<double> b2_by_radius;     // max |B2| per radius, sector 2
    double max_b1 = 0.0, max_b2 = 0.0;
    double omega_slope = 0.0;             // d Omega(s,s) / d ln(1/s), fitted
};

// Fan scan of the residuals over both sectors at the given radii
// (positive, descending), plus the Omega log-slope fit.
LemmaScanSummary lemma_scan(const VorticityField& f, double gamma,
                            const std::vector<double>& radii, int fan = 5);

struct StripBound {
    double omega_min = 0.0;
    double c1_fit = 0.0; // omega_min / log(1/delta)
};
StripBound strip_bound(const VorticityField& f, double delta);

// Contraction-rate floor near the origin: min over probes of -u1/x1.
// Dominant when the rate clears 1, which is what the exponential
// boundary-contraction check needs.
struct StripDominance {
    double rate_min = 0.0;
    bool dominant = false;
};
StripDominance strip_dominance(const VorticityField& f, double delta);

struct ConeCheck {
    double c_fit = 0.0;
    bool pass = false;
};
// Diagonal probes inside |x| < delta: velocity must point left and up, with
// -u1/u2 pinched around 1 within the fitted log-window constant.
ConeCheck cone_check(const VorticityField& f, double delta, int n);

double envelope_upper(const EnvelopeParams& p, double t);
double envelope_lower(const EnvelopeParams& p, double t);

// Adaptive solution of y' = C A y (1 + log(1 + y)), y(0) = B/A. The
// integration runs in z = log(1 + y), which stays representable long
// after y itself overflows; comparison_ode returns y (+inf once it leaves
// double range) and comparison_ode_log returns 1 + log(1 + y) directly.
double comparison_ode(const EnvelopeParams& p, double t, double tol);
double comparison_ode_log(const EnvelopeParams& p, double t, double tol);

// Bound on log a - log b: ((p_cut - 1) log eps + C_gap) exp(t / 2pi).
double gronwall_gap(const EnvelopeParams& p, double t, double p_cut);

enum class GrowthModel { Exponential, DoubleExponential };
struct GrowthFit {
    double rate = 0.0;
    double quality = 0.0; // coefficient of determination
};
GrowthFit fit_growth(const std::vector<std::pair<double, double>>& series,
                     GrowthModel model);

struct MonitorBlock {
    std::string name;
    std::string tag;
    double fitted_c = 0.0;
    bool pass = false;
    std::string note;
};

struct MonitorReport {
    std::vector<MonitorBlock> blocks;
    bool all_pass = false;

    const MonitorBlock* find(const std::string& tag) const;
    std::string text() const;
    std::string json_text() const;
};

// Fits the smallest constants making each recorded inequality hold:
// the b-segment velocity floor, the a-segment drift bound, the gap
// Gronwall inequality, the segment Omega comparison, and the two-sided
// flow-map bound against tracer-pair separations.
MonitorReport monitor(const std::vector<DiagnosticsRecord>& records,
                      const EnvelopeParams& p);

} // namespace diskflow
