#pragma once

// Run configuration: flat key=value sections in plain text.
// Unknown keys are rejected; every numeric range is validated at parse
// time with the offending key named in the error.

#include "diskflow/field.hpp"

#include <string>
#include <vector>

namespace diskflow {

struct TracerSpec {
    bool boundary = false;
    double x1 = 0.0;
    double x2 = 0.0; // ignored for boundary tracers
};

struct SimConfig {
    // [grid]
    GridSpec grid{.nr = 128, .ntheta = 256, .radial_q = 2.0,
                  .theta_map = ThetaMap::Uniform, .band_h0 = 1e-6,
                  .band_growth = 1.15};

    // [initial_data]
    std::string kind = "ks"; // ks | strip | uniform | zero
    DataParams data;
    double strip_width = 0.0; // 0 = delta / 2

    // [time]
    double t_final = 3.0;
    double dt = 0.0; // 0 = from the cfl rule each step
    double cfl = 0.5;
    double dt_max = 0.01;
    double record_cadence = 0.05;
    bool predictor_corrector = false;

    // [diagnostics]
    double gamma = M_PI / 16.0;
    std::vector<double> scan_radii{0.1, 0.05, 0.025, 0.0125};
    int segment_samples = 64;
    int segment_refine = 6;
    int occupancy_probes_x1 = 24;
    int occupancy_probes_x2 = 12;
    int track_ab = -1; // -1 auto (ks only), 0 off, 1 on
    std::vector<TracerSpec> tracers;
    unsigned seed = 12345;

    // [output]
    std::string out_dir = "out";
    double snapshot_cadence = 0.0; // 0 = final snapshot only

    bool tracks_ab() const { return track_ab == 1 || (track_ab == -1 && kind == "ks"); }
};

SimConfig parse_config(const std::string& path);
SimConfig parse_config_text(const std::string& text);
std::string serialize_config(const SimConfig& cfg);

// Builds the initial field described by the config (grid included).
VorticityField build_initial_field(const SimConfig& cfg);

} // namespace diskflow
