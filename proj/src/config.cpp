#include "diskflow/config.hpp"
#include "diskflow/field_io.hpp"

#include <fstream>
#include <sstream>

namespace diskflow {

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d))
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    return int(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

std::vector<TracerSpec> to_tracers(const std::string& key, const std::string& v) {
    std::vector<TracerSpec> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        TracerSpec ts;
        if (item.size() > 2 && item[0] == 'b' && item[1] == ':') {
            ts.boundary = true;
            ts.x1 = to_double(key, trim(item.substr(2)));
        } else if (item.size() > 2 && item[0] == 'p' && item[1] == ':') {
            const auto rest = item.substr(2);
            const auto comma = rest.find(',');
            if (comma == std::string::npos)
                throw ConfigError("config: key '" + key + "': interior tracer needs x1,x2");
            ts.x1 = to_double(key, trim(rest.substr(0, comma)));
            ts.x2 = to_double(key, trim(rest.substr(comma + 1)));
        } else {
            throw ConfigError("config: key '" + key + "': tracer entries are b:x1 or p:x1,x2");
        }
        out.push_back(ts);
    }
    return out;
}

void validate(const SimConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (c.grid.nr < 8) fail("grid.nr must be at least 8");
    if (c.grid.ntheta < 8) fail("grid.ntheta must be at least 8");
    if (!(c.grid.radial_q >= 1.0 && c.grid.radial_q <= 16.0))
        fail("grid.radial_q must lie in [1, 16]");
    if (c.grid.theta_map == ThetaMap::Band) {
        if (!(c.grid.band_h0 > 0.0 && c.grid.band_h0 < 0.1))
            fail("grid.band_h0 must lie in (0, 0.1)");
        if (!(c.grid.band_growth > 1.0 && c.grid.band_growth <= 2.0))
            fail("grid.band_growth must lie in (1, 2]");
    }
    if (c.grid.radial_map == RadialMap::Band) {
        if (!(c.grid.radial_h0 > 0.0 && c.grid.radial_h0 < 0.1))
            fail("grid.radial_h0 must lie in (0, 0.1)");
        if (!(c.grid.radial_growth > 1.0 && c.grid.radial_growth <= 2.0))
            fail("grid.radial_growth must lie in (1, 2]");
    }
    if (c.kind != "ks" && c.kind != "strip" && c.kind != "uniform" && c.kind != "zero")
        fail("initial_data.kind must be ks, strip, uniform or zero");
    if (!(c.data.epsilon > 0.0 && c.data.epsilon < 1.0))
        fail("initial_data.epsilon must lie in (0, 1)");
    if (!(c.data.delta > 0.0 && c.data.delta < 1.0))
        fail("initial_data.delta must lie in (0, 1)");
    if (c.kind == "ks" && !(c.data.epsilon < c.data.delta))
        fail("initial_data.epsilon must be smaller than initial_data.delta for kind=ks");
    if (!(c.data.cutoff_exponent >= 1.0))
        fail("initial_data.cutoff_exponent must be >= 1");
    if (c.data.smoothing_width < 0.0) fail("initial_data.smoothing_width must be >= 0");
    if (c.strip_width < 0.0) fail("initial_data.strip_width must be >= 0");
    if (!(c.t_final >= 0.0)) fail("time.t_final must be >= 0");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) fail("time.cfl must lie in (0, 1]");
    if (!(c.dt >= 0.0)) fail("time.dt must be >= 0 (0 selects the cfl rule)");
    if (!(c.dt_max > 0.0)) fail("time.dt_max must be positive");
    if (!(c.record_cadence > 0.0)) fail("time.record_cadence must be positive");
    if (!(c.gamma > 0.0 && c.gamma < M_PI / 2))
        fail("diagnostics.gamma must lie in (0, pi/2)");
    if (c.segment_samples < 4) fail("diagnostics.segment_samples must be >= 4");
    if (c.segment_refine < 0) fail("diagnostics.segment_refine must be >= 0");
    if (c.occupancy_probes_x1 < 1 || c.occupancy_probes_x2 < 1)
        fail("diagnostics.occupancy_probes must be >= 1");
    if (c.track_ab < -1 || c.track_ab > 1) fail("diagnostics.track_ab must be -1, 0 or 1");
    for (size_t i = 0; i + 1 < c.scan_radii.size(); ++i)
        if (!(c.scan_radii[i] > c.scan_radii[i + 1]))
            fail("diagnostics.scan_radii must be positive and descending");
    if (!c.scan_radii.empty() && !(c.scan_radii.back() > 0.0))
        fail("diagnostics.scan_radii must be positive and descending");
    if (c.snapshot_cadence < 0.0) fail("output.snapshot_cadence must be >= 0");
    if (c.out_dir.empty()) fail("output.dir must not be empty");
}

} // namespace

SimConfig parse_config_text(const std::string& text) {
    SimConfig c;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "grid" && section != "initial_data" && section != "time" &&
                section != "diagnostics" && section != "output")
                throw ConfigError("config: line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        if (full == "grid.nr") c.grid.nr = to_int(full, val);
        else if (full == "grid.ntheta") c.grid.ntheta = to_int(full, val);
        else if (full == "grid.radial_q") c.grid.radial_q = to_double(full, val);
        else if (full == "grid.theta_map") {
            if (val == "uniform") c.grid.theta_map = ThetaMap::Uniform;
            else if (val == "band") c.grid.theta_map = ThetaMap::Band;
            else throw ConfigError("config: grid.theta_map must be uniform or band");
        } else if (full == "grid.band_h0") c.grid.band_h0 = to_double(full, val);
        else if (full == "grid.band_growth") c.grid.band_growth = to_double(full, val);
        else if (full == "grid.radial_map") {
            if (val == "poly") c.grid.radial_map = RadialMap::Poly;
            else if (val == "band") c.grid.radial_map = RadialMap::Band;
            else throw ConfigError("config: grid.radial_map must be poly or band");
        } else if (full == "grid.radial_h0") c.grid.radial_h0 = to_double(full, val);
        else if (full == "grid.radial_growth") c.grid.radial_growth = to_double(full, val);
        else if (full == "initial_data.kind") c.kind = val;
        else if (full == "initial_data.epsilon") c.data.epsilon = to_double(full, val);
        else if (full == "initial_data.delta") c.data.delta = to_double(full, val);
        else if (full == "initial_data.cutoff_exponent")
            c.data.cutoff_exponent = to_double(full, val);
        else if (full == "initial_data.smoothing_width")
            c.data.smoothing_width = to_double(full, val);
        else if (full == "initial_data.strip_width") c.strip_width = to_double(full, val);
        else if (full == "time.t_final") c.t_final = to_double(full, val);
        else if (full == "time.dt") c.dt = to_double(full, val);
        else if (full == "time.cfl") c.cfl = to_double(full, val);
        else if (full == "time.dt_max") c.dt_max = to_double(full, val);
        else if (full == "time.record_cadence") c.record_cadence = to_double(full, val);
        else if (full == "time.predictor_corrector")
            c.predictor_corrector = to_bool(full, val);
        else if (full == "diagnostics.gamma") c.gamma = to_double(full, val);
        else if (full == "diagnostics.scan_radii") c.scan_radii = to_list(full, val);
        else if (full == "diagnostics.segment_samples")
            c.segment_samples = to_int(full, val);
        else if (full == "diagnostics.segment_refine") c.segment_refine = to_int(full, val);
        else if (full == "diagnostics.occupancy_probes_x1")
            c.occupancy_probes_x1 = to_int(full, val);
        else if (full == "diagnostics.occupancy_probes_x2")
            c.occupancy_probes_x2 = to_int(full, val);
        else if (full == "diagnostics.track_ab") c.track_ab = to_int(full, val);
        else if (full == "diagnostics.tracers") c.tracers = to_tracers(full, val);
        else if (full == "diagnostics.seed") c.seed = unsigned(to_int(full, val));
        else if (full == "output.dir") c.out_dir = val;
        else if (full == "output.snapshot_cadence")
            c.snapshot_cadence = to_double(full, val);
        else
            throw ConfigError("config: line " + std::to_string(lineno) +
                              ": unknown key '" + full + "'");
    }
    validate(c);
    return c;
}

SimConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const SimConfig& c) {
    std::ostringstream os;
    auto d = [](double v) { return format_double(v); };
    os << "[grid]\n"
       << "nr = " << c.grid.nr << "\n"
       << "ntheta = " << c.grid.ntheta << "\n"
       << "radial_q = " << d(c.grid.radial_q) << "\n"
       << "theta_map = " << (c.grid.theta_map == ThetaMap::Band ? "band" : "uniform") << "\n"
       << "band_h0 = " << d(c.grid.band_h0) << "\n"
       << "band_growth = " << d(c.grid.band_growth) << "\n"
       << "radial_map = " << (c.grid.radial_map == RadialMap::Band ? "band" : "poly") << "\n"
       << "radial_h0 = " << d(c.grid.radial_h0) << "\n"
       << "radial_growth = " << d(c.grid.radial_growth) << "\n"
       << "\n[initial_data]\n"
       << "kind = " << c.kind << "\n"
       << "epsilon = " << d(c.data.epsilon) << "\n"
       << "delta = " << d(c.data.delta) << "\n"
       << "cutoff_exponent = " << d(c.data.cutoff_exponent) << "\n"
       << "smoothing_width = " << d(c.data.smoothing_width) << "\n"
       << "strip_width = " << d(c.strip_width) << "\n"
       << "\n[time]\n"
       << "t_final = " << d(c.t_final) << "\n"
       << "dt = " << d(c.dt) << "\n"
       << "cfl = " << d(c.cfl) << "\n"
       << "dt_max = " << d(c.dt_max) << "\n"
       << "record_cadence = " << d(c.record_cadence) << "\n"
       << "predictor_corrector = " << (c.predictor_corrector ? "true" : "false") << "\n"
       << "\n[diagnostics]\n"
       << "gamma = " << d(c.gamma) << "\n";
    os << "scan_radii = ";
    for (size_t i = 0; i < c.scan_radii.size(); ++i)
        os << (i ? "," : "") << d(c.scan_radii[i]);
    os << "\n"
       << "segment_samples = " << c.segment_samples << "\n"
       << "segment_refine = " << c.segment_refine << "\n"
       << "occupancy_probes_x1 = " << c.occupancy_probes_x1 << "\n"
       << "occupancy_probes_x2 = " << c.occupancy_probes_x2 << "\n"
       << "track_ab = " << c.track_ab << "\n";
    os << "tracers = ";
    for (size_t i = 0; i < c.tracers.size(); ++i) {
        const auto& ts = c.tracers[i];
        os << (i ? ";" : "");
        if (ts.boundary) os << "b:" << d(ts.x1);
        else os << "p:" << d(ts.x1) << "," << d(ts.x2);
    }
    os << "\n"
       << "seed = " << c.seed << "\n"
       << "\n[output]\n"
       << "dir = " << c.out_dir << "\n"
       << "snapshot_cadence = " << d(c.snapshot_cadence) << "\n";
    return os.str();
}

VorticityField build_initial_field(const SimConfig& cfg) {
    auto grid = std::make_shared<PolarGrid>(cfg.grid);
    if (cfg.kind == "strip") {
        const double w = cfg.strip_width > 0.0 ? cfg.strip_width : 0.5 * cfg.data.delta;
        return build_strip_data(cfg.data.delta, w, grid);
    }
    if (cfg.kind == "ks") return build_ks_data(cfg.data, grid);
    if (cfg.kind == "uniform") return build_uniform_data(grid);
    return VorticityField(grid); // zero
}

} // namespace diskflow
