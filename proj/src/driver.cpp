#include "diskflow/driver.hpp"
#include "diskflow/battery.hpp"
#include "diskflow/field_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace diskflow {

namespace {

std::vector<std::pair<size_t, size_t>> interior_pairs(const TracerSet& t) {
    std::vector<size_t> interior;
    for (size_t k = 0; k < t.size(); ++k)
        if (!t.on_boundary[k]) interior.push_back(k);
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t k = 0; k + 1 < interior.size(); k += 2)
        pairs.emplace_back(interior[k], interior[k + 1]);
    return pairs;
}

// light residual probe fan at radius rad (both sectors)
void residual_maxima(const QuadratureCache& q, double rad, double gamma,
                     double& b1max, double& b2max) {
    b1max = b2max = 0.0;
    const double bdry = std::asin(std::min(1.0, 0.5 * rad));
    const double lo = std::max(1.2 * bdry + 0.02, gamma);
    const double hi = M_PI / 2 - std::max(0.02, gamma);
    if (lo >= hi) return;
    for (int k = 0; k < 3; ++k) {
        const double phi = lo + (hi - lo) * (k + 0.5) / 3.0;
        const Point2 x{rad * std::cos(phi), rad * std::sin(phi)};
        if (!(x.x1 > 0.0 && x.x2 > 0.0)) continue;
        const ResidualB rb = residual_B(x, q);
        b1max = std::max(b1max, std::abs(rb.b1));
        b2max = std::max(b2max, std::abs(rb.b2));
    }
}

struct Engine {
    const SimConfig& cfg;
    VorticityField field;
    RunState st;
    std::vector<DiagnosticsRecord> records;
    bool track_ab;
    RecordHook hook;

    Engine(const SimConfig& c, VorticityField f, RunState s, RecordHook h)
        : cfg(c), field(std::move(f)), st(std::move(s)), track_ab(c.tracks_ab()),
          hook(std::move(h)) {}

    bool needs_cache() const { return track_ab || !st.tracers.positions.empty(); }

    DiagnosticsRecord make_record(const QuadratureCache* cache) {
        DiagnosticsRecord r;
        r.t = field.time();
        r.supnorm = sup_norm(field);
        r.grad_sup = grad_sup_fd(field);
        r.area_05 = level_set_area(field, 0.5);
        r.projections = st.projections;

        std::vector<std::string> warn;
        if (track_ab && st.ab.valid) {
            r.a = st.ab.a();
            r.b = st.ab.b();
            r.log_gap = st.ab.log_b - st.ab.log_a;
            r.occupancy_min = occupancy(field, st.ab, cfg.occupancy_probes_x1,
                                        cfg.occupancy_probes_x2);
            if (cache) {
                const double b = r.b;
                r.omega_bb = omega_factor({b, b}, *cache);
                const double h = boundary_height(b);
                double seg_max = r.omega_bb;
                for (int k = 0; k < 12; ++k) {
                    const double x2 = h + (b - h) * std::pow(1e-3, 1.0 - k / 11.0);
                    seg_max = std::max(seg_max, omega_factor({b, std::min(x2, b)}, *cache));
                }
                r.omega_seg_max = seg_max;
                residual_maxima(*cache, b, cfg.gamma, r.b1_max, r.b2_max);
            }
        } else if (track_ab) {
            warn.push_back("ab_invalid");
        }
        for (size_t k = 0; k < st.tracers.size(); ++k)
            r.tracer_x1.push_back(st.tracers.positions[k].x1);
        for (const auto& [i, j] : interior_pairs(st.tracers))
            r.pair_sep.push_back(norm(st.tracers.positions[i] - st.tracers.positions[j]));

        if (!records.empty()) {
            const double s0 = st.baseline_supnorm, a0 = st.baseline_area;
            if (s0 > 0 && std::abs(r.supnorm - s0) / s0 > 0.01) warn.push_back("supnorm_drift");
            if (a0 > 0 && std::abs(r.area_05 - a0) / a0 > 0.02) warn.push_back("area_drift");
        }
        if (st.projections > 0) warn.push_back("projected_feet");
        for (size_t k = 0; k < warn.size(); ++k)
            r.warnings += (k ? ";" : "") + warn[k];
        return r;
    }

    void record_now(const QuadratureCache* cache) {
        records.push_back(make_record(cache));
        st.t = field.time();
        if (hook) hook(records.back(), field, st);
    }

    void step_once(double dt) {
        std::optional<QuadratureCache> cache;
        if (needs_cache()) cache.emplace(QuadratureCache::build(field));
        if (track_ab && st.ab.valid)
            st.ab = integrate_ab(st.ab, *cache, dt, cfg.segment_samples, cfg.segment_refine);
        if (!st.tracers.positions.empty())
            st.tracers = advance_tracers(st.tracers, *cache, dt);

        StreamField s = solve_stream(field);
        if (cfg.predictor_corrector) {
            VorticityField provisional = advect(field, s, dt, nullptr);
            StreamField s2 = solve_stream(provisional);
            for (size_t k = 0; k < s.values().size(); ++k)
                s.values()[k] = 0.5 * (s.values()[k] + s2.values()[k]);
        }
        field = advect(field, s, dt, &st.projections);
        ++st.steps;
    }

    void advance(double t_final) {
        // initial record (or resume continuation)
        if (records.empty()) {
            std::optional<QuadratureCache> cache;
            if (needs_cache()) cache.emplace(QuadratureCache::build(field));
            if (st.baseline_supnorm == 0.0) {
                st.baseline_supnorm = sup_norm(field);
                st.baseline_area = level_set_area(field, 0.5);
            }
            record_now(cache ? &*cache : nullptr);
        }
        if (t_final <= field.time()) return;

        if (cfg.dt > 0.0) {
            const long per_record =
                std::max<long>(1, std::lround(cfg.record_cadence / cfg.dt));
            const double dt = cfg.record_cadence / double(per_record);
            const long total =
                std::lround((t_final - field.time()) / cfg.record_cadence) * per_record;
            for (long k = 0; k < total; ++k) {
                step_once(dt);
                if ((k + 1) % per_record == 0) {
                    std::optional<QuadratureCache> cache;
                    if (needs_cache()) cache.emplace(QuadratureCache::build(field));
                    record_now(cache ? &*cache : nullptr);
                }
            }
        } else {
            double next_record = field.time() + cfg.record_cadence;
            while (field.time() < t_final - 1e-12) {
                const double target = std::min(next_record, t_final);
                double dt = cfl_dt(field, cfg.cfl, cfg.dt_max);
                dt = std::min(dt, target - field.time());
                step_once(dt);
                if (field.time() >= target - 1e-12) {
                    std::optional<QuadratureCache> cache;
                    if (needs_cache()) cache.emplace(QuadratureCache::build(field));
                    record_now(cache ? &*cache : nullptr);
                    next_record = field.time() + cfg.record_cadence;
                }
            }
        }
        st.t = field.time();
    }
};

RunState initial_state(const SimConfig& cfg) {
    RunState st;
    if (cfg.tracks_ab()) {
        st.ab.log_a = cfg.data.cutoff_exponent * std::log(cfg.data.epsilon);
        st.ab.log_b = std::log(cfg.data.epsilon);
        st.ab.valid = true;
    }
    for (const auto& ts : cfg.tracers) {
        if (ts.boundary) {
            st.tracers.positions.push_back(boundary_point(ts.x1));
            st.tracers.on_boundary.push_back(1);
        } else {
            st.tracers.positions.push_back({ts.x1, ts.x2});
            st.tracers.on_boundary.push_back(0);
        }
        st.tracers.labels.push_back("t" + std::to_string(st.tracers.size() - 1));
    }
    return st;
}

RunResult finish(const SimConfig& cfg, Engine&& eng, const VorticityField& initial) {
    RunResult out{std::move(eng.records), std::move(eng.field), std::move(eng.st),
                  0.0, 0.0, false, {}};
    const auto& first = out.records.front();
    const auto& last = out.records.back();
    out.supnorm_drift =
        first.supnorm > 0 ? std::abs(last.supnorm - first.supnorm) / first.supnorm : 0.0;
    out.area_drift =
        first.area_05 > 0 ? std::abs(last.area_05 - first.area_05) / first.area_05 : 0.0;
    out.warned = out.supnorm_drift > 0.01 || out.area_drift > 0.02 ||
                 out.state.projections > 0;
    out.measured.A = std::max(sup_norm(initial), 1e-300);
    out.measured.B = grad_sup_fd(initial);
    out.measured.epsilon = cfg.data.epsilon;
    (void)cfg;
    return out;
}

} // namespace

RunResult run(const SimConfig& cfg, const RecordHook& hook) {
    VorticityField initial = build_initial_field(cfg);
    Engine eng(cfg, initial, initial_state(cfg), hook);
    eng.advance(cfg.t_final);
    return finish(cfg, std::move(eng), initial);
}

RunResult run_resumed(const SimConfig& cfg, const std::string& snapshot_path,
                      const RecordHook& hook) {
    VorticityField field = load_snapshot(snapshot_path, cfg.grid);
    RunState st = load_run_state(snapshot_path + ".state");
    if (std::abs(st.t - field.time()) > 1e-12)
        throw std::runtime_error("resume: state and snapshot disagree on time");
    Engine eng(cfg, std::move(field), std::move(st), hook);
    eng.advance(cfg.t_final);
    VorticityField initial = build_initial_field(cfg);
    return finish(cfg, std::move(eng), initial);
}

void save_run_state(const RunState& st, const std::string& path) {
    std::ostringstream os;
    os << "DISKFLOW-STATE 1\n";
    os << "t = " << format_double(st.t) << "\n";
    os << "steps = " << st.steps << "\n";
    os << "projections = " << st.projections << "\n";
    os << "ab_valid = " << (st.ab.valid ? 1 : 0) << "\n";
    os << "log_a = " << format_double(st.ab.log_a) << "\n";
    os << "log_b = " << format_double(st.ab.log_b) << "\n";
    os << "baseline_supnorm = " << format_double(st.baseline_supnorm) << "\n";
    os << "baseline_area = " << format_double(st.baseline_area) << "\n";
    for (size_t k = 0; k < st.tracers.size(); ++k)
        os << "tracer = " << (st.tracers.on_boundary[k] ? "b" : "p") << " "
           << format_double(st.tracers.positions[k].x1) << " "
           << format_double(st.tracers.positions[k].x2) << " "
           << st.tracers.labels[k] << "\n";
    write_text_atomic(path, os.str());
}

RunState load_run_state(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("run state: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != "DISKFLOW-STATE 1")
        throw std::runtime_error("run state: bad header in " + path);
    RunState st;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        const std::string val = line.substr(eq + 2);
        if (key == "t") st.t = std::stod(val);
        else if (key == "steps") st.steps = std::stol(val);
        else if (key == "projections") st.projections = std::stol(val);
        else if (key == "ab_valid") st.ab.valid = val != "0";
        else if (key == "log_a") st.ab.log_a = std::stod(val);
        else if (key == "log_b") st.ab.log_b = std::stod(val);
        else if (key == "baseline_supnorm") st.baseline_supnorm = std::stod(val);
        else if (key == "baseline_area") st.baseline_area = std::stod(val);
        else if (key == "tracer") {
            std::istringstream ls(val);
            std::string kind, label;
            double x1, x2;
            ls >> kind >> x1 >> x2 >> label;
            st.tracers.positions.push_back({x1, x2});
            st.tracers.on_boundary.push_back(kind == "b" ? 1 : 0);
            st.tracers.labels.push_back(label);
        } else {
            throw std::runtime_error("run state: unknown key '" + key + "' in " + path);
        }
    }
    return st;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records) {
    std::ostringstream os;
    const size_t ntr = records.empty() ? 0 : records[0].tracer_x1.size();
    const size_t npr = records.empty() ? 0 : records[0].pair_sep.size();
    os << "t,a,b,log_gap,omega_bb,grad_sup,occupancy_min,supnorm,area_05";
    for (size_t k = 0; k < ntr; ++k) os << ",tracer" << (k + 1) << "_x1";
    for (size_t k = 0; k < npr; ++k) os << ",pair" << (k + 1) << "_sep";
    os << ",omega_seg_max,b1_max,b2_max,projections,warnings\n";
    for (const auto& r : records) {
        os << format_double(r.t) << ',' << format_double(r.a) << ',' << format_double(r.b)
           << ',' << format_double(r.log_gap) << ',' << format_double(r.omega_bb) << ','
           << format_double(r.grad_sup) << ',' << format_double(r.occupancy_min) << ','
           << format_double(r.supnorm) << ',' << format_double(r.area_05);
        for (double v : r.tracer_x1) os << ',' << format_double(v);
        for (double v : r.pair_sep) os << ',' << format_double(v);
        os << ',' << format_double(r.omega_seg_max) << ',' << format_double(r.b1_max)
           << ',' << format_double(r.b2_max) << ',' << r.projections << ',' << r.warnings
           << '\n';
    }
    return os.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string staging = path + ".staging";
    {
        std::ofstream os(staging, std::ios::trunc | std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + staging + " for writing");
        os << content;
        if (!os) throw std::runtime_error("write failed for " + staging);
    }
    fs::rename(staging, path);
}

namespace {

void save_snapshot_atomic(const VorticityField& f, const std::string& path) {
    const std::string staging = path + ".staging";
    save_snapshot(f, staging);
    fs::rename(staging, path);
}

} // namespace

int cmd_simulate(const SimConfig& cfg, const std::string& out_override,
                 const std::string& resume_path) {
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    fs::create_directories(out_dir);

    RecordHook hook;
    if (cfg.snapshot_cadence > 0.0) {
        hook = [&](const DiagnosticsRecord& rec, const VorticityField& f,
                   const RunState& st) {
            const double phase = rec.t / cfg.snapshot_cadence;
            if (std::abs(phase - std::round(phase)) > 1e-9) return;
            char name[64];
            std::snprintf(name, sizeof name, "/snap_%012.6f.snap", rec.t);
            const std::string path = out_dir + name;
            save_snapshot_atomic(f, path);
            save_run_state(st, path + ".state");
        };
    }
    RunResult res = resume_path.empty() ? run(cfg, hook) : run_resumed(cfg, resume_path, hook);

    write_text_atomic(out_dir + "/diagnostics.csv", diagnostics_csv(res.records));
    save_snapshot_atomic(res.field, out_dir + "/final.snap");
    save_run_state(res.state, out_dir + "/final.snap.state");

    nlohmann::json j;
    j["t_final"] = res.records.back().t;
    j["records"] = res.records.size();
    j["steps"] = res.state.steps;
    j["supnorm_drift"] = res.supnorm_drift;
    j["area_drift"] = res.area_drift;
    j["projections"] = res.state.projections;
    j["warned"] = res.warned;
    j["measured_A"] = res.measured.A;
    j["measured_B"] = res.measured.B;
    j["final_a"] = res.records.back().a;
    j["final_b"] = res.records.back().b;

    if (res.records.size() >= 3 && cfg.tracks_ab()) {
        const MonitorReport rep = monitor(res.records, res.measured);
        write_text_atomic(out_dir + "/verification_report.txt", rep.text());
        write_text_atomic(out_dir + "/verification_report.json", rep.json_text());
        for (const auto& b : rep.blocks) j["monitor"][b.tag] = b.fitted_c;
    }
    write_text_atomic(out_dir + "/summary.json", j.dump(2) + "\n");
    return res.warned ? 2 : 0;
}

int cmd_verify_lemma(const SimConfig& cfg, const std::string& out_override) {
    const std::string out_dir = out_override.empty() ? cfg.out_dir : out_override;
    fs::create_directories(out_dir);

    const VorticityField field = build_initial_field(cfg);
    const LemmaScanSummary scan = lemma_scan(field, cfg.gamma, cfg.scan_radii);
    const StripBound sb = strip_bound(field, cfg.data.delta);
    const StripDominance dom = strip_dominance(field, cfg.data.delta);
    const ConeCheck cone = cone_check(field, cfg.data.delta, 16);

    const size_t nrad = scan.radii.size();
    const double b1_large = nrad ? scan.b1_by_radius.front() : 0.0;
    const double b2_large = nrad ? scan.b2_by_radius.front() : 0.0;
    double b1_small = 0.0, b2_small = 0.0;
    for (size_t k = nrad >= 2 ? nrad - 2 : 0; k < nrad; ++k) {
        b1_small = std::max(b1_small, scan.b1_by_radius[k]);
        b2_small = std::max(b2_small, scan.b2_by_radius[k]);
    }
    const double slope_ref = 2.0 / M_PI;

    MonitorReport rep;
    rep.blocks.push_back({"residual B1 bounded while Omega grows", "b1_bounded",
                          scan.max_b1, b1_small <= 3.0 * std::max(b1_large, 0.05), ""});
    rep.blocks.push_back({"residual B2 bounded while Omega grows", "b2_bounded",
                          scan.max_b2, b2_small <= 3.0 * std::max(b2_large, 0.05), ""});
    rep.blocks.push_back({"Omega(s,s) log slope against 2/pi", "omega_slope",
                          scan.omega_slope,
                          std::abs(scan.omega_slope - slope_ref) <= 0.1 * slope_ref, ""});
    rep.blocks.push_back({"Omega floor over the near-origin ball", "strip_c1", sb.c1_fit,
                          sb.c1_fit > 0.0, ""});
    rep.blocks.push_back({"contraction-rate dominance (rate_min >= 1)", "dominance",
                          dom.rate_min, dom.dominant, ""});
    rep.blocks.push_back({"diagonal cone condition", "cone", cone.c_fit, cone.pass, ""});
    rep.all_pass = true;
    for (const auto& b : rep.blocks) rep.all_pass = rep.all_pass && b.pass;

    write_text_atomic(out_dir + "/verification_report.txt", rep.text());
    write_text_atomic(out_dir + "/verification_report.json", rep.json_text());
    return rep.all_pass ? 0 : 1;
}

int cmd_envelopes(const EnvelopeParams& p, double t_max, int t_count, double tol,
                  double p_cut, const std::string& out_path) {
    if (t_count < 1 || t_max < 0.0) throw std::invalid_argument("envelopes: bad t grid");
    // upper and ode are reported in the transformed units 1 + log(1 + y),
    // which keeps them representable where y itself overflows
    std::ostringstream os;
    os << "t,lower,upper,ode,gap\n";
    for (int k = 0; k < t_count; ++k) {
        const double t = t_count == 1 ? t_max : t_max * double(k) / double(t_count - 1);
        os << format_double(t) << ',' << format_double(envelope_lower(p, t)) << ','
           << format_double(envelope_upper(p, t)) << ','
           << format_double(comparison_ode_log(p, t, tol)) << ','
           << format_double(gronwall_gap(p, t, p_cut)) << '\n';
    }
    write_text_atomic(out_path, os.str());
    return 0;
}

int cmd_export(const std::string& snapshot_path, const std::string& format,
               const std::string& out_path, std::optional<GridSpec> hint) {
    const VorticityField f = load_snapshot(snapshot_path, hint);
    if (format == "csv") {
        std::ostringstream os;
        const std::string staging = out_path + ".staging";
        export_csv(f, staging);
        fs::rename(staging, out_path);
        return 0;
    }
    if (format == "snapshot") {
        save_snapshot_atomic(f, out_path);
        return 0;
    }
    throw std::invalid_argument("export: format must be csv or snapshot");
}

} // namespace diskflow
