#pragma once

// Scenario orchestration: the time loop with diagnostics recording, run
// persistence (field snapshot plus a text run-state sidecar), CSV and JSON
// artifacts, and the CLI command entry points.

#include "diskflow/analysis.hpp"
#include "diskflow/config.hpp"
#include "diskflow/transport.hpp"

#include <functional>
#include <optional>

namespace diskflow {

struct RunState {
    double t = 0.0;
    long steps = 0;
    long projections = 0;
    ABState ab;
    TracerSet tracers;
    double baseline_supnorm = 0.0;
    double baseline_area = 0.0;
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    VorticityField field;
    RunState state;
    double supnorm_drift = 0.0;
    double area_drift = 0.0;
    bool warned = false;
    EnvelopeParams measured; // A, B from the initial data
};

// Called at every diagnostics record with the live field and run state
// (snapshot writers hook in here).
using RecordHook =
    std::function<void(const DiagnosticsRecord&, const VorticityField&, const RunState&)>;

RunResult run(const SimConfig& cfg, const RecordHook& hook = {});
RunResult run_resumed(const SimConfig& cfg, const std::string& snapshot_path,
                      const RecordHook& hook = {});

void save_run_state(const RunState& st, const std::string& path);
RunState load_run_state(const std::string& path);

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records);
void write_text_atomic(const std::string& path, const std::string& content);

// CLI commands; each returns the process exit code (0 ok, 1 error,
// 2 finished with numerical-health warnings).
int cmd_simulate(const SimConfig& cfg, const std::string& out_override,
                 const std::string& resume_path);
int cmd_verify_lemma(const SimConfig& cfg, const std::string& out_override);
int cmd_envelopes(const EnvelopeParams& p, double t_max, int t_count, double tol,
                  double p_cut, const std::string& out_path);
int cmd_export(const std::string& snapshot_path, const std::string& format,
               const std::string& out_path, std::optional<GridSpec> hint);

} // namespace diskflow
