// diskflow: simulator and verification bench for odd-symmetric 2D Euler
// flow on the unit disk.
//
// Subcommands: simulate, verify-lemma, envelopes, export, validate-kernels.

#include "diskflow/battery.hpp"
#include "diskflow/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace diskflow;

int main(int argc, char** argv) {
    CLI::App app{"2D Euler disk flow simulator and verification bench"};
    app.require_subcommand(1);

    std::string config_path, out_dir, resume_path;

    auto* sim = app.add_subcommand("simulate", "run a transport scenario");
    sim->add_option("--config", config_path, "configuration file")->required();
    sim->add_option("--out", out_dir, "output directory (overrides config)");
    sim->add_option("--resume", resume_path, "field snapshot to resume from");

    auto* lemma = app.add_subcommand("verify-lemma",
                                     "static scans of the velocity decomposition");
    lemma->add_option("--config", config_path, "configuration file")->required();
    lemma->add_option("--out", out_dir, "output directory (overrides config)");

    EnvelopeParams ep;
    double t_max = 5.0, tol = 1e-8, p_cut = 10.0;
    int t_count = 51;
    std::string env_out = "envelopes.csv";
    auto* env = app.add_subcommand("envelopes", "tabulate the growth envelopes");
    env->add_option("--A", ep.A, "sup norm of the initial vorticity");
    env->add_option("--B", ep.B, "sup norm of the initial vorticity gradient");
    env->add_option("--C-upper", ep.C_upper, "upper-envelope constant");
    env->add_option("--c-lower", ep.c_lower, "lower-envelope constant");
    env->add_option("--epsilon", ep.epsilon, "initial-data scale");
    env->add_option("--C-gap", ep.C_gap, "gap-bound additive constant");
    env->add_option("--p-cut", p_cut, "cutoff exponent of the gap bound");
    env->add_option("--t-max", t_max, "end of the time grid");
    env->add_option("--t-count", t_count, "number of grid points");
    env->add_option("--tol", tol, "comparison-ODE tolerance");
    env->add_option("--out", env_out, "output CSV path");

    std::string snap_path, fmt = "csv", exp_out = "field.csv";
    auto* exp = app.add_subcommand("export", "re-emit a field snapshot");
    exp->add_option("--snapshot", snap_path, "snapshot file")->required();
    exp->add_option("--format", fmt, "csv or snapshot");
    exp->add_option("--out", exp_out, "output path");
    exp->add_option("--config", config_path, "config supplying the grid for bare snapshots");

    unsigned seed = 12345;
    auto* val = app.add_subcommand("validate-kernels", "run the kernel/oracle battery");
    val->add_option("--seed", seed, "probe sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(parse_config(config_path), out_dir, resume_path);
        if (lemma->parsed())
            return cmd_verify_lemma(parse_config(config_path), out_dir);
        if (env->parsed())
            return cmd_envelopes(ep, t_max, t_count, tol, p_cut, env_out);
        if (exp->parsed()) {
            std::optional<GridSpec> hint;
            if (!config_path.empty()) hint = parse_config(config_path).grid;
            return cmd_export(snap_path, fmt, exp_out, hint);
        }
        if (val->parsed()) {
            const auto checks = kernel_battery(seed);
            std::cout << battery_text(checks);
            return battery_all_pass(checks) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
