// Command line front end: single simulations, the three experiment sweeps,
// and report generation from result tables.

#include "reskit/chain.hpp"
#include "reskit/errors.hpp"
#include "reskit/plan.hpp"
#include "reskit/signals.hpp"
#include "reskit/simulate.hpp"
#include "reskit/trajectory.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string plan_path;
    std::string out_dir = ".";
    uint64_t seed = 0;
    bool seed_given = false;
    std::string dump_plan;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--plan", args.plan_path, "Plan JSON file (built-in defaults when omitted)");
    cmd->add_option("--out-dir", args.out_dir, "Directory for result files");
    cmd->add_option("--seed", args.seed, "Override the plan seed")
        ->each([&](const std::string&) { args.seed_given = true; });
    cmd->add_option("--dump-plan", args.dump_plan, "Write the effective plan JSON and exit");
}

reskit::ExperimentPlan resolve_plan(const CommonArgs& args, reskit::PlanTask expected,
                                    bool enforce_task) {
    reskit::ExperimentPlan plan;
    if (!args.plan_path.empty()) {
        plan = reskit::load_plan(args.plan_path);
        if (enforce_task && plan.task != expected) {
            throw reskit::ConfigError("plan file declares a different task than the subcommand");
        }
    } else {
        switch (expected) {
            case reskit::PlanTask::NarmaSweep: plan = reskit::default_narma_plan(); break;
            case reskit::PlanTask::PayloadSweep: plan = reskit::default_payload_plan(); break;
            case reskit::PlanTask::MultiTask: plan = reskit::default_multitask_plan(); break;
        }
    }
    if (args.seed_given) plan.seed = args.seed;
    return plan;
}

int execute_plan(const reskit::ExperimentPlan& plan, const CommonArgs& args) {
    if (!args.dump_plan.empty()) {
        std::ofstream out(args.dump_plan, std::ios::binary);
        if (!out) throw reskit::ConfigError("cannot write " + args.dump_plan);
        out << reskit::plan_to_json(plan);
        std::cout << "wrote " << args.dump_plan << "\n";
        return 0;
    }

    fs::create_directories(args.out_dir);
    const reskit::ResultTable table = reskit::run_plan(plan);

    std::string name;
    switch (plan.task) {
        case reskit::PlanTask::NarmaSweep: name = "narma_results.csv"; break;
        case reskit::PlanTask::PayloadSweep: name = "payload_results.csv"; break;
        case reskit::PlanTask::MultiTask: name = "multitask_results.csv"; break;
    }
    const fs::path out_path = fs::path(args.out_dir) / name;
    reskit::export_csv(table, out_path);
    std::cout << "wrote " << out_path.string() << " (" << table.n_rows() << " rows)\n";

    const auto failures = table.failures();
    if (!failures.empty()) {
        std::cerr << failures.size() << " grid point(s) failed:\n";
        for (const auto& f : failures) std::cerr << "  " << f << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multistable-chain reservoir computing toolkit"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Run one simulation and export the trajectory");
    CommonArgs sim_args;
    std::vector<std::string> sim_modules = {"000", "000", "000", "000", "000"};
    std::string sim_kind = "triple_harmonic";
    double sim_amplitude = 0.005;
    double sim_frequency = 4.0;
    double sim_duration = 20.0;
    double sim_payload_g = 0.0;
    std::string sim_out = "trajectory.csv";
    add_common(sim_cmd, sim_args);
    sim_cmd->add_option("--modules", sim_modules, "Module state words, e.g. 000 010 111");
    sim_cmd->add_option("--kind", sim_kind, "triple_harmonic | single_harmonic | pwm3");
    sim_cmd->add_option("--amplitude", sim_amplitude, "Input amplitude (m, or N for pwm3)");
    sim_cmd->add_option("--frequency", sim_frequency, "Harmonic frequency, Hz");
    sim_cmd->add_option("--duration", sim_duration, "Simulated seconds");
    sim_cmd->add_option("--payload-g", sim_payload_g, "Payload mass, grams");
    sim_cmd->add_option("--out", sim_out, "Trajectory CSV filename");

    // sweeps
    auto* narma_cmd = app.add_subcommand("narma", "Emulation sweep over configurations and amplitudes");
    CommonArgs narma_args;
    add_common(narma_cmd, narma_args);

    auto* payload_cmd = app.add_subcommand("payload", "Payload weight estimation sweep");
    CommonArgs payload_args;
    add_common(payload_cmd, payload_args);

    auto* multi_cmd = app.add_subcommand("multitask", "Actuated multi-task runs");
    CommonArgs multi_args;
    add_common(multi_cmd, multi_args);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run whatever task the plan file declares");
    CommonArgs sweep_args;
    add_common(sweep_cmd, sweep_args);

    // report
    auto* report_cmd = app.add_subcommand("report", "Summaries and optimal-configuration matrix");
    std::string report_results;
    std::string report_baseline = "C5";
    std::string report_out_dir = ".";
    report_cmd->add_option("--results", report_results, "Emulation results CSV")->required();
    report_cmd->add_option("--baseline", report_baseline, "Baseline configuration name");
    report_cmd->add_option("--out-dir", report_out_dir, "Directory for report files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) {
            reskit::ExperimentPlan plan = resolve_plan(sim_args, reskit::PlanTask::NarmaSweep, false);
            reskit::ChainConfig config = plan.chain;
            config.modules.clear();
            for (const auto& word : sim_modules) {
                config.modules.push_back(reskit::ModuleState::parse(word));
            }
            config.payload_mass_kg = sim_payload_g / 1000.0;

            reskit::SignalSpec spec;
            if (sim_kind == "triple_harmonic") {
                spec.kind = reskit::SignalKind::TripleHarmonic;
            } else if (sim_kind == "single_harmonic") {
                spec.kind = reskit::SignalKind::SingleHarmonic;
                spec.frequencies_hz = {sim_frequency};
            } else if (sim_kind == "pwm3") {
                spec.kind = reskit::SignalKind::Pwm3;
            } else {
                throw reskit::ConfigError("unknown signal kind '" + sim_kind + "'");
            }
            spec.amplitude = sim_amplitude;
            spec.duration_s = sim_duration;
            spec.sample_rate = plan.input_sample_rate;

            const reskit::ChainModel model = reskit::build_chain(config);
            const reskit::SimOutcome outcome =
                reskit::simulate(model, reskit::make_signal(spec), sim_duration);

            fs::create_directories(sim_args.out_dir);
            const fs::path out_path = fs::path(sim_args.out_dir) / sim_out;
            reskit::export_trajectory(outcome.trajectory, out_path);
            std::cout << "wrote " << out_path.string() << " (" << outcome.trajectory.n_nodes()
                      << " nodes x " << outcome.trajectory.n_samples() << " samples)\n"
                      << "final energy " << outcome.final_energy << " J, max displacement "
                      << outcome.max_displacement << " m\n";
            return 0;
        }
        if (narma_cmd->parsed()) {
            return execute_plan(resolve_plan(narma_args, reskit::PlanTask::NarmaSweep, true),
                                narma_args);
        }
        if (payload_cmd->parsed()) {
            return execute_plan(resolve_plan(payload_args, reskit::PlanTask::PayloadSweep, true),
                                payload_args);
        }
        if (multi_cmd->parsed()) {
            return execute_plan(resolve_plan(multi_args, reskit::PlanTask::MultiTask, true),
                                multi_args);
        }
        if (sweep_cmd->parsed()) {
            if (sweep_args.plan_path.empty()) {
                throw reskit::ConfigError("sweep requires --plan");
            }
            reskit::ExperimentPlan plan = reskit::load_plan(sweep_args.plan_path);
            if (sweep_args.seed_given) plan.seed = sweep_args.seed;
            return execute_plan(plan, sweep_args);
        }
        if (report_cmd->parsed()) {
            const reskit::ResultTable table = reskit::import_narma_csv(report_results);
            fs::create_directories(report_out_dir);

            const auto summary = reskit::summarize_narma(table);
            const fs::path summary_path = fs::path(report_out_dir) / "summary.csv";
            reskit::export_csv(summary, summary_path);

            const auto matrix = reskit::optimal_config_matrix(table, report_baseline);
            const fs::path matrix_path = fs::path(report_out_dir) / "optimal_matrix.csv";
            reskit::export_csv(matrix, matrix_path);

            std::cout << "wrote " << summary_path.string() << " and " << matrix_path.string()
                      << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
