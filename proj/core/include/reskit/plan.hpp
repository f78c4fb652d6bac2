#pragma once

#include "reskit/chain.hpp"
#include "reskit/narma.hpp"
#include "reskit/readout.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace reskit {

enum class PlanTask { NarmaSweep, PayloadSweep, MultiTask };

struct NamedConfig {
    std::string name;
    std::vector<ModuleState> modules;
};

struct PwmPattern {
    std::string name;
    double on_s = 0.1;
    double off_s = 0.2;
};

/// Full description of an experiment grid. A plan plus its seed determines
/// every simulated sample, so identical plans produce byte-identical result
/// tables.
struct ExperimentPlan {
    PlanTask task = PlanTask::NarmaSweep;
    uint64_t seed = 1;
    int repetitions = 1;
    double duration_s = 20.0;
    double ridge = 0.0;
    SplitSpec split;
    ChainConfig chain; // base parameters; each configuration swaps the modules
    std::vector<NamedConfig> configurations;
    double input_sample_rate = 3000.0;

    // Emulation sweep
    std::vector<double> amplitudes;
    std::vector<int> narma_orders;
    NarmaParams narma;

    // Payload sweep
    std::vector<double> frequencies_hz;
    std::vector<double> payload_masses_g;
    std::vector<std::vector<double>> training_mass_sets;
    double segment_s = 5.0;
    double estimator_washout_s = 10.0;
    double window_s = 5.0;

    // Multi-task (actuated) runs
    std::vector<double> item_masses_g;
    int hammer_item = 4; // 1-based index into item_masses_g
    double eccentricity_scale_m = 0.02;
    std::vector<PwmPattern> pwm_patterns;
    double pwm_amplitude = 0.05; // N per actuated segment

    void validate() const;
};

struct NarmaRow {
    std::string config;
    double amplitude = 0.0;
    int order = 0;
    int repetition = 0;
    bool ok = false;
    std::string error;
    double nmse = 0.0;
    double baseline_nmse = 0.0;
    double mse = 0.0;
    double psi = 0.0;
    std::array<double, 8> occupancy{};
    double avg_ci = 0.0;
    double avg_ci_norm = 0.0;
};

struct PayloadRow {
    std::string config;
    double frequency_hz = 0.0;
    double mass_g = 0.0;
    int repetition = 0;
    bool ok = false;
    std::string error;
    double avg_ci_norm = 0.0; // of the evaluated run's window
    std::vector<double> estimates_g;  // one per training set
    std::vector<double> abs_errors_g;
};

struct MultiTaskRow {
    std::string config;
    std::string pattern;
    std::string item;
    int repetition = 0;
    bool ok = false;
    std::string error;
    double true_mass_g = 0.0;
    double estimate_g = 0.0;
    bool in_band = false;
    bool has_orientation_true = false;
    int orientation_true = 0;
    bool has_orientation_pred = false;
    int orientation_pred = 0;
    std::array<double, 3> reconstruction_mse{};
    double avg_ci_norm = 0.0; // of the evaluated run's window
};

struct ResultTable {
    PlanTask task = PlanTask::NarmaSweep;
    std::vector<std::string> train_set_labels; // payload estimate column suffixes
    std::vector<NarmaRow> narma;
    std::vector<PayloadRow> payload;
    std::vector<MultiTaskRow> multitask;

    size_t n_rows() const;
    bool all_ok() const;
    std::vector<std::string> failures() const;
};

/// Execute the full grid deterministically. Per-repetition variation comes
/// from seeded initial-condition perturbations; a failed grid point is
/// marked in its row and never aborts the sweep.
ResultTable run_plan(const ExperimentPlan& plan);

/// Per-(config, amplitude, order) repetition averages of an emulation table.
struct NarmaSummaryRow {
    std::string config;
    double amplitude = 0.0;
    int order = 0;
    int n_ok = 0;
    double mean_nmse = 0.0;
    double mean_psi = 0.0;
    double mean_baseline_nmse = 0.0;
};

std::vector<NarmaSummaryRow> summarize_narma(const ResultTable& table);

/// Best configuration per (amplitude, order) cell with the percentage NMSE
/// reduction relative to the named baseline configuration.
struct OptimalCell {
    double amplitude = 0.0;
    int order = 0;
    std::string best_config;
    double best_nmse = 0.0;
    double baseline_nmse = 0.0;
    double reduction_pct = 0.0;
};

std::vector<OptimalCell> optimal_config_matrix(const ResultTable& table,
                                               const std::string& baseline_config);

/// Byte-stable CSV exports: re-exporting identical data is byte-identical.
void export_csv(const ResultTable& table, const std::filesystem::path& path);
void export_csv(const std::vector<OptimalCell>& matrix, const std::filesystem::path& path);
void export_csv(const std::vector<NarmaSummaryRow>& summary, const std::filesystem::path& path);

/// Parse an emulation-table CSV produced by export_csv.
ResultTable import_narma_csv(const std::filesystem::path& path);

ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json(const ExperimentPlan& plan);

/// Built-in plans mirroring the three experiment protocols.
ExperimentPlan default_narma_plan();
ExperimentPlan default_payload_plan();
ExperimentPlan default_multitask_plan();

} // namespace reskit
