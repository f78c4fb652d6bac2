#include "reskit/errors.hpp"
#include "reskit/metrics.hpp"
#include "reskit/perception.hpp"
#include "reskit/plan.hpp"
#include "reskit/simulate.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace reskit {

namespace {

constexpr double kPerturbationM = 1e-4;

uint64_t splitmix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class SmallRng {
public:
    explicit SmallRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ = splitmix(state_);
        return state_;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }

private:
    uint64_t state_;
};

uint64_t mix_seed(std::initializer_list<uint64_t> parts) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (uint64_t p : parts) h = splitmix(h ^ (p + 0x9e3779b97f4a7c15ULL));
    return h;
}

Eigen::VectorXd perturbation(int n, uint64_t seed) {
    SmallRng rng(seed);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out(i) = rng.uniform(-kPerturbationM, kPerturbationM);
    return out;
}

ChainConfig configure(const ExperimentPlan& plan, const NamedConfig& named) {
    ChainConfig config = plan.chain;
    config.modules = named.modules;
    return config;
}

SimOutcome run_once(const ChainModel& model, const SampledSignal& input, double duration_s,
                    uint64_t seed) {
    SimOptions options;
    options.initial_displacements = perturbation(model.n_nodes(), seed);
    return simulate(model, input, duration_s, options);
}

void run_narma_sweep(const ExperimentPlan& plan, ResultTable& table) {
    for (size_t ci = 0; ci < plan.configurations.size(); ++ci) {
        const ChainConfig chain_config = configure(plan, plan.configurations[ci]);
        const ChainModel model = build_chain(chain_config);
        for (size_t ai = 0; ai < plan.amplitudes.size(); ++ai) {
            const double amplitude = plan.amplitudes[ai];
            const SampledSignal input =
                triple_harmonic(amplitude, plan.duration_s, plan.input_sample_rate);
            for (size_t oi = 0; oi < plan.narma_orders.size(); ++oi) {
                for (int rep = 0; rep < plan.repetitions; ++rep) {
                    NarmaRow row;
                    row.config = plan.configurations[ci].name;
                    row.amplitude = amplitude;
                    row.order = plan.narma_orders[oi];
                    row.repetition = rep;
                    try {
                        const uint64_t cell_seed = mix_seed({plan.seed, ci, ai, oi,
                                                             static_cast<uint64_t>(rep), 0});
                        const SimOutcome sim = run_once(model, input, plan.duration_s, cell_seed);

                        NarmaParams params = plan.narma;
                        params.order = row.order;
                        const Eigen::VectorXd input_at_fs =
                            input.resample(0, sim.trajectory.times);
                        const Eigen::VectorXd target = narma_target(input_at_fs, params);

                        const TrainTestSplit windows = split(sim.trajectory, target, plan.split);
                        const ReadoutWeights weights =
                            train_readout(windows.train_states, windows.train_target, plan.ridge,
                                          "narma-" + std::to_string(row.order));
                        const Eigen::VectorXd predicted = predict(weights, windows.test_states);

                        row.nmse = nmse(windows.test_target, predicted);
                        row.mse = mse(windows.test_target, predicted);
                        const PsiReport psi_report =
                            psi(windows.test_target, predicted, chain_config.sample_rate);
                        row.psi = psi_report.psi;
                        for (size_t p = 0; p < row.occupancy.size(); ++p) {
                            row.occupancy[p] = psi_report.occupancy[p];
                        }

                        const ReadoutWeights baseline = baseline_input_regression(
                            input, windows.train_states.times, windows.train_target, plan.ridge);
                        const Eigen::VectorXd baseline_pred = predict(
                            baseline, signal_as_states(input, windows.test_states.times));
                        row.baseline_nmse = nmse(windows.test_target, baseline_pred);

                        const long post_washout = plan.split.train + plan.split.test;
                        const CorrelationReport corr = correlation_matrix(
                            sim.trajectory.slice(plan.split.washout, post_washout));
                        row.avg_ci = corr.avg_ci;
                        row.avg_ci_norm = corr.avg_ci_normalized;
                        row.ok = true;
                    } catch (const Error& e) {
                        row.ok = false;
                        row.error = e.what();
                    }
                    table.narma.push_back(std::move(row));
                }
            }
        }
    }
}

void run_payload_sweep(const ExperimentPlan& plan, ResultTable& table) {
    for (const auto& set : plan.training_mass_sets) {
        table.train_set_labels.push_back("k" + std::to_string(set.size()));
    }

    const double run_duration = plan.duration_s;
    EstimatorOptions est_options;
    est_options.washout_s = plan.estimator_washout_s;
    est_options.window_s = plan.window_s;
    est_options.ridge = plan.ridge;

    for (size_t ci = 0; ci < plan.configurations.size(); ++ci) {
        for (size_t fi = 0; fi < plan.frequencies_hz.size(); ++fi) {
            const double freq = plan.frequencies_hz[fi];
            const SampledSignal input = single_harmonic(plan.amplitudes.front(), freq,
                                                        run_duration, plan.input_sample_rate);
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                std::vector<LabeledRun> train_runs;
                std::vector<LabeledRun> test_runs;
                std::string cell_error;
                try {
                    for (size_t mi = 0; mi < plan.payload_masses_g.size(); ++mi) {
                        ChainConfig config = configure(plan, plan.configurations[ci]);
                        config.payload_mass_kg = plan.payload_masses_g[mi] / 1000.0;
                        const ChainModel model = build_chain(config);

                        LabeledRun train_run;
                        train_run.payload_mass_g = plan.payload_masses_g[mi];
                        train_run.repetition = rep;
                        train_run.trajectory =
                            run_once(model, input, run_duration,
                                     mix_seed({plan.seed, ci, fi, mi,
                                               static_cast<uint64_t>(rep), 1}))
                                .trajectory;
                        train_runs.push_back(std::move(train_run));

                        LabeledRun test_run;
                        test_run.payload_mass_g = plan.payload_masses_g[mi];
                        test_run.repetition = rep;
                        test_run.trajectory =
                            run_once(model, input, run_duration,
                                     mix_seed({plan.seed, ci, fi, mi,
                                               static_cast<uint64_t>(rep), 2}))
                                .trajectory;
                        test_runs.push_back(std::move(test_run));
                    }
                } catch (const Error& e) {
                    cell_error = e.what();
                }

                std::vector<EstimatorBundle> bundles;
                if (cell_error.empty()) {
                    try {
                        for (const auto& set : plan.training_mass_sets) {
                            bundles.push_back(train_weight_estimator(train_runs, set,
                                                                     plan.segment_s, est_options));
                        }
                    } catch (const Error& e) {
                        cell_error = e.what();
                    }
                }

                for (size_t mi = 0; mi < plan.payload_masses_g.size(); ++mi) {
                    PayloadRow row;
                    row.config = plan.configurations[ci].name;
                    row.frequency_hz = freq;
                    row.mass_g = plan.payload_masses_g[mi];
                    row.repetition = rep;
                    if (!cell_error.empty()) {
                        row.error = cell_error;
                        table.payload.push_back(std::move(row));
                        continue;
                    }
                    try {
                        for (const auto& bundle : bundles) {
                            const double estimate = estimate_weight(bundle, test_runs[mi]);
                            row.estimates_g.push_back(estimate);
                            row.abs_errors_g.push_back(std::abs(estimate - row.mass_g));
                        }
                        const double fs = test_runs[mi].trajectory.sample_rate();
                        const long start = std::lround(plan.estimator_washout_s * fs);
                        const long count = std::lround(plan.window_s * fs);
                        row.avg_ci_norm =
                            correlation_matrix(test_runs[mi].trajectory.slice(start, count))
                                .avg_ci_normalized;
                        row.ok = true;
                    } catch (const Error& e) {
                        row.ok = false;
                        row.error = e.what();
                    }
                    table.payload.push_back(std::move(row));
                }
            }
        }
    }
}

struct ItemScenario {
    std::string label;
    double mass_g = 0.0;
    std::optional<Orientation> orientation;
};

std::vector<ItemScenario> item_scenarios(const ExperimentPlan& plan) {
    std::vector<ItemScenario> scenarios;
    for (size_t i = 0; i < plan.item_masses_g.size(); ++i) {
        const std::string base = "item_" + std::to_string(i + 1);
        if (static_cast<int>(i + 1) == plan.hammer_item) {
            scenarios.push_back({base + "L", plan.item_masses_g[i], Orientation::Left});
            scenarios.push_back({base + "F", plan.item_masses_g[i], Orientation::Front});
            scenarios.push_back({base + "R", plan.item_masses_g[i], Orientation::Right});
        } else {
            scenarios.push_back({base, plan.item_masses_g[i], std::nullopt});
        }
    }
    return scenarios;
}

void run_multitask(const ExperimentPlan& plan, ResultTable& table) {
    const auto scenarios = item_scenarios(plan);

    EstimatorOptions est_options;
    est_options.washout_s = plan.estimator_washout_s;
    est_options.window_s = plan.window_s;
    est_options.ridge = plan.ridge;

    for (size_t ci = 0; ci < plan.configurations.size(); ++ci) {
        for (size_t pi = 0; pi < plan.pwm_patterns.size(); ++pi) {
            const PwmPattern& pattern = plan.pwm_patterns[pi];
            const SampledSignal input = pwm3(pattern.on_s, pattern.off_s, plan.pwm_amplitude,
                                             plan.duration_s, plan.input_sample_rate);
            for (int rep = 0; rep < plan.repetitions; ++rep) {
                std::vector<LabeledRun> train_runs;
                std::vector<LabeledRun> test_runs;
                std::string cell_error;
                EstimatorBundle weight_bundle;
                ReadoutWeights orientation_weights;
                try {
                    for (size_t si = 0; si < scenarios.size(); ++si) {
                        ChainConfig config = configure(plan, plan.configurations[ci]);
                        config.payload_mass_kg = scenarios[si].mass_g / 1000.0;
                        if (scenarios[si].orientation) {
                            config.payload_eccentricity_m =
                                plan.eccentricity_scale_m *
                                static_cast<double>(static_cast<int>(*scenarios[si].orientation));
                        }
                        const ChainModel model = build_chain(config);

                        LabeledRun train_run;
                        train_run.payload_mass_g = scenarios[si].mass_g;
                        train_run.orientation = scenarios[si].orientation;
                        train_run.input = input;
                        train_run.repetition = rep;
                        train_run.trajectory =
                            run_once(model, input, plan.duration_s,
                                     mix_seed({plan.seed, ci, pi, si,
                                               static_cast<uint64_t>(rep), 1}))
                                .trajectory;
                        train_runs.push_back(std::move(train_run));

                        LabeledRun test_run = train_runs.back();
                        test_run.trajectory =
                            run_once(model, input, plan.duration_s,
                                     mix_seed({plan.seed, ci, pi, si,
                                               static_cast<uint64_t>(rep), 2}))
                                .trajectory;
                        test_runs.push_back(std::move(test_run));
                    }

                    // Weight readout over every scenario segment; the
                    // eccentric item contributes one segment per orientation.
                    std::vector<const LabeledRun*> ordered;
                    std::vector<double> targets;
                    for (size_t si = 0; si < scenarios.size(); ++si) {
                        ordered.push_back(&train_runs[si]);
                        targets.push_back(scenarios[si].mass_g);
                    }
                    weight_bundle = train_weight_estimator_sequence(ordered, targets,
                                                                    plan.segment_s, est_options);

                    // Orientation readout over the eccentric item's runs only.
                    std::vector<const LabeledRun*> oriented;
                    std::vector<double> labels;
                    for (size_t si = 0; si < scenarios.size(); ++si) {
                        if (train_runs[si].orientation) {
                            oriented.push_back(&train_runs[si]);
                            labels.push_back(static_cast<double>(
                                static_cast<int>(*train_runs[si].orientation)));
                        }
                    }
                    orientation_weights =
                        train_weight_estimator_sequence(oriented, labels, plan.segment_s,
                                                        est_options)
                            .weights;
                } catch (const Error& e) {
                    cell_error = e.what();
                }

                for (size_t si = 0; si < scenarios.size(); ++si) {
                    MultiTaskRow row;
                    row.config = plan.configurations[ci].name;
                    row.pattern = pattern.name;
                    row.item = scenarios[si].label;
                    row.repetition = rep;
                    row.true_mass_g = scenarios[si].mass_g;
                    if (scenarios[si].orientation) {
                        row.has_orientation_true = true;
                        row.orientation_true = static_cast<int>(*scenarios[si].orientation);
                    }
                    if (!cell_error.empty()) {
                        row.error = cell_error;
                        table.multitask.push_back(std::move(row));
                        continue;
                    }
                    try {
                        const Classification result =
                            classify_payload(weight_bundle, orientation_weights, test_runs[si]);
                        row.estimate_g = result.estimate_g;
                        row.in_band = result.orientation.has_value();
                        if (result.orientation) {
                            row.has_orientation_pred = true;
                            row.orientation_pred = static_cast<int>(*result.orientation);
                        }
                        const InputReconstruction recon = reconstruct_inputs(test_runs[si]);
                        row.reconstruction_mse = recon.mse;
                        const double fs = test_runs[si].trajectory.sample_rate();
                        const long start = std::lround(plan.estimator_washout_s * fs);
                        const long count = std::lround(plan.window_s * fs);
                        row.avg_ci_norm =
                            correlation_matrix(test_runs[si].trajectory.slice(start, count))
                                .avg_ci_normalized;
                        row.ok = true;
                    } catch (const Error& e) {
                        row.ok = false;
                        row.error = e.what();
                    }
                    table.multitask.push_back(std::move(row));
                }
            }
        }
    }
}

} // namespace

ResultTable run_plan(const ExperimentPlan& plan) {
    plan.validate();
    ResultTable table;
    table.task = plan.task;
    switch (plan.task) {
        case PlanTask::NarmaSweep: run_narma_sweep(plan, table); break;
        case PlanTask::PayloadSweep: run_payload_sweep(plan, table); break;
        case PlanTask::MultiTask: run_multitask(plan, table); break;
    }
    return table;
}

} // namespace reskit
