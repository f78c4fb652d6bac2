#include "reskit/plan.hpp"

#include "reskit/csv.hpp"
#include "reskit/errors.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace reskit {

namespace {

std::string sanitize(const std::string& text) {
    std::string out = text;
    std::replace(out.begin(), out.end(), ',', ';');
    std::replace(out.begin(), out.end(), '\n', ' ');
    return out;
}

std::string task_name(PlanTask task) {
    switch (task) {
        case PlanTask::NarmaSweep: return "narma";
        case PlanTask::PayloadSweep: return "payload";
        case PlanTask::MultiTask: return "multitask";
    }
    return "unknown";
}

PlanTask task_from_name(const std::string& name) {
    if (name == "narma") return PlanTask::NarmaSweep;
    if (name == "payload") return PlanTask::PayloadSweep;
    if (name == "multitask") return PlanTask::MultiTask;
    throw ConfigError("unknown task '" + name + "' (expected narma, payload or multitask)");
}

// Default emulation ladder: module count grows 1..5 with mixed soft/stiff
// states; C5 is the all-compliant five-module chain. Stiffness interfaces
// between neighboring modules enrich the dynamics noticeably.
std::vector<NamedConfig> default_configuration_set() {
    auto modules = [](std::initializer_list<const char*> words) {
        std::vector<ModuleState> out;
        for (const char* w : words) out.push_back(ModuleState::parse(w));
        return out;
    };
    return {
        {"C1", modules({"000"})},
        {"C2", modules({"000", "111"})},
        {"C3", modules({"000", "111", "000"})},
        {"C4", modules({"111", "000", "111", "000"})},
        {"C5", modules({"000", "000", "000", "000", "000"})},
    };
}

} // namespace

void ExperimentPlan::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (configurations.empty()) throw ConfigError("plan needs at least one configuration");
    for (const auto& cfg : configurations) {
        if (cfg.modules.empty()) throw ConfigError("configuration '" + cfg.name + "' has no modules");
        if (cfg.name.empty()) throw ConfigError("configurations need names");
    }
    if (!(duration_s > 0.0)) throw ConfigError("duration_s must be > 0");
    switch (task) {
        case PlanTask::NarmaSweep:
            if (amplitudes.empty()) throw ConfigError("emulation sweep needs amplitudes");
            if (narma_orders.empty()) throw ConfigError("emulation sweep needs narma_orders");
            break;
        case PlanTask::PayloadSweep:
            if (frequencies_hz.empty()) throw ConfigError("payload sweep needs frequencies_hz");
            if (amplitudes.empty()) throw ConfigError("payload sweep needs an input amplitude");
            if (payload_masses_g.empty()) throw ConfigError("payload sweep needs payload masses");
            if (training_mass_sets.empty()) throw ConfigError("payload sweep needs training mass sets");
            break;
        case PlanTask::MultiTask:
            if (pwm_patterns.empty()) throw ConfigError("multitask needs pwm_patterns");
            if (item_masses_g.empty()) throw ConfigError("multitask needs item masses");
            if (hammer_item < 1 || hammer_item > static_cast<int>(item_masses_g.size())) {
                throw ConfigError("hammer_item out of range");
            }
            break;
    }
}

size_t ResultTable::n_rows() const {
    switch (task) {
        case PlanTask::NarmaSweep: return narma.size();
        case PlanTask::PayloadSweep: return payload.size();
        case PlanTask::MultiTask: return multitask.size();
    }
    return 0;
}

bool ResultTable::all_ok() const { return failures().empty(); }

std::vector<std::string> ResultTable::failures() const {
    std::vector<std::string> out;
    for (const auto& row : narma) {
        if (!row.ok) {
            out.push_back(row.config + " A=" + csv::format_double(row.amplitude) + " N=" +
                          std::to_string(row.order) + " rep=" + std::to_string(row.repetition) +
                          ": " + row.error);
        }
    }
    for (const auto& row : payload) {
        if (!row.ok) {
            out.push_back(row.config + " f=" + csv::format_double(row.frequency_hz) + " m=" +
                          csv::format_double(row.mass_g) + " rep=" + std::to_string(row.repetition) +
                          ": " + row.error);
        }
    }
    for (const auto& row : multitask) {
        if (!row.ok) {
            out.push_back(row.config + " " + row.pattern + " " + row.item + " rep=" +
                          std::to_string(row.repetition) + ": " + row.error);
        }
    }
    return out;
}

std::vector<NarmaSummaryRow> summarize_narma(const ResultTable& table) {
    if (table.task != PlanTask::NarmaSweep) {
        throw ConfigError("summary requires an emulation result table");
    }
    // Preserve first-appearance order of (config, amplitude, order) cells.
    std::vector<NarmaSummaryRow> rows;
    std::map<std::tuple<std::string, double, int>, size_t> index;
    for (const auto& row : table.narma) {
        const auto key = std::make_tuple(row.config, row.amplitude, row.order);
        auto it = index.find(key);
        if (it == index.end()) {
            NarmaSummaryRow s;
            s.config = row.config;
            s.amplitude = row.amplitude;
            s.order = row.order;
            index.emplace(key, rows.size());
            rows.push_back(s);
            it = index.find(key);
        }
        if (row.ok) {
            NarmaSummaryRow& s = rows[it->second];
            s.mean_nmse += row.nmse;
            s.mean_psi += row.psi;
            s.mean_baseline_nmse += row.baseline_nmse;
            s.n_ok += 1;
        }
    }
    for (auto& s : rows) {
        if (s.n_ok > 0) {
            s.mean_nmse /= s.n_ok;
            s.mean_psi /= s.n_ok;
            s.mean_baseline_nmse /= s.n_ok;
        }
    }
    return rows;
}

std::vector<OptimalCell> optimal_config_matrix(const ResultTable& table,
                                               const std::string& baseline_config) {
    const auto summary = summarize_narma(table);

    // Cells in first-appearance order of (amplitude, order).
    std::vector<std::pair<double, int>> cells;
    for (const auto& s : summary) {
        const auto cell = std::make_pair(s.amplitude, s.order);
        if (std::find(cells.begin(), cells.end(), cell) == cells.end()) cells.push_back(cell);
    }

    std::vector<OptimalCell> matrix;
    for (const auto& [amplitude, order] : cells) {
        OptimalCell out;
        out.amplitude = amplitude;
        out.order = order;
        bool have_best = false;
        bool have_base = false;
        for (const auto& s : summary) {
            if (s.amplitude != amplitude || s.order != order || s.n_ok == 0) continue;
            if (!have_best || s.mean_nmse < out.best_nmse) {
                out.best_nmse = s.mean_nmse;
                out.best_config = s.config;
                have_best = true;
            }
            if (s.config == baseline_config) {
                out.baseline_nmse = s.mean_nmse;
                have_base = true;
            }
        }
        if (!have_base) {
            throw ConfigError("baseline configuration '" + baseline_config +
                              "' has no successful rows for amplitude " +
                              csv::format_double(amplitude) + ", order " + std::to_string(order));
        }
        out.reduction_pct = 100.0 * (out.baseline_nmse - out.best_nmse) / out.baseline_nmse;
        matrix.push_back(out);
    }
    return matrix;
}

namespace {

void export_narma_csv(const ResultTable& table, std::ostream& out) {
    std::vector<std::string> header = {"config", "amplitude", "order", "repetition", "status",
                                       "nmse",   "baseline_nmse", "mse", "psi"};
    for (int i = 1; i <= 8; ++i) header.push_back("occ_" + std::to_string(i));
    header.push_back("avg_ci");
    header.push_back("avg_ci_norm");
    out << csv::join_line(header);

    for (const auto& row : table.narma) {
        std::vector<std::string> fields;
        fields.push_back(row.config);
        fields.push_back(csv::format_double(row.amplitude));
        fields.push_back(csv::format_int(row.order));
        fields.push_back(csv::format_int(row.repetition));
        fields.push_back(row.ok ? "ok" : "failed: " + sanitize(row.error));
        if (row.ok) {
            fields.push_back(csv::format_double(row.nmse));
            fields.push_back(csv::format_double(row.baseline_nmse));
            fields.push_back(csv::format_double(row.mse));
            fields.push_back(csv::format_double(row.psi));
            for (double occ : row.occupancy) fields.push_back(csv::format_double(occ));
            fields.push_back(csv::format_double(row.avg_ci));
            fields.push_back(csv::format_double(row.avg_ci_norm));
        } else {
            fields.insert(fields.end(), 14, "");
        }
        out << csv::join_line(fields);
    }
}

void export_payload_csv(const ResultTable& table, std::ostream& out) {
    std::vector<std::string> header = {"config", "frequency_hz", "mass_g", "repetition",
                                       "status", "avg_ci_norm"};
    for (const auto& label : table.train_set_labels) {
        header.push_back("estimate_" + label + "_g");
        header.push_back("abs_error_" + label + "_g");
    }
    out << csv::join_line(header);

    for (const auto& row : table.payload) {
        std::vector<std::string> fields;
        fields.push_back(row.config);
        fields.push_back(csv::format_double(row.frequency_hz));
        fields.push_back(csv::format_double(row.mass_g));
        fields.push_back(csv::format_int(row.repetition));
        fields.push_back(row.ok ? "ok" : "failed: " + sanitize(row.error));
        fields.push_back(row.ok ? csv::format_double(row.avg_ci_norm) : "");
        for (size_t k = 0; k < table.train_set_labels.size(); ++k) {
            if (row.ok && k < row.estimates_g.size()) {
                fields.push_back(csv::format_double(row.estimates_g[k]));
                fields.push_back(csv::format_double(row.abs_errors_g[k]));
            } else {
                fields.push_back("");
                fields.push_back("");
            }
        }
        out << csv::join_line(fields);
    }
}

void export_multitask_csv(const ResultTable& table, std::ostream& out) {
    out << csv::join_line({"config", "pattern", "item", "repetition", "status", "true_mass_g",
                           "estimate_g", "in_band", "orientation_true", "orientation_pred",
                           "mse_ch1", "mse_ch2", "mse_ch3", "avg_ci_norm"});
    for (const auto& row : table.multitask) {
        std::vector<std::string> fields;
        fields.push_back(row.config);
        fields.push_back(row.pattern);
        fields.push_back(row.item);
        fields.push_back(csv::format_int(row.repetition));
        fields.push_back(row.ok ? "ok" : "failed: " + sanitize(row.error));
        if (row.ok) {
            fields.push_back(csv::format_double(row.true_mass_g));
            fields.push_back(csv::format_double(row.estimate_g));
            fields.push_back(row.in_band ? "1" : "0");
            fields.push_back(row.has_orientation_true ? csv::format_int(row.orientation_true) : "");
            fields.push_back(row.has_orientation_pred ? csv::format_int(row.orientation_pred) : "");
            for (double m : row.reconstruction_mse) fields.push_back(csv::format_double(m));
            fields.push_back(csv::format_double(row.avg_ci_norm));
        } else {
            fields.insert(fields.end(), 9, "");
        }
        out << csv::join_line(fields);
    }
}

} // namespace

void export_csv(const ResultTable& table, const std::filesystem::path& path) {
    std::ostringstream out;
    switch (table.task) {
        case PlanTask::NarmaSweep: export_narma_csv(table, out); break;
        case PlanTask::PayloadSweep: export_payload_csv(table, out); break;
        case PlanTask::MultiTask: export_multitask_csv(table, out); break;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << out.str();
}

void export_csv(const std::vector<OptimalCell>& matrix, const std::filesystem::path& path) {
    std::ostringstream out;
    out << csv::join_line(
        {"amplitude", "order", "best_config", "best_nmse", "baseline_nmse", "reduction_pct"});
    for (const auto& cell : matrix) {
        out << csv::join_line({csv::format_double(cell.amplitude), csv::format_int(cell.order),
                               cell.best_config, csv::format_double(cell.best_nmse),
                               csv::format_double(cell.baseline_nmse),
                               csv::format_double(cell.reduction_pct)});
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << out.str();
}

void export_csv(const std::vector<NarmaSummaryRow>& summary, const std::filesystem::path& path) {
    std::ostringstream out;
    out << csv::join_line(
        {"config", "amplitude", "order", "n_ok", "mean_nmse", "mean_psi", "mean_baseline_nmse"});
    for (const auto& s : summary) {
        out << csv::join_line({s.config, csv::format_double(s.amplitude), csv::format_int(s.order),
                               csv::format_int(s.n_ok), csv::format_double(s.mean_nmse),
                               csv::format_double(s.mean_psi),
                               csv::format_double(s.mean_baseline_nmse)});
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write " + path.string());
    file << out.str();
}

ResultTable import_narma_csv(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open " + path.string());
    std::string line;
    if (!std::getline(file, line)) throw ConfigError("empty results file " + path.string());
    const auto header = csv::split_line(line);
    if (header.size() != 19 || header[0] != "config" || header[5] != "nmse") {
        throw ConfigError("not an emulation results CSV: " + path.string());
    }

    ResultTable table;
    table.task = PlanTask::NarmaSweep;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() != header.size()) {
            throw ConfigError("bad row in " + path.string() + ": '" + line + "'");
        }
        NarmaRow row;
        row.config = fields[0];
        row.amplitude = csv::parse_double(fields[1]);
        row.order = static_cast<int>(csv::parse_int(fields[2]));
        row.repetition = static_cast<int>(csv::parse_int(fields[3]));
        row.ok = fields[4] == "ok";
        if (row.ok) {
            row.nmse = csv::parse_double(fields[5]);
            row.baseline_nmse = csv::parse_double(fields[6]);
            row.mse = csv::parse_double(fields[7]);
            row.psi = csv::parse_double(fields[8]);
            for (int i = 0; i < 8; ++i) {
                row.occupancy[static_cast<size_t>(i)] = csv::parse_double(fields[static_cast<size_t>(9 + i)]);
            }
            row.avg_ci = csv::parse_double(fields[17]);
            row.avg_ci_norm = csv::parse_double(fields[18]);
        } else {
            row.error = fields[4];
        }
        table.narma.push_back(std::move(row));
    }
    return table;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open plan " + path.string());
    detail::json doc;
    try {
        doc = detail::json::parse(file);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError("plan parse error in " + path.string() + ": " + e.what());
    }

    ExperimentPlan plan;
    switch (task_from_name(doc.value("task", "narma"))) {
        case PlanTask::NarmaSweep: plan = default_narma_plan(); break;
        case PlanTask::PayloadSweep: plan = default_payload_plan(); break;
        case PlanTask::MultiTask: plan = default_multitask_plan(); break;
    }

    plan.seed = doc.value("seed", plan.seed);
    plan.repetitions = doc.value("repetitions", plan.repetitions);
    plan.duration_s = doc.value("duration_s", plan.duration_s);
    plan.ridge = doc.value("ridge", plan.ridge);
    plan.input_sample_rate = doc.value("input_sample_rate", plan.input_sample_rate);
    if (doc.contains("split")) {
        const auto& s = doc.at("split");
        plan.split.washout = s.value("washout", plan.split.washout);
        plan.split.train = s.value("train", plan.split.train);
        plan.split.test = s.value("test", plan.split.test);
    }
    if (doc.contains("chain")) {
        plan.chain = detail::chain_config_from_json(doc.at("chain"), plan.chain);
    }
    if (doc.contains("configurations")) {
        plan.configurations.clear();
        for (const auto& entry : doc.at("configurations")) {
            NamedConfig cfg;
            cfg.name = entry.at("name").get<std::string>();
            for (const auto& word : entry.at("modules")) {
                cfg.modules.push_back(ModuleState::parse(word.get<std::string>()));
            }
            plan.configurations.push_back(std::move(cfg));
        }
    }
    if (doc.contains("amplitudes")) plan.amplitudes = doc.at("amplitudes").get<std::vector<double>>();
    if (doc.contains("narma_orders")) plan.narma_orders = doc.at("narma_orders").get<std::vector<int>>();
    if (doc.contains("narma")) {
        const auto& n = doc.at("narma");
        plan.narma.alpha = n.value("alpha", plan.narma.alpha);
        plan.narma.beta = n.value("beta", plan.narma.beta);
        plan.narma.gamma = n.value("gamma", plan.narma.gamma);
        plan.narma.delta = n.value("delta", plan.narma.delta);
        plan.narma.classic = n.value("classic", plan.narma.classic);
    }
    if (doc.contains("frequencies_hz")) {
        plan.frequencies_hz = doc.at("frequencies_hz").get<std::vector<double>>();
    }
    if (doc.contains("payload_masses_g")) {
        plan.payload_masses_g = doc.at("payload_masses_g").get<std::vector<double>>();
    }
    if (doc.contains("training_mass_sets")) {
        plan.training_mass_sets =
            doc.at("training_mass_sets").get<std::vector<std::vector<double>>>();
    }
    plan.segment_s = doc.value("segment_s", plan.segment_s);
    plan.estimator_washout_s = doc.value("estimator_washout_s", plan.estimator_washout_s);
    plan.window_s = doc.value("window_s", plan.window_s);
    if (doc.contains("item_masses_g")) {
        plan.item_masses_g = doc.at("item_masses_g").get<std::vector<double>>();
    }
    plan.hammer_item = doc.value("hammer_item", plan.hammer_item);
    plan.eccentricity_scale_m = doc.value("eccentricity_scale_m", plan.eccentricity_scale_m);
    if (doc.contains("pwm_patterns")) {
        plan.pwm_patterns.clear();
        for (const auto& entry : doc.at("pwm_patterns")) {
            PwmPattern p;
            p.name = entry.at("name").get<std::string>();
            p.on_s = entry.at("on_s").get<double>();
            p.off_s = entry.at("off_s").get<double>();
            plan.pwm_patterns.push_back(std::move(p));
        }
    }
    plan.pwm_amplitude = doc.value("pwm_amplitude", plan.pwm_amplitude);

    plan.validate();
    return plan;
}

std::string plan_to_json(const ExperimentPlan& plan) {
    detail::json doc;
    doc["task"] = task_name(plan.task);
    doc["seed"] = plan.seed;
    doc["repetitions"] = plan.repetitions;
    doc["duration_s"] = plan.duration_s;
    doc["ridge"] = plan.ridge;
    doc["input_sample_rate"] = plan.input_sample_rate;
    doc["split"] = {{"washout", plan.split.washout},
                    {"train", plan.split.train},
                    {"test", plan.split.test}};
    detail::json chain;
    chain["nodes_per_module"] = plan.chain.nodes_per_module;
    chain["node_mass_kg"] = plan.chain.node_mass_kg;
    chain["damping_ratio"] = plan.chain.damping_ratio;
    chain["soft_linear_stiffness"] = plan.chain.soft_linear_stiffness;
    chain["stiffness_ratio"] = plan.chain.stiffness_ratio;
    chain["cubic_coefficient"] = plan.chain.cubic_coefficient;
    chain["integration_dt"] = plan.chain.integration_dt;
    chain["sample_rate"] = plan.chain.sample_rate;
    doc["chain"] = chain;
    doc["configurations"] = detail::json::array();
    for (const auto& cfg : plan.configurations) {
        detail::json entry;
        entry["name"] = cfg.name;
        entry["modules"] = detail::json::array();
        for (const auto& m : cfg.modules) entry["modules"].push_back(m.word());
        doc["configurations"].push_back(entry);
    }
    doc["amplitudes"] = plan.amplitudes;
    doc["narma_orders"] = plan.narma_orders;
    doc["narma"] = {{"alpha", plan.narma.alpha},
                    {"beta", plan.narma.beta},
                    {"gamma", plan.narma.gamma},
                    {"delta", plan.narma.delta},
                    {"classic", plan.narma.classic}};
    doc["frequencies_hz"] = plan.frequencies_hz;
    doc["payload_masses_g"] = plan.payload_masses_g;
    doc["training_mass_sets"] = plan.training_mass_sets;
    doc["segment_s"] = plan.segment_s;
    doc["estimator_washout_s"] = plan.estimator_washout_s;
    doc["window_s"] = plan.window_s;
    doc["item_masses_g"] = plan.item_masses_g;
    doc["hammer_item"] = plan.hammer_item;
    doc["eccentricity_scale_m"] = plan.eccentricity_scale_m;
    doc["pwm_patterns"] = detail::json::array();
    for (const auto& p : plan.pwm_patterns) {
        doc["pwm_patterns"].push_back({{"name", p.name}, {"on_s", p.on_s}, {"off_s", p.off_s}});
    }
    doc["pwm_amplitude"] = plan.pwm_amplitude;
    return doc.dump(2) + "\n";
}

ExperimentPlan default_narma_plan() {
    ExperimentPlan plan;
    plan.task = PlanTask::NarmaSweep;
    plan.repetitions = 5;
    plan.duration_s = 20.0;
    plan.chain.modules.assign(5, ModuleState::parse("000"));
    plan.configurations = default_configuration_set();
    plan.amplitudes = {0.001, 0.005, 0.02};
    plan.narma_orders = {2, 10};
    return plan;
}

ExperimentPlan default_payload_plan() {
    ExperimentPlan plan;
    plan.task = PlanTask::PayloadSweep;
    plan.repetitions = 3;
    plan.duration_s = 15.0;
    plan.chain.modules.assign(5, ModuleState::parse("000"));
    plan.configurations = {
        {"C5", std::vector<ModuleState>(5, ModuleState::parse("000"))},
        {"C6", std::vector<ModuleState>(5, ModuleState::parse("111"))},
    };
    plan.amplitudes = {0.005};
    plan.frequencies_hz = {2.0, 4.0, 6.0, 8.0, 10.0};
    plan.payload_masses_g = {0.0, 50.0, 90.0, 130.0, 170.0};
    plan.training_mass_sets = {{0.0}, {0.0, 170.0}, {0.0, 50.0, 90.0, 130.0, 170.0}};
    plan.segment_s = 5.0;
    plan.estimator_washout_s = 10.0;
    plan.window_s = 5.0;
    return plan;
}

ExperimentPlan default_multitask_plan() {
    ExperimentPlan plan;
    plan.task = PlanTask::MultiTask;
    plan.repetitions = 3;
    plan.duration_s = 30.0;
    plan.chain.modules.assign(4, ModuleState::parse("000"));
    plan.configurations = {
        {"C7", std::vector<ModuleState>(4, ModuleState::parse("000"))},
        {"C8", std::vector<ModuleState>(4, ModuleState::parse("010"))},
    };
    plan.item_masses_g = {61.90, 100.64, 213.95, 161.25};
    plan.hammer_item = 4;
    plan.eccentricity_scale_m = 0.02;
    plan.pwm_patterns = {
        {"W6", 0.1, 0.2},   // 0.33 Hz actuation cycle per channel slot
        {"W7", 0.05, 0.1},  // 0.67 Hz
    };
    plan.pwm_amplitude = 0.05;
    plan.segment_s = 5.0;
    plan.estimator_washout_s = 5.0;
    plan.window_s = 5.0;
    return plan;
}

} // namespace reskit
