#include "json_util.hpp"

#include "reskit/errors.hpp"

namespace reskit::detail {

SignalSpec signal_spec_from_json(const json& j) {
    SignalSpec spec;
    const std::string kind = j.value("kind", "triple_harmonic");
    if (kind == "triple_harmonic") {
        spec.kind = SignalKind::TripleHarmonic;
    } else if (kind == "single_harmonic") {
        spec.kind = SignalKind::SingleHarmonic;
    } else if (kind == "pwm3") {
        spec.kind = SignalKind::Pwm3;
    } else {
        throw ConfigError("unknown signal kind '" + kind + "'");
    }
    spec.amplitude = j.value("amplitude", spec.amplitude);
    if (j.contains("frequencies_hz")) {
        spec.frequencies_hz = j.at("frequencies_hz").get<std::vector<double>>();
    } else if (spec.kind == SignalKind::SingleHarmonic) {
        spec.frequencies_hz = {4.0};
    }
    spec.pwm_on_s = j.value("pwm_on_s", spec.pwm_on_s);
    spec.pwm_off_s = j.value("pwm_off_s", spec.pwm_off_s);
    spec.duration_s = j.value("duration_s", spec.duration_s);
    spec.sample_rate = j.value("sample_rate", spec.sample_rate);
    spec.validate();
    return spec;
}

json signal_spec_to_json(const SignalSpec& spec) {
    json j;
    switch (spec.kind) {
        case SignalKind::TripleHarmonic: j["kind"] = "triple_harmonic"; break;
        case SignalKind::SingleHarmonic: j["kind"] = "single_harmonic"; break;
        case SignalKind::Pwm3: j["kind"] = "pwm3"; break;
    }
    j["amplitude"] = spec.amplitude;
    j["frequencies_hz"] = spec.frequencies_hz;
    if (spec.kind == SignalKind::Pwm3) {
        j["pwm_on_s"] = spec.pwm_on_s;
        j["pwm_off_s"] = spec.pwm_off_s;
    }
    j["duration_s"] = spec.duration_s;
    j["sample_rate"] = spec.sample_rate;
    return j;
}

ChainConfig chain_config_from_json(const json& j, const ChainConfig& base) {
    ChainConfig config = base;
    if (j.contains("modules")) {
        config.modules.clear();
        for (const auto& word : j.at("modules")) {
            config.modules.push_back(ModuleState::parse(word.get<std::string>()));
        }
    }
    config.nodes_per_module = j.value("nodes_per_module", config.nodes_per_module);
    config.node_mass_kg = j.value("node_mass_kg", config.node_mass_kg);
    config.damping_ratio = j.value("damping_ratio", config.damping_ratio);
    config.soft_linear_stiffness = j.value("soft_linear_stiffness", config.soft_linear_stiffness);
    config.stiffness_ratio = j.value("stiffness_ratio", config.stiffness_ratio);
    config.cubic_coefficient = j.value("cubic_coefficient", config.cubic_coefficient);
    config.payload_mass_kg = j.value("payload_mass_kg", config.payload_mass_kg);
    config.payload_eccentricity_m = j.value("payload_eccentricity_m", config.payload_eccentricity_m);
    config.integration_dt = j.value("integration_dt", config.integration_dt);
    config.sample_rate = j.value("sample_rate", config.sample_rate);
    return config;
}

} // namespace reskit::detail
