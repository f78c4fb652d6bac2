#pragma once

#include "reskit/chain.hpp"
#include "reskit/signals.hpp"

#include <json.hpp>

namespace reskit::detail {

using nlohmann::json;

SignalSpec signal_spec_from_json(const json& j);
json signal_spec_to_json(const SignalSpec& spec);

/// Apply any chain fields present in `j` on top of `base`.
ChainConfig chain_config_from_json(const json& j, const ChainConfig& base = {});

} // namespace reskit::detail
