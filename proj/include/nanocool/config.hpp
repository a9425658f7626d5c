#pragma once

#include <set>
#include <string>
#include <vector>

#include "nanocool/params.hpp"

namespace nanocool {

// Plain-text parameter files: one "key = value" per line, '#' comments.
// Keys carry their SI unit as a suffix (mass_kg, kappa1_rad_s, ...).

// All recognized keys in canonical order.
const std::vector<std::string>& param_keys();

// Keys that must be supplied (by file or flag) before a run.
const std::vector<std::string>& required_param_keys();

// Parses config text into params, recording which keys were set. Unknown
// keys or malformed lines throw UsageError.
void apply_config_text(const std::string& text, SystemParams& params,
                       std::set<std::string>& provided);

// Applies one key/value pair (also used by the CLI flag layer).
void apply_param(const std::string& key, const std::string& value, SystemParams& params,
                 std::set<std::string>& provided);

// Canonical serialization of a (validated) parameter set; stable across runs,
// used for reproducibility headers and hashing.
std::string canonical_params_text(const SystemParams& params);

}  // namespace nanocool
