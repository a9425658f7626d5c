#include "nanocool/config.hpp"

#include <charconv>
#include <sstream>

#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"

namespace nanocool {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    double out = 0.0;
    const char* begin = v.data();
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("value for '" + key + "' is not a number: '" + v + "'");
    }
    return out;
}

}  // namespace

const std::vector<std::string>& param_keys() {
    static const std::vector<std::string> keys = {
        "mass_kg",           "kappa1_rad_s",    "kappa2_rad_s",  "kappa_ex1_fraction",
        "omega_trap_rad_s",  "shift_amplitude_rad_s", "k1_per_m", "gamma_m_rad_s",
        "mu_rad_s",          "delta_tilde1_rad_s", "d_rad_s",    "power_w",
        "omega_laser_rad_s", "temperature_k",   "position_mode", "cos2k1x0",
        "x_trap_m",
    };
    return keys;
}

const std::vector<std::string>& required_param_keys() {
    static const std::vector<std::string> keys = {
        "mass_kg",          "kappa1_rad_s",          "kappa2_rad_s", "omega_trap_rad_s",
        "shift_amplitude_rad_s", "k1_per_m",         "gamma_m_rad_s", "mu_rad_s",
        "delta_tilde1_rad_s", "d_rad_s",             "power_w",      "temperature_k",
    };
    return keys;
}

void apply_param(const std::string& key, const std::string& value, SystemParams& params,
                 std::set<std::string>& provided) {
    if (key == "mass_kg") params.mass = parse_number(key, value);
    else if (key == "kappa1_rad_s") params.kappa1 = parse_number(key, value);
    else if (key == "kappa2_rad_s") params.kappa2 = parse_number(key, value);
    else if (key == "kappa_ex1_fraction") params.kappa_ex1_fraction = parse_number(key, value);
    else if (key == "omega_trap_rad_s") params.omega_trap = parse_number(key, value);
    else if (key == "shift_amplitude_rad_s") params.shift_amplitude = parse_number(key, value);
    else if (key == "k1_per_m") params.k1 = parse_number(key, value);
    else if (key == "gamma_m_rad_s") params.gamma_m = parse_number(key, value);
    else if (key == "mu_rad_s") params.mu = parse_number(key, value);
    else if (key == "delta_tilde1_rad_s") params.delta_tilde1 = parse_number(key, value);
    else if (key == "d_rad_s") params.d = parse_number(key, value);
    else if (key == "power_w") params.power = parse_number(key, value);
    else if (key == "omega_laser_rad_s") params.omega_laser = parse_number(key, value);
    else if (key == "temperature_k") params.temperature = parse_number(key, value);
    else if (key == "position_mode") {
        const std::string v = trim(value);
        if (v == "direct") params.position_mode = PositionMode::kDirect;
        else if (v == "self_consistent") params.position_mode = PositionMode::kSelfConsistent;
        else throw UsageError("position_mode must be 'direct' or 'self_consistent', got '" + v + "'");
    } else if (key == "cos2k1x0") params.cos_2k1x0 = parse_number(key, value);
    else if (key == "x_trap_m") params.x_trap = parse_number(key, value);
    else throw UsageError("unknown config key '" + key + "'");
    provided.insert(key);
}

void apply_config_text(const std::string& text, SystemParams& params,
                       std::set<std::string>& provided) {
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(line_no) +
                             " is not 'key = value': '" + line + "'");
        }
        apply_param(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), params, provided);
    }
}

std::string canonical_params_text(const SystemParams& params) {
    std::string out;
    auto emit = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    emit("mass_kg", format_double(params.mass));
    emit("kappa1_rad_s", format_double(params.kappa1));
    emit("kappa2_rad_s", format_double(params.kappa2));
    emit("kappa_ex1_fraction", format_double(params.kappa_ex1_fraction));
    emit("omega_trap_rad_s", format_double(params.omega_trap));
    emit("shift_amplitude_rad_s", format_double(params.shift_amplitude));
    emit("k1_per_m", format_double(params.k1));
    emit("gamma_m_rad_s", format_double(params.gamma_m));
    emit("mu_rad_s", format_double(params.mu));
    emit("delta_tilde1_rad_s", format_double(params.delta_tilde1));
    emit("d_rad_s", format_double(params.d));
    emit("power_w", format_double(params.power));
    emit("omega_laser_rad_s", format_double(params.omega_laser));
    emit("temperature_k", format_double(params.temperature));
    emit("position_mode",
         params.position_mode == PositionMode::kDirect ? "direct" : "self_consistent");
    if (params.position_mode == PositionMode::kDirect) {
        emit("cos2k1x0", format_double(params.cos_2k1x0));
    } else {
        emit("x_trap_m", format_double(params.x_trap));
    }
    return out;
}

}  // namespace nanocool
