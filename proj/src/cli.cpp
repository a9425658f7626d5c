#include "nanocool/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nanocool/config.hpp"
#include "nanocool/errors.hpp"
#include "nanocool/io_util.hpp"
#include "nanocool/oracle.hpp"

namespace nanocool::cli {

namespace {

using json = nlohmann::ordered_json;

const std::set<std::string>& known_subcommands() {
    static const std::set<std::string> subs = {"steady", "spectrum", "response", "cool",
                                               "sweep",  "power",    "optimize"};
    return subs;
}

// Flag name (without "--") -> canonical config key.
const std::map<std::string, std::string>& param_flags() {
    static const std::map<std::string, std::string> flags = {
        {"mass", "mass_kg"},
        {"kappa1", "kappa1_rad_s"},
        {"kappa2", "kappa2_rad_s"},
        {"kappa-ex1-fraction", "kappa_ex1_fraction"},
        {"omega-trap", "omega_trap_rad_s"},
        {"shift-amplitude", "shift_amplitude_rad_s"},
        {"k1", "k1_per_m"},
        {"gamma-m", "gamma_m_rad_s"},
        {"mu", "mu_rad_s"},
        {"delta-tilde1", "delta_tilde1_rad_s"},
        {"d", "d_rad_s"},
        {"power", "power_w"},
        {"omega-laser", "omega_laser_rad_s"},
        {"temperature", "temperature_k"},
        {"position-mode", "position_mode"},
        {"cos2k1x0", "cos2k1x0"},
        {"x-trap", "x_trap_m"},
    };
    return flags;
}

double to_number(const std::string& flag, const std::string& value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("value for '--" + flag + "' is not a number: '" + value + "'");
    }
    return out;
}

int to_int(const std::string& flag, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw UsageError("value for '--" + flag + "' is not an integer: '" + value + "'");
    }
    return out;
}

std::vector<double> to_number_list(const std::string& flag, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(to_number(flag, item));
    }
    if (out.empty()) throw UsageError("'--" + flag + "' needs a comma-separated list of numbers");
    return out;
}

Method to_method(const std::string& name) {
    if (name == "sl") return Method::kSingleLorentzian;
    if (name == "dl") return Method::kDoubleLorentzian;
    if (name == "exact") return Method::kExact;
    throw UsageError("unknown method '" + name + "' (expected sl, dl or exact)");
}

std::string default_output(const std::string& sub) {
    if (sub == "steady" || sub == "cool" || sub == "optimize") return sub + ".json";
    return sub + ".csv";
}

std::string default_format(const std::string& sub) {
    if (sub == "steady" || sub == "cool" || sub == "optimize") return "json";
    return "csv";
}

json complex_json(const std::complex<double>& z) {
    return json{{"re", z.real()}, {"im", z.imag()}};
}

std::string params_header(const SystemParams& p) {
    std::string out = "# nanocool " + std::string(kVersion) + "\n";
    const std::string canonical = canonical_params_text(p);
    out += "# params_hash = " + fnv1a_hex(canonical) + "\n";
    std::istringstream lines(canonical);
    std::string line;
    while (std::getline(lines, line)) out += "# " + line + "\n";
    return out;
}

json params_json(const SystemParams& p) {
    json out;
    std::istringstream lines(canonical_params_text(p));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find(" = ");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (key == "position_mode") {
            out[key] = value;
        } else {
            double v = 0.0;
            std::from_chars(value.data(), value.data() + value.size(), v);
            out[key] = v;
        }
    }
    return out;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json(nullptr);
}

std::string json_document(const SystemParams& p, const char* section, json payload) {
    json doc;
    doc["version"] = std::string(kVersion);
    doc["params_hash"] = fnv1a_hex(canonical_params_text(p));
    doc["params"] = params_json(p);
    doc[section] = std::move(payload);
    return doc.dump(2) + "\n";
}

int run_steady(const RunConfig& cfg) {
    const Equilibrium eq = solve_equilibrium(cfg.params);
    json out;
    out["alpha1"] = complex_json(eq.alpha1);
    out["alpha2"] = complex_json(eq.alpha2);
    out["x0_m"] = eq.x0;
    out["delta_tilde1_rad_s"] = eq.delta_tilde1;
    out["delta2_rad_s"] = eq.delta2;
    out["omega_m_rad_s"] = eq.omega_m;
    out["g0_rad_per_s_m"] = eq.g0;
    out["g_rad_s"] = eq.g;
    out["n1"] = eq.n1;
    out["n2"] = eq.n2;
    atomic_write_file(cfg.output_path, json_document(cfg.params, "equilibrium", out));
    return 0;
}

int run_spectrum(const RunConfig& cfg) {
    const double wt = cfg.params.omega_trap;
    const double lo = cfg.delta_range_set ? cfg.delta_min : -3.0 * wt;
    const double hi = cfg.delta_range_set ? cfg.delta_max : 1.0 * wt;
    const int n = cfg.delta_points;
    std::vector<double> deltas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        deltas[static_cast<size_t>(i)] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1.0);

    const auto scan = photon_number_scan(cfg.params, deltas);
    std::string csv = params_header(cfg.params);
    csv += "delta_tilde1_rad_s,n1,n2\n";
    for (const auto& pt : scan) {
        csv += format_double(pt.delta_tilde1) + "," + format_double(pt.n1) + "," +
               format_double(pt.n2) + "\n";
    }
    atomic_write_file(cfg.output_path, csv);
    return 0;
}

int run_response(const RunConfig& cfg) {
    const Equilibrium eq = solve_equilibrium(cfg.params);
    const double lo = cfg.omega_range_set ? cfg.omega_min : 0.5 * eq.omega_m;
    const double hi = cfg.omega_range_set ? cfg.omega_max : 1.5 * eq.omega_m;
    const int n = cfg.omega_points;
    std::vector<double> omegas(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        omegas[static_cast<size_t>(i)] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1.0);

    const auto scan = response_scan(eq, cfg.params, omegas);
    std::string csv = params_header(cfg.params);
    csv += "omega_rad_s,re_chi_o,im_chi_o,re_chi,im_chi,s_xx\n";
    for (const auto& ev : scan) {
        csv += format_double(ev.omega) + "," + format_double(ev.chi_o.real()) + "," +
               format_double(ev.chi_o.imag()) + "," + format_double(ev.chi.real()) + "," +
               format_double(ev.chi.imag()) + "," + format_double(ev.s_xx) + "\n";
    }
    atomic_write_file(cfg.output_path, csv);
    return 0;
}

int run_cool(const RunConfig& cfg) {
    const CoolingResult res = compute_cooling(cfg.params);
    if (!res.stable) {
        throw SimError(ErrorKind::kUnstableSystem,
                       "system is unstable at the requested parameters");
    }
    json out;
    out["gamma_opt_sl_rad_s"] = res.gamma_opt_sl;
    out["gamma_eff_dl_rad_s"] = finite_or_null(res.gamma_eff_dl);
    out["gamma_eff_exact_rad_s"] = res.gamma_eff_exact;
    out["gamma_eff_lyapunov_rad_s"] = res.gamma_eff_lyapunov;
    out["c1"] = finite_or_null(res.c1);
    out["c2"] = finite_or_null(res.c2);
    out["stable"] = res.stable;
    out["dl_degenerate"] = res.dl_degenerate;
    json modes;
    modes["omega_m1_rad_s"] = res.modes.omega_m1;
    modes["omega_m2_rad_s"] = res.modes.omega_m2;
    modes["gamma_1_rad_s"] = res.modes.gamma_1;
    modes["gamma_2_rad_s"] = res.modes.gamma_2;
    modes["s0_rad_s"] = complex_json(res.modes.s0);
    modes["s1_rad_s"] = complex_json(res.modes.s1);
    modes["s2_rad_s"] = complex_json(res.modes.s2);
    out["modes"] = std::move(modes);
    atomic_write_file(cfg.output_path, json_document(cfg.params, "cooling", out));
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    sweep::AxisSpec axis1 = sweep::default_axis1(cfg.plane, cfg.params);
    sweep::AxisSpec axis2 = sweep::default_axis2(cfg.plane, cfg.params);
    if (cfg.axis1.n > 0) {
        axis1.lo = cfg.axis1.lo;
        axis1.hi = cfg.axis1.hi;
        axis1.n = cfg.axis1.n;
    }
    if (cfg.axis2.n > 0) {
        axis2.lo = cfg.axis2.lo;
        axis2.hi = cfg.axis2.hi;
        axis2.n = cfg.axis2.n;
    }
    const sweep::SweepGrid grid = sweep::plane_sweep(cfg.params, cfg.plane, axis1, axis2,
                                                     cfg.methods, cfg.search, cfg.workers);

    std::string csv = params_header(cfg.params);
    csv += "# plane = " + std::string(sweep::plane_name(cfg.plane)) + "\n";
    csv += "# axis1 = " + axis1.name + " [" + format_double(axis1.lo) + ", " +
           format_double(axis1.hi) + "] n=" + std::to_string(axis1.n) + "\n";
    csv += "# axis2 = " + axis2.name + " [" + format_double(axis2.lo) + ", " +
           format_double(axis2.hi) + "] n=" + std::to_string(axis2.n) + "\n";
    csv += "# reference_rad_s = " + format_double(grid.reference) + "\n";
    csv += "axis1,axis2,gamma_sl,gamma_dl,gamma_exact,gamma_norm,delta_star,stable\n";
    for (const auto& cell : grid.cells) {
        csv += format_double(cell.axis1) + "," + format_double(cell.axis2) + "," +
               format_double(cell.gamma_sl) + "," + format_double(cell.gamma_dl) + "," +
               format_double(cell.gamma_exact) + "," + format_double(cell.gamma_norm) + "," +
               format_double(cell.delta_star) + "," + (cell.stable ? "1" : "0") + "\n";
    }
    atomic_write_file(cfg.output_path, csv);
    return 0;
}

int run_power(const RunConfig& cfg) {
    std::vector<double> powers = cfg.powers;
    if (powers.empty()) {
        // Log-spaced 0.05 mW .. 20 mW by default.
        const int n = 25;
        for (int i = 0; i < n; ++i)
            powers.push_back(5e-5 * std::pow(400.0, static_cast<double>(i) / (n - 1)));
    }
    std::vector<double> mus = cfg.mu_values;
    if (mus.empty()) mus = {0.0, 0.25 * cfg.params.omega_trap};

    const auto table = sweep::power_sweep(cfg.params, powers, mus, cfg.search, cfg.workers);
    std::string csv = params_header(cfg.params);
    csv += "power_w,mu_rad_s,gamma_max_rad_s,g_over_kappa1,delta_star_rad_s,d_rad_s,stable\n";
    for (const auto& pt : table) {
        csv += format_double(pt.power) + "," + format_double(pt.mu) + "," +
               format_double(pt.gamma_max) + "," + format_double(pt.g_over_kappa1) + "," +
               format_double(pt.delta_star) + "," + format_double(pt.d) + "," +
               (pt.ok ? "1" : "0") + "\n";
    }
    atomic_write_file(cfg.output_path, csv);
    return 0;
}

int run_optimize(const RunConfig& cfg) {
    const Equilibrium eq = solve_equilibrium(cfg.params);
    const OptimalDetunings closed = optimal_detunings(cfg.params.mu, cfg.params.d, eq.omega_m);

    json closed_json;
    closed_json["denominator_min_rad_s"] = {closed.denominator_min[0], closed.denominator_min[1]};
    closed_json["numerator_max_rad_s"] = {closed.numerator_max[0], closed.numerator_max[1]};
    if (closed.joint) {
        closed_json["joint"] = json{{"d_star_rad_s", closed.joint->first},
                                    {"delta_tilde1_star_rad_s", closed.joint->second}};
    } else {
        closed_json["joint"] = nullptr;
    }

    const sweep::DetuningOptimum opt =
        sweep::maximize_over_detuning(cfg.params, cfg.optimize_method, cfg.search);
    json numeric;
    numeric["method"] = method_name(cfg.optimize_method);
    numeric["delta_star_rad_s"] = opt.delta_star;
    numeric["gamma_star_rad_s"] = opt.gamma_star;
    numeric["g_star_rad_s"] = opt.g_star;

    json payload;
    payload["closed_form"] = std::move(closed_json);
    payload["numeric"] = std::move(numeric);
    atomic_write_file(cfg.output_path, json_document(cfg.params, "optimize", payload));
    return 0;
}

}  // namespace

RunConfig parse(const std::vector<std::string>& args) {
    if (args.empty()) {
        throw UsageError(
            "missing subcommand (expected one of: steady, spectrum, response, cool, sweep, "
            "power, optimize)");
    }
    RunConfig cfg;
    cfg.subcommand = args[0];
    if (!known_subcommands().count(cfg.subcommand)) {
        throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
    }

    // First pass: flatten "--key=value" and pair flags with values.
    std::vector<std::pair<std::string, std::string>> flags;
    for (size_t i = 1; i < args.size(); ++i) {
        std::string token = args[i];
        if (token.rfind("--", 0) != 0) {
            throw UsageError("expected a flag, got '" + token + "'");
        }
        token = token.substr(2);
        std::string value;
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            value = token.substr(eq + 1);
            token = token.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw UsageError("flag '--" + token + "' needs a value");
            value = args[++i];
        }
        flags.emplace_back(token, value);
    }

    // Config file first, flags override.
    std::set<std::string> provided;
    for (const auto& [flag, value] : flags) {
        if (flag != "config") continue;
        std::ifstream in(value);
        if (!in) throw UsageError("cannot open config file '" + value + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        apply_config_text(buffer.str(), cfg.params, provided);
    }

    const std::string& sub = cfg.subcommand;
    for (const auto& [flag, value] : flags) {
        if (flag == "config") continue;
        if (auto it = param_flags().find(flag); it != param_flags().end()) {
            apply_param(it->second, value, cfg.params, provided);
            continue;
        }
        if (flag == "output") cfg.output_path = value;
        else if (flag == "format") cfg.format = value;
        else if (flag == "workers") cfg.workers = to_int(flag, value);
        else if (flag == "delta-min" && sub == "spectrum") { cfg.delta_min = to_number(flag, value); cfg.delta_range_set = true; }
        else if (flag == "delta-max" && sub == "spectrum") { cfg.delta_max = to_number(flag, value); cfg.delta_range_set = true; }
        else if (flag == "delta-points" && sub == "spectrum") cfg.delta_points = to_int(flag, value);
        else if (flag == "omega-min" && sub == "response") { cfg.omega_min = to_number(flag, value); cfg.omega_range_set = true; }
        else if (flag == "omega-max" && sub == "response") { cfg.omega_max = to_number(flag, value); cfg.omega_range_set = true; }
        else if (flag == "omega-points" && sub == "response") cfg.omega_points = to_int(flag, value);
        else if (flag == "plane" && sub == "sweep") {
            if (value == "mu_d") cfg.plane = sweep::Plane::kMuD;
            else if (value == "delta_mu") cfg.plane = sweep::Plane::kDeltaMu;
            else if (value == "delta_d") cfg.plane = sweep::Plane::kDeltaD;
            else throw UsageError("unknown plane '" + value + "' (expected mu_d, delta_mu or delta_d)");
        } else if (flag == "axis1-min" && sub == "sweep") cfg.axis1.lo = to_number(flag, value);
        else if (flag == "axis1-max" && sub == "sweep") cfg.axis1.hi = to_number(flag, value);
        else if (flag == "axis1-points" && sub == "sweep") cfg.axis1.n = to_int(flag, value);
        else if (flag == "axis2-min" && sub == "sweep") cfg.axis2.lo = to_number(flag, value);
        else if (flag == "axis2-max" && sub == "sweep") cfg.axis2.hi = to_number(flag, value);
        else if (flag == "axis2-points" && sub == "sweep") cfg.axis2.n = to_int(flag, value);
        else if (flag == "methods" && sub == "sweep") {
            cfg.methods.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!item.empty()) cfg.methods.push_back(to_method(item));
            }
            if (cfg.methods.empty()) throw UsageError("'--methods' needs at least one method");
        } else if (flag == "method" && sub == "optimize") cfg.optimize_method = to_method(value);
        else if (flag == "delta-lo" && (sub == "sweep" || sub == "power" || sub == "optimize"))
            cfg.search.lo = to_number(flag, value);
        else if (flag == "delta-hi" && (sub == "sweep" || sub == "power" || sub == "optimize"))
            cfg.search.hi = to_number(flag, value);
        else if (flag == "n-seed" && (sub == "sweep" || sub == "power" || sub == "optimize"))
            cfg.search.n_seed = to_int(flag, value);
        else if (flag == "powers" && sub == "power") cfg.powers = to_number_list(flag, value);
        else if (flag == "mu-values" && sub == "power") cfg.mu_values = to_number_list(flag, value);
        else throw UsageError("unknown flag '--" + flag + "' for subcommand '" + sub + "'");
    }

    // Every physical parameter must come from the config file or a flag.
    std::string missing;
    for (const auto& key : required_param_keys()) {
        if (!provided.count(key)) missing += missing.empty() ? key : ", " + key;
    }
    if (!missing.empty()) throw UsageError("missing required parameter(s): " + missing);
    if (cfg.params.position_mode == PositionMode::kSelfConsistent && !provided.count("x_trap_m")) {
        throw UsageError("missing required parameter(s): x_trap_m (self_consistent mode)");
    }

    if (cfg.output_path.empty()) cfg.output_path = default_output(sub);
    if (cfg.format.empty()) cfg.format = default_format(sub);
    if (cfg.format != default_format(sub)) {
        throw UsageError("subcommand '" + sub + "' emits " + default_format(sub) + " only");
    }
    if (cfg.workers < 1) throw UsageError("'--workers' must be >= 1");
    if (cfg.delta_points < 1 || cfg.omega_points < 1) throw UsageError("grid needs >= 1 point");
    for (const sweep::AxisSpec* axis : {&cfg.axis1, &cfg.axis2}) {
        if (axis->n == 0 && (axis->lo != 0.0 || axis->hi != 0.0)) {
            throw UsageError("axis range flags need the matching --axis*-points flag");
        }
        if (axis->n < 0) throw UsageError("axis point counts must be >= 1");
    }

    cfg.params = validate(cfg.params);
    return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        int rc = 0;
        if (cfg.subcommand == "steady") rc = run_steady(cfg);
        else if (cfg.subcommand == "spectrum") rc = run_spectrum(cfg);
        else if (cfg.subcommand == "response") rc = run_response(cfg);
        else if (cfg.subcommand == "cool") rc = run_cool(cfg);
        else if (cfg.subcommand == "sweep") rc = run_sweep(cfg);
        else if (cfg.subcommand == "power") rc = run_power(cfg);
        else if (cfg.subcommand == "optimize") rc = run_optimize(cfg);
        else throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
        if (rc == 0) out << cfg.output_path << "\n";
        return rc;
    } catch (const SimError& e) {
        json record;
        record["kind"] = e.kind_name();
        record["message"] = e.what();
        json context = json::object();
        for (const auto& [key, value] : e.context()) context[key] = value;
        record["context"] = std::move(context);
        err << record.dump() << "\n";
        return 1;
    }
}

int main_entry(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        const RunConfig cfg = parse(args);
        return run(cfg, std::cout, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const SimError& e) {
        // Invalid parameter values are user input problems.
        if (e.kind() == ErrorKind::kInvalidParam) {
            std::cerr << "usage error: " << e.what() << "\n";
            return 2;
        }
        json record;
        record["kind"] = e.kind_name();
        record["message"] = e.what();
        record["context"] = json::object();
        for (const auto& [key, value] : e.context()) record["context"][key] = value;
        std::cerr << record.dump() << "\n";
        return 1;
    }
}

}  // namespace nanocool::cli
