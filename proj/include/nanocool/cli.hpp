#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nanocool/sweep.hpp"

namespace nanocool::cli {

// Fully resolved invocation: subcommand, validated physics parameters and
// grid/search settings. Built by parse(); consumed by run().
struct RunConfig {
    std::string subcommand;
    SystemParams params;
    std::string output_path;
    std::string format;  // "csv" or "json"
    int workers = 1;

    // spectrum: detuning grid
    double delta_min = 0.0;
    double delta_max = 0.0;
    int delta_points = 2001;
    bool delta_range_set = false;

    // response: fluctuation-frequency grid
    double omega_min = 0.0;
    double omega_max = 0.0;
    int omega_points = 2001;
    bool omega_range_set = false;

    // sweep
    sweep::Plane plane = sweep::Plane::kMuD;
    sweep::AxisSpec axis1;  // n == 0 -> default axis
    sweep::AxisSpec axis2;
    std::vector<Method> methods = {Method::kSingleLorentzian, Method::kDoubleLorentzian,
                                   Method::kExact};

    // detuning search (sweep, power, optimize)
    sweep::DetuningSearch search;

    // power
    std::vector<double> powers;
    std::vector<double> mu_values;

    // optimize
    Method optimize_method = Method::kExact;
};

// Parses "subcommand [--flag value ...]". Flags override config-file values.
// Throws UsageError for unknown flags/keys, malformed values, or missing
// required parameters.
RunConfig parse(const std::vector<std::string>& args);

// Executes the run, writing declared output files atomically. Returns 0 on
// success, 1 on physics errors (a JSON record {kind, message, context} goes
// to err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse + run with exit-code mapping (2 for usage errors).
int main_entry(int argc, const char* const* argv);

}  // namespace nanocool::cli
