#pragma once

#include <string>
#include <vector>

#include "svlab/experiments.hpp"

namespace svlab {
namespace cli {

// Fully resolved run configuration (flags override config-file entries).
struct RunConfig {
    std::string command; // tunneling | overlap | scaling | resolvent | weyl | predict
    ModelSpec model = cubic_model();
    std::vector<double> xi_values;
    std::vector<double> h_values;
    double a = 0.0;
    double b = 0.0;
    int n_modes = -1;      // <0: auto
    int grid_points = -1;  // <0: auto
    double half_width = -1.0;
    double eta = -1.0;     // overlap margin; <0: S0/4
    std::string precision = "auto"; // standard | extended | auto
    WeylMode weyl_mode = WeylMode::numeric;
    bool normalize_sqrt_h = false;
    int jobs = 1;
    std::string format; // csv | json (per-command default when empty)
    std::string out;    // empty: stdout
    bool emit_fibers = false;
    std::string dump_matrix; // debug: triplet dump of the first assembled matrix
};

// "1,2,3" or "lo:hi:step" or a single number
std::vector<double> parse_real_spec(const std::string& spec);

// flat `key = value` file, keys named exactly as the long flags
void load_config_file(const std::string& path, std::vector<std::pair<std::string, std::string>>& kv);

std::string format_g17(double v);

// Executes the campaign, writes the table, prints a one-line summary on
// stderr. Returns 0 (success), 1 (configuration error), 2 (partial failure).
int run(const RunConfig& cfg);

// Full flag parsing + dispatch; `SVLAB_CONFIG` is the config-file fallback.
int main_entry(int argc, const char* const* argv);

} // namespace cli
} // namespace svlab
