#ifndef MOMENTBOUNDS_TOOLS_CONFIG_HPP
#define MOMENTBOUNDS_TOOLS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace momentbounds::cli {

enum class Command { BartaSeries, PtSeries, EmmBounds, Theorem4Bounds, PadeBounds, Verify };
enum class OutputFormat { Csv, Json };
enum class Trial { Gaussian, Quartic };

const char* to_string(Command c);
Command parse_command(const std::string& s);
const char* to_string(OutputFormat f);
const char* to_string(Trial t);

constexpr unsigned kDoubleDigits = 17;

struct RunConfig {
    Command command = Command::BartaSeries;

    // barta-series
    int max_dim = 8;
    Trial trial = Trial::Gaussian;
    double energy = 1.060362090484; // quartic trial
    double mu2 = 0.36;

    // pt-series
    int max_q = 60;
    double cal_e = 1.1562670719881133;
    double ode_tolerance = 1e-30;
    int taylor_order = 60;
    double barta_half_width = 4.0;
    int barta_points = 8001;

    // emm-bounds, theorem4-bounds
    std::vector<int> pstar{6, 8, 12};
    double epub = 2.0;
    double epsilon = 1e-8;
    int max_cuts = 400;

    // pade-bounds
    int pade_min_q = 3;
    int pade_max_q = 12;

    // verify
    std::string suite = "all";
    std::uint64_t seed = 1;

    // Decimal digits; 17 or fewer selects 64-bit arithmetic.
    unsigned precision = kDoubleDigits;
    double tolerance = 1e-4;
    OutputFormat output = OutputFormat::Csv;
    std::string output_path; // empty writes to stdout
    std::string audit_path;
    std::string moments_cache;

    bool extended() const { return precision > kDoubleDigits; }
};

/// Throws ConfigError on out-of-range settings; returns warnings for the caller to print.
std::vector<std::string> validate(const RunConfig& config);

/// Parses argv (program name first). Precedence: flags, then --config file, then the
/// MOMENTBOUNDS_PRECISION environment variable (precision only), then built-in defaults.
/// Returns false when help was requested and printed.
bool parse_args(int argc, const char* const* argv, RunConfig& config, std::string& help);

} // namespace momentbounds::cli

#endif
