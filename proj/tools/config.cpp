#include "config.hpp"

#include "momentbounds/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <map>

namespace momentbounds::cli {

namespace {

const std::map<std::string, Command> kCommands{
    {"barta-series", Command::BartaSeries}, {"pt-series", Command::PtSeries},
    {"emm-bounds", Command::EmmBounds},     {"theorem4-bounds", Command::Theorem4Bounds},
    {"pade-bounds", Command::PadeBounds},   {"verify", Command::Verify},
};

} // namespace

const char* to_string(Command c)
{
    for (const auto& [name, cmd] : kCommands)
        if (cmd == c)
            return name.c_str();
    return "?";
}

Command parse_command(const std::string& s)
{
    auto it = kCommands.find(s);
    if (it == kCommands.end())
        throw ConfigError("unknown command '" + s + "'");
    return it->second;
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

const char* to_string(Trial t) { return t == Trial::Gaussian ? "gaussian" : "quartic"; }

std::vector<std::string> validate(const RunConfig& c)
{
    std::vector<std::string> warnings;
    if (c.precision < 15)
        throw ConfigError("precision must be at least 15 digits, got " + std::to_string(c.precision));
    if (c.precision > 2000)
        throw ConfigError("precision above 2000 digits is not supported");
    if (!(c.tolerance > 0))
        throw ConfigError("tolerance must be positive");
    switch (c.command) {
    case Command::BartaSeries:
        if (c.max_dim < 1)
            throw ConfigError("--max-dim must be at least 1");
        if (!c.extended() && c.max_dim > 10)
            warnings.push_back("dimension " + std::to_string(c.max_dim)
                               + " exceeds the 64-bit tier; ill-conditioned pairs escalate to 50 digits");
        break;
    case Command::PtSeries:
        if (c.max_q < 4 || c.max_q % 2 != 0)
            throw ConfigError("--max-q must be even and at least 4");
        if (!(c.cal_e > 0))
            throw ConfigError("--cal-e must be positive");
        if (!(c.ode_tolerance > 0))
            throw ConfigError("--ode-tolerance must be positive");
        if (c.taylor_order < 8)
            throw ConfigError("--taylor-order must be at least 8");
        if (!c.extended() && c.max_q > 24)
            warnings.push_back("Q = " + std::to_string(c.max_q)
                               + " exceeds the 64-bit tier; use --precision 50 for long PT series");
        break;
    case Command::EmmBounds:
    case Command::Theorem4Bounds:
        if (c.pstar.empty())
            throw ConfigError("--pstar needs at least one value");
        for (int p : c.pstar)
            if (p < (c.command == Command::EmmBounds ? 2 : 3))
                throw ConfigError("--pstar value " + std::to_string(p) + " is too small");
        if (!(c.epsilon > 0))
            throw ConfigError("--epsilon must be positive");
        if (c.max_cuts < 1)
            throw ConfigError("--max-cuts must be positive");
        break;
    case Command::PadeBounds:
        if (c.pade_min_q < 3 || c.pade_max_q < c.pade_min_q)
            throw ConfigError("Pade orders need 3 <= --min-q <= --max-q");
        break;
    case Command::Verify:
        break;
    }
    return warnings;
}

bool parse_args(int argc, const char* const* argv, RunConfig& c, std::string& help)
{
    if (const char* env = std::getenv("MOMENTBOUNDS_PRECISION")) {
        try {
            c.precision = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            throw ConfigError(std::string("MOMENTBOUNDS_PRECISION is not a number: ") + env);
        }
    }

    CLI::App app{"Moment-based ground-state energy bounds", "momentbounds"};
    app.set_config("--config", "", "key = value file; command-line flags take precedence");
    app.get_config_formatter_base()->arrayDelimiter(',');

    std::string command;
    app.add_option("command", command,
                   "barta-series | pt-series | emm-bounds | theorem4-bounds | pade-bounds | verify")
        ->required();

    app.add_option("--max-dim", c.max_dim, "barta-series: largest matrix dimension");
    std::string trial = to_string(c.trial);
    app.add_option("--trial", trial, "barta-series: gaussian | quartic");
    app.add_option("--energy", c.energy, "quartic trial: energy in the moment equation");
    app.add_option("--mu2", c.mu2, "quartic trial: mu_2 with mu_0 = 1");

    app.add_option("--max-q", c.max_q, "pt-series: largest moment order");
    app.add_option("--cal-e", c.cal_e, "pt-series: PT energy");
    app.add_option("--ode-tolerance", c.ode_tolerance, "pt-series: Taylor step tolerance");
    app.add_option("--taylor-order", c.taylor_order, "pt-series: Taylor order");
    app.add_option("--barta-half-width", c.barta_half_width, "pt-series: scan half-width");
    app.add_option("--barta-points", c.barta_points, "pt-series: scan points");

    app.add_option("--pstar", c.pstar, "emm/theorem4: orders P* (Q = 2 P*)")->delimiter(',');
    app.add_option("--epub", c.epub, "theorem4: rough upper bound E_pub");
    app.add_option("--epsilon", c.epsilon, "cut margin");
    app.add_option("--max-cuts", c.max_cuts, "cut budget per probe");

    app.add_option("--min-q", c.pade_min_q, "pade-bounds: smallest order");
    app.add_option("--pade-max-q", c.pade_max_q, "pade-bounds: largest order");

    app.add_option("--suite", c.suite, "verify: suite name or all");
    app.add_option("--seed", c.seed, "seed for randomized probes");

    app.add_option("--precision", c.precision, "decimal digits (<= 17 selects 64-bit)");
    app.add_option("--tolerance", c.tolerance, "bisection tolerance");
    std::string output = to_string(c.output);
    app.add_option("--output", output, "csv | json");
    app.add_option("-o,--output-path", c.output_path, "artifact path (default stdout)");
    app.add_option("--audit", c.audit_path, "JSON-lines file of per-probe audit records");
    app.add_option("--moments-cache", c.moments_cache, "moment sequence cache file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        help = app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }

    c.command = parse_command(command);
    if (trial == "gaussian")
        c.trial = Trial::Gaussian;
    else if (trial == "quartic")
        c.trial = Trial::Quartic;
    else
        throw ConfigError("unknown trial '" + trial + "'");
    if (output == "csv")
        c.output = OutputFormat::Csv;
    else if (output == "json")
        c.output = OutputFormat::Json;
    else
        throw ConfigError("unknown output format '" + output + "'");
    return true;
}

} // namespace momentbounds::cli
