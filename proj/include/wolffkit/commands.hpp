#pragma once

// Batch commands behind the command-line tool. Each command reads one section
// of a run configuration, validates all of it, then evaluates the instances
// (in parallel, merged in config order) into report rows.

#include "wolffkit/config.hpp"
#include "wolffkit/report.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wolffkit::cli {

struct RunSettings {
    double tol = 1e-9;
    int jobs = 1;
};

/// Tolerance precedence: flag, then config "tol", then the WOLFFKIT_TOL
/// value `env_tol` (may be null), then 1e-9. Jobs: flag, then config "jobs", then 1.
RunSettings resolve_settings(const config::Document& doc, std::optional<double> tol_flag, std::optional<int> jobs_flag,
                             const char* env_tol);

struct CommandResult {
    std::string command;
    std::vector<report::Row> rows;
    int failures = 0;
    int warnings = 0;
    int exit_code = 0;  ///< 0 all rows pass or warn, 1 otherwise
};

/// potential, oracle, verify-bounds, criteria, hedberg-wolff
const std::vector<std::string>& command_names();

/// Config section read by a command ("verify-bounds" -> "verify_bounds").
std::string section_name(std::string_view command);

/// A validated command, ready to evaluate.
struct PreparedCommand {
    std::string command;
    bool present = true;  ///< false when the section was missing and allowed to be
    std::function<CommandResult()> run;
};

/// Throws ConfigError for schema violations; evaluates nothing.
/// A missing section is an error unless `allow_missing`, which yields no rows.
PreparedCommand prepare_command(std::string_view command, const config::Document& doc, const RunSettings& settings,
                                bool allow_missing = false);

/// prepare_command followed by its run.
CommandResult run_command(std::string_view command, const config::Document& doc, const RunSettings& settings,
                          bool allow_missing = false);

}  // namespace wolffkit::cli
