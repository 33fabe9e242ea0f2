#include "wolffkit/commands.hpp"
#include "wolffkit/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace wolffkit;

struct Flags {
    std::string config;
    std::string out = ".";
    std::optional<double> tol;
    std::optional<int> jobs;
    std::string format = "csv";
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

nlohmann::json summary_of(const cli::CommandResult& r, double seconds) {
    int pass = 0;
    double busy = 0.0;
    for (const auto& row : r.rows) {
        pass += row.outcome == report::Outcome::pass;
        busy += row.seconds;
    }
    return {{"command", r.command},
            {"rows", r.rows.size()},
            {"pass", pass},
            {"fail", r.failures},
            {"warn", r.warnings},
            {"exit_code", r.exit_code},
            {"wall_seconds", seconds},
            {"instance_seconds", busy}};
}

int run(const std::vector<std::string>& commands, const Flags& flags, bool allow_missing) {
    const auto doc = config::Document::load(flags.config);
    const auto settings = cli::resolve_settings(doc, flags.tol, flags.jobs, std::getenv("WOLFFKIT_TOL"));
    const auto stamp = report::utc_timestamp();

    // Validate every section before computing anything.
    std::vector<cli::PreparedCommand> prepared;
    for (const auto& command : commands) {
        auto p = cli::prepare_command(command, doc, settings, allow_missing);
        if (p.present) prepared.push_back(std::move(p));
    }
    if (prepared.empty()) throw ConfigError(flags.config, "no command sections to run");
    std::vector<cli::CommandResult> results;
    std::vector<double> seconds;
    for (auto& p : prepared) {
        const auto start = std::chrono::steady_clock::now();
        results.push_back(p.run());
        seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }

    std::filesystem::create_directories(flags.out);
    nlohmann::json summary = {{"schema", report::kSchema},
                              {"config", flags.config},
                              {"generated", stamp},
                              {"tol", settings.tol},
                              {"jobs", settings.jobs},
                              {"commands", nlohmann::json::array()}};
    int exit_code = 0;
    int rows = 0, failures = 0, warnings = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const std::string base = cli::section_name(r.command);
        const auto dir = std::filesystem::path(flags.out);
        if (flags.format == "json") {
            nlohmann::json body = {{"schema", report::kSchema}, {"generated", stamp}, {"rows", report::rows_json(r.rows)}};
            write_file(dir / (base + ".json"), body.dump(2) + "\n");
        } else {
            write_file(dir / (base + ".csv"), report::csv_document(r.rows, stamp));
        }
        auto s = summary_of(r, seconds[i]);
        s["verdict"] = r.exit_code == 0 ? "pass" : "fail";
        summary["commands"].push_back(s);
        write_file(dir / (base + ".summary.json"), nlohmann::json{{"schema", report::kSchema},
                                                                    {"generated", stamp},
                                                                    {"tol", settings.tol},
                                                                    {"jobs", settings.jobs},
                                                                    {"summary", s}}
                                                           .dump(2) + "\n");
        exit_code = std::max(exit_code, r.exit_code);
        rows += static_cast<int>(r.rows.size());
        failures += r.failures;
        warnings += r.warnings;
    }
    summary["verdict"] = exit_code == 0 ? "pass" : "fail";
    if (allow_missing) write_file(std::filesystem::path(flags.out) / "report.summary.json", summary.dump(2) + "\n");

    std::cout << (exit_code == 0 ? "pass" : "fail") << ": " << rows << " rows, " << failures << " failed, " << warnings
              << " warnings -> " << flags.out << "\n";
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wolff potentials, radial oracles and datum criteria for Orlicz growth problems"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", flags.config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "output directory")->capture_default_str();
        sub->add_option("--tol", flags.tol, "tolerance, overrides config and WOLFFKIT_TOL");
        sub->add_option("--jobs", flags.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--format", flags.format, "report format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    };

    std::vector<std::pair<CLI::App*, std::string>> subs;
    const std::map<std::string, std::string> help = {
        {"potential", "Wolff potentials at given points and radii"},
        {"oracle", "exact radial solutions, weak-form residuals and asymptotic fits"},
        {"verify-bounds", "two-sided potential bounds on radial instances"},
        {"criteria", "Lorentz, Marcinkiewicz, Morrey, Hoelder, energy and integrability checks"},
        {"hedberg-wolff", "Wolff energies"}};
    for (const auto& name : cli::command_names()) {
        auto* sub = app.add_subcommand(name, help.at(name));
        add_common(sub);
        subs.push_back({sub, name});
    }
    auto* all = app.add_subcommand("report", "every section present in the configuration");
    add_common(all);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (all->parsed()) return run(cli::command_names(), flags, true);
        for (const auto& [sub, name] : subs)
            if (sub->parsed()) return run({name}, flags, false);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
