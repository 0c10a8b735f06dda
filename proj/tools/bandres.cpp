// bandres: scan for bound states and resonances of polynomial potentials.
//
//   bandres run configs/triple_well_g020.cfg
//   bandres preset cubic-oscillator --set phi=-0.1,-0.08,0 --format text
//   bandres sweep-dims --preset double-well --set lambda=0.3 --dims 10,20,30
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandres/cli/config.hpp"
#include "bandres/cli/presets.hpp"
#include "bandres/cli/report.hpp"
#include "bandres/errors.hpp"

namespace {

using namespace bandres;
using namespace bandres::cli;

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string format = "csv";
    std::string out;
    std::optional<double> tol;
    std::optional<int> max_iters;
    bool parallel = false;
};

void apply_common(ProblemConfig& c, const CommonOptions& o) {
    if (o.tol) c.iteration.tol = *o.tol;
    if (o.max_iters) c.iteration.max_iters = *o.max_iters;
    c.validate();
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    for (const std::string& part : cli::detail::split(text, ',')) dims.push_back(cli::detail::parse_int("dims", part));
    return dims;
}

int emit(const Report& report, const CommonOptions& o) {
    const std::string body = emit_table(report, format_from_string(o.format));
    if (o.out.empty())
        std::cout << body;
    else
        write_atomic(o.out, body);
    for (const ReportCase& c : report.cases)
        if (c.failed_steps > 0)
            std::cerr << "bandres: " << (c.label.empty() ? "scan" : c.label) << ": " << c.failed_steps << " of "
                      << c.steps << " grid points did not converge\n";
    if (report.numerically_failed()) {
        std::cerr << "bandres: every grid point of a scan failed\n";
        return kExitNumerical;
    }
    return 0;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--format", o.format, "csv, json or text")->check(CLI::IsMember({"csv", "json", "text"}));
    cmd->add_option("--out", o.out, "write the report here instead of stdout");
    cmd->add_option("--tol", o.tol, "relative convergence tolerance");
    cmd->add_option("--max-iters", o.max_iters, "iteration cap per shift");
    cmd->add_flag("--parallel", o.parallel, "solve grid points concurrently");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complex-basis band-matrix eigenvalue scans"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string config_path;
    std::string preset_name;
    std::vector<std::string> overrides;
    std::string dims_text;

    CLI::App* run = app.add_subcommand("run", "run a config file");
    run->add_option("config", config_path, "config file")->required();
    add_common(run, opts);

    CLI::App* preset = app.add_subcommand("preset", "run a named preset");
    preset->add_option("name", preset_name, "preset name")->required();
    preset->add_option("--set", overrides, "key=value override; one key may take a comma list");
    add_common(preset, opts);

    CLI::App* sweep = app.add_subcommand("sweep-dims", "repeat a scan at several basis dimensions");
    sweep->add_option("config", config_path, "config file");
    sweep->add_option("--preset", preset_name, "preset name instead of a config file");
    sweep->add_option("--set", overrides, "preset override key=value");
    sweep->add_option("--dims", dims_text, "comma-separated ascending dimensions")->required();
    add_common(sweep, opts);

    CLI::App* list = app.add_subcommand("presets", "list preset names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*list) {
            for (const std::string& n : preset_names()) std::cout << n << "\n";
            return 0;
        }
        if (*run) {
            ProblemConfig c = load_config(config_path);
            apply_common(c, opts);
            return emit(run_config(c, opts.parallel), opts);
        }
        if (*preset) {
            std::vector<LabeledConfig> configs = make_preset(preset_name, overrides);
            for (LabeledConfig& lc : configs) apply_common(lc.config, opts);
            return emit(run_configs(configs, opts.parallel), opts);
        }
        if (*sweep) {
            if (config_path.empty() == preset_name.empty())
                throw ConfigError("sweep-dims needs either a config file or --preset");
            if (!overrides.empty() && preset_name.empty()) throw ConfigError("--set applies to --preset only");
            ProblemConfig c;
            if (!config_path.empty()) {
                c = load_config(config_path);
            } else {
                std::vector<LabeledConfig> configs = make_preset(preset_name, overrides);
                if (configs.size() != 1) throw ConfigError("sweep-dims takes a single preset configuration");
                c = configs.front().config;
            }
            apply_common(c, opts);
            std::vector<int> dims;
            try {
                dims = parse_dims(dims_text);
                return emit(run_sweep(c, dims, opts.parallel), opts);
            } catch (const std::invalid_argument& ex) {
                throw ConfigError(ex.what());
            }
        }
    } catch (const ConfigError& ex) {
        std::cerr << "bandres: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "bandres: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "bandres: numerical failure: " << ex.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
