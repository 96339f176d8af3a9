// aro: trace cardinality-constrained efficient frontiers with ARO and score
// them against OR-Library reference frontiers.

#include <aro/cli.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

namespace {

using aro::cli::RunConfig;

// Flags land in `flags`; only the ones actually given are copied over the
// config file values, so precedence is flags > --config > defaults.
struct FlagSet {
    RunConfig flags;
    std::string eq18 = "monotone";
    std::string config_file;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> given;

    template <typename T>
    void add(CLI::App& app, const std::string& name, T RunConfig::*field, const std::string& help)
    {
        auto* opt = app.add_option(name, flags.*field, help);
        given.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
    }

    void add_solver_options(CLI::App& app)
    {
        add(app, "-K", &RunConfig::k, "assets held in every portfolio (default 10)");
        add(app, "--epsilon", &RunConfig::epsilon, "lower weight bound per held asset (default 0.01)");
        add(app, "--delta", &RunConfig::delta, "upper weight bound per held asset (default 1)");
        add(app, "--tmax", &RunConfig::t_max, "ARO iterations per frontier point (default 20000)");
        add(app, "--points", &RunConfig::points, "frontier points, lambda grid size (default 50)");
        add(app, "--seed", &RunConfig::seed, "random seed (default 1)");
        add(app, "--out", &RunConfig::output_dir, "output directory (default .)");
        add(app, "--threads", &RunConfig::threads, "concurrent solver runs, 0 = all cores");
        auto* eq = app.add_option("--eq18", eq18, "selection pressure form: monotone|literal")
                       ->check(CLI::IsMember({"monotone", "literal"}));
        given.emplace_back(eq, [this](RunConfig& c) {
            c.pressure = *aro::cli::parse_pressure(eq18);
        });
        auto* timing = app.add_flag("--timing", flags.timing,
                                    "append wall-clock comment lines to errors files");
        given.emplace_back(timing, [this](RunConfig& c) { c.timing = flags.timing; });
        app.add_option("--config", config_file, "key=value file; flags override it");
    }

    RunConfig resolve() const
    {
        RunConfig c;
        if (!config_file.empty()) {
            aro::cli::apply_config_text(aro::read_text_file(config_file), c);
        }
        for (const auto& [opt, apply] : given) {
            if (opt->count() > 0) {
                apply(c);
            }
        }
        const char* no_color = std::getenv("NO_COLOR");
        c.color = (no_color == nullptr || *no_color == '\0') && isatty(STDOUT_FILENO);
        return c;
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cardinality-constrained portfolio selection with asexual reproduction "
                 "optimization"};
    app.require_subcommand(1);

    FlagSet frontier_flags;
    auto* frontier = app.add_subcommand("frontier", "trace one frontier and score it");
    frontier_flags.add(*frontier, "--data", &RunConfig::dataset_path, "OR-Library portN file");
    frontier_flags.add(*frontier, "--frontier", &RunConfig::frontier_path,
                       "OR-Library portefN file");
    frontier_flags.add_solver_options(*frontier);

    FlagSet bench_flags;
    auto* bench = app.add_subcommand("benchmark", "run all five OR-Library datasets");
    bench_flags.add(*bench, "--data-dir", &RunConfig::data_dir,
                    "directory holding port1..5 and portef1..5");
    bench_flags.add_solver_options(*bench);

    std::string validate_data, validate_frontier;
    std::size_t expected_points = 2000;
    auto* validate = app.add_subcommand("validate", "structural checks on a dataset pair");
    validate->add_option("--data", validate_data, "OR-Library portN file")->required();
    validate->add_option("--frontier", validate_frontier, "OR-Library portefN file")->required();
    validate->add_option("--expect-points", expected_points,
                         "expected frontier size, 0 to skip (default 2000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : aro::cli::exit_config_error;
    }

    try {
        if (frontier->parsed()) {
            const RunConfig config = frontier_flags.resolve();
            if (config.dataset_path.empty() || config.frontier_path.empty()) {
                std::cerr << "error: --data and --frontier are required\n";
                return aro::cli::exit_config_error;
            }
            return aro::cli::cmd_frontier(config, std::cout, std::cerr);
        }
        if (bench->parsed()) {
            const RunConfig config = bench_flags.resolve();
            if (config.data_dir.empty()) {
                std::cerr << "error: --data-dir is required\n";
                return aro::cli::exit_config_error;
            }
            return aro::cli::cmd_benchmark(config, std::cout, std::cerr);
        }
        return aro::cli::cmd_validate(validate_data, validate_frontier, expected_points, std::cout,
                                      std::cerr);
    } catch (const aro::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return aro::cli::exit_config_error;
    } catch (const aro::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return aro::cli::exit_input_error;
    }
}
