#ifndef ARO_CLI_HPP
#define ARO_CLI_HPP

// Subcommands of the `aro` tool. Each returns a process exit status:
// 0 success, 1 computed with failures, 2 input error, 3 configuration error.

#include <aro/aro.hpp>
#include <aro/error.hpp>
#include <aro/frontier.hpp>
#include <aro/numfmt.hpp>
#include <aro/orlib.hpp>
#include <aro/report.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace aro::cli {

enum ExitStatus : int {
    exit_success = 0,
    exit_partial_failure = 1,
    exit_input_error = 2,
    exit_config_error = 3,
};

struct RunConfig {
    std::filesystem::path dataset_path;
    std::filesystem::path frontier_path;
    std::filesystem::path data_dir; // benchmark: holds port1..5 and portef1..5
    int k = 10;
    double epsilon = 0.01;
    double delta = 1.0;
    long t_max = 20000;
    std::size_t points = 50;
    std::uint64_t seed = 1;
    PressureForm pressure = PressureForm::monotone;
    std::filesystem::path output_dir = ".";
    unsigned threads = 1;
    bool timing = false;
    bool color = false;

    AroParams aro_params() const
    {
        AroParams p;
        p.t_max = t_max;
        p.seed = seed;
        p.pressure = pressure;
        return p;
    }
};

inline std::optional<PressureForm> parse_pressure(std::string_view text)
{
    if (text == "monotone") {
        return PressureForm::monotone;
    }
    if (text == "literal") {
        return PressureForm::literal;
    }
    return std::nullopt;
}

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T config_number(std::string_view key, std::string_view value)
{
    if constexpr (std::is_floating_point_v<T>) {
        if (auto v = parse_double(value)) {
            return static_cast<T>(*v);
        }
    } else {
        if (auto v = parse_integer(value); v && *v >= 0) {
            return static_cast<T>(*v);
        }
    }
    throw ConfigError("config key '" + std::string(key) + "': bad value '" + std::string(value)
                      + "'");
}

} // namespace detail

/// Apply `key = value` lines onto `config`. Keys are the long flag names
/// (data, frontier, data-dir, K, epsilon, delta, tmax, points, seed, eq18,
/// out, threads, timing); '#' starts a comment.
inline void apply_config_text(std::string_view text, RunConfig& config)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key == "data") {
            config.dataset_path = std::string(value);
        } else if (key == "frontier") {
            config.frontier_path = std::string(value);
        } else if (key == "data-dir") {
            config.data_dir = std::string(value);
        } else if (key == "out") {
            config.output_dir = std::string(value);
        } else if (key == "K") {
            config.k = detail::config_number<int>(key, value);
        } else if (key == "epsilon") {
            config.epsilon = detail::config_number<double>(key, value);
        } else if (key == "delta") {
            config.delta = detail::config_number<double>(key, value);
        } else if (key == "tmax") {
            config.t_max = detail::config_number<long>(key, value);
        } else if (key == "points") {
            config.points = detail::config_number<std::size_t>(key, value);
        } else if (key == "seed") {
            config.seed = detail::config_number<std::uint64_t>(key, value);
        } else if (key == "threads") {
            config.threads = detail::config_number<unsigned>(key, value);
        } else if (key == "timing") {
            config.timing = value == "true" || value == "1";
        } else if (key == "eq18") {
            const auto form = parse_pressure(value);
            if (!form) {
                throw ConfigError("config key 'eq18' must be monotone or literal");
            }
            config.pressure = *form;
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '"
                              + std::string(key) + "'");
        }
    }
}

namespace detail {

inline std::string paint(bool color, std::string_view code, const std::string& text)
{
    if (!color) {
        return text;
    }
    return "\x1b[" + std::string(code) + "m" + text + "\x1b[0m";
}

inline void ensure_directory(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw InputError("cannot create output directory " + dir.string());
    }
}

} // namespace detail

/// Trace one frontier and write frontier.csv, errors.csv and frontier.svg.
inline int cmd_frontier(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    std::optional<AssetUniverse> universe;
    std::optional<ReferenceFrontier> reference;
    try {
        universe.emplace(load_universe(config.dataset_path));
        reference.emplace(load_reference_frontier(config.frontier_path));
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    std::vector<FrontierPoint> points;
    std::atomic<long> evaluations{0};
    const auto start = std::chrono::steady_clock::now();
    try {
        const Bounds bounds = Bounds::uniform(universe->size(), config.epsilon, config.delta);
        points = trace_frontier(*universe, config.k, bounds, config.aro_params(),
                                TraceOptions{config.points, config.threads},
                                [&evaluations](std::size_t, double, const AroResult& r) {
                                    evaluations += r.bud_evaluations;
                                });
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        const ErrorReport report = mean_percentage_error(points, *reference);
        detail::ensure_directory(config.output_dir);
        write_file_atomic(config.output_dir / "frontier.csv",
                          frontier_csv(points, report, config.k));
        write_file_atomic(config.output_dir / "errors.csv",
                          errors_csv(points, report, {evaluations.load(), seconds, config.timing}));
        write_file_atomic(config.output_dir / "frontier.svg",
                          frontier_svg(points, report, *reference,
                                       config.dataset_path.filename().string() + ", K="
                                           + std::to_string(config.k)));
        out << "mean percentage error: "
            << detail::paint(config.color, "1", format_double(report.mean_percentage_error))
            << '\n';
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_success;
}

/// port<n> / portef<n>, with or without a .txt extension.
inline std::filesystem::path find_orlib_file(const std::filesystem::path& dir,
                                             const std::string& stem)
{
    for (const auto& candidate : {stem + ".txt", stem}) {
        if (std::filesystem::is_regular_file(dir / candidate)) {
            return dir / candidate;
        }
    }
    return dir / (stem + ".txt");
}

/// Run all five OR-Library datasets and write table5.csv plus one errors
/// file per dataset. A dataset that fails is marked FAILED; the rest still run.
inline int cmd_benchmark(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        config.aro_params().validate();
        (void)lambda_grid(config.points);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    }

    BenchmarkTable table;
    for (std::size_t d = 0; d < published_errors.size(); ++d) {
        const auto& pub = published_errors[d];
        const std::string stem(pub.file_stem);
        BenchmarkRow row;
        try {
            const auto universe = load_universe(find_orlib_file(config.data_dir, "port" + stem));
            const auto reference =
                load_reference_frontier(find_orlib_file(config.data_dir, "portef" + stem));
            AroParams params = config.aro_params();
            params.seed = dataset_seed(config.seed, d);
            row = run_benchmark_row({std::string(pub.index_name), &universe, &reference},
                                    config.k, config.epsilon, config.delta, params,
                                    TraceOptions{config.points, config.threads});
            if (row.aro_error) {
                detail::ensure_directory(config.output_dir);
                write_file_atomic(config.output_dir / ("port" + stem + "_errors.csv"),
                                  errors_csv(row.points, row.report,
                                             {row.bud_evaluations, row.seconds, config.timing}));
            }
        } catch (const std::exception& e) {
            row.name = pub.index_name;
            row.published = &pub;
            row.aro_error.reset();
            row.failure = e.what();
        }
        if (!row.aro_error) {
            err << "warning: " << pub.index_name << " FAILED: " << row.failure << '\n';
        }
        out << pub.index_name << ": "
            << (row.aro_error ? format_double(*row.aro_error)
                              : detail::paint(config.color, "31", "FAILED"))
            << '\n';
        table.rows.push_back(std::move(row));
    }

    try {
        detail::ensure_directory(config.output_dir);
        write_file_atomic(config.output_dir / "table5.csv", benchmark_csv(table));
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    if (const auto avg = table.average()) {
        out << "Average: " << detail::paint(config.color, "1", format_double(*avg)) << '\n';
        return exit_success;
    }
    return exit_partial_failure;
}

/// Structural checks on a universe / frontier pair.
inline int cmd_validate(const std::filesystem::path& dataset_path,
                        const std::filesystem::path& frontier_path, std::size_t expected_points,
                        std::ostream& out, std::ostream& err)
{
    std::optional<AssetUniverse> universe;
    std::optional<ReferenceFrontier> reference;
    try {
        universe.emplace(load_universe(dataset_path));
        reference.emplace(load_reference_frontier(frontier_path));
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    bool ok = true;
    const auto& mu = universe->mean_returns();
    const auto& sd = universe->stddevs();
    out << "N=" << universe->size() << ", frontier points=" << reference->input_count() << '\n';
    out << "mean return range: [" << format_double(*std::min_element(mu.begin(), mu.end()))
        << ", " << format_double(*std::max_element(mu.begin(), mu.end())) << "]\n";
    out << "stddev range: [" << format_double(*std::min_element(sd.begin(), sd.end())) << ", "
        << format_double(*std::max_element(sd.begin(), sd.end())) << "]\n";
    out << "frontier return range: [" << format_double(reference->points().front().mean_return)
        << ", " << format_double(reference->points().back().mean_return) << "]\n";

    const auto diag = diagnose_covariance(*universe);
    out << "covariance max asymmetry: " << format_double(diag.max_asymmetry) << '\n';
    out << "covariance max diagonal mismatch: " << format_double(diag.max_diagonal_mismatch)
        << '\n';
    out << "covariance min eigenvalue: " << format_double(diag.min_eigenvalue) << '\n';
    if (!diag.symmetric() || diag.max_diagonal_mismatch > 1e-12) {
        err << "error: covariance matrix is not consistent\n";
        ok = false;
    }
    if (!diag.positive_semidefinite()) {
        err << "warning: covariance is indefinite (min eigenvalue "
            << format_double(diag.min_eigenvalue) << ")\n";
    }
    if (expected_points != 0 && reference->input_count() != expected_points) {
        err << "warning: frontier has " << reference->input_count() << " points, expected "
            << expected_points << '\n';
        ok = false;
    }
    return ok ? exit_success : exit_partial_failure;
}

} // namespace aro::cli

#endif // ARO_CLI_HPP
