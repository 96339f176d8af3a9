#ifndef ARO_FRONTIER_HPP
#define ARO_FRONTIER_HPP

// Heuristic efficient frontier tracing and its deviation from a reference
// (unconstrained) frontier.

#include <aro/aro.hpp>
#include <aro/error.hpp>
#include <aro/orlib.hpp>
#include <aro/portfolio.hpp>
#include <aro/random.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace aro {

struct FrontierPoint {
    std::size_t lambda_index = 0;
    double lambda = 0.0;
    double expected_return = 0.0;
    double stddev = 0.0;
    double variance = 0.0;
    Portfolio portfolio;
};

/// lambda_e = e / (E - 1), e = 0 .. E-1.
inline std::vector<double> lambda_grid(std::size_t points)
{
    if (points < 2) {
        throw ConfigError("a frontier needs at least 2 points, got " + std::to_string(points));
    }
    std::vector<double> grid(points);
    for (std::size_t e = 0; e < points; ++e) {
        grid[e] = static_cast<double>(e) / static_cast<double>(points - 1);
    }
    grid.back() = 1.0;
    return grid;
}

struct NoRunObserver {
    void operator()(std::size_t, double, const AroResult&) const noexcept {}
};

struct TraceOptions {
    std::size_t points = 50;
    /// Solver runs in flight at once; 0 picks hardware concurrency.
    unsigned threads = 1;
};

/// One ARO run per lambda on the uniform grid, each on its own split of
/// params.seed. The result is sorted by expected return (ties by lambda) and
/// does not depend on the thread count. `observer(lambda_index, lambda,
/// result)` sees every raw run; with threads > 1 it is called concurrently.
template <typename Observer = NoRunObserver>
std::vector<FrontierPoint> trace_frontier(const AssetUniverse& u, int k, const Bounds& bounds,
                                          const AroParams& params, const TraceOptions& options,
                                          Observer&& observer = {})
{
    const auto grid = lambda_grid(options.points);
    check_configuration(u, k, bounds, params);

    std::vector<FrontierPoint> points(grid.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t e = next++; e < grid.size(); e = next++) {
            try {
                RandomStream rng = RandomStream::split(params.seed, e);
                AroResult run = aro_run(u, k, bounds, RiskAversion(grid[e]), params, rng);
                observer(e, grid[e], run);
                const Moments m = portfolio_moments(run.best, u);
                const double variance = std::max(m.variance, 0.0);
                points[e] = FrontierPoint{e, grid[e], m.expected_return, std::sqrt(variance),
                                          variance, std::move(run.best)};
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = grid.size();
            }
        }
    };

    unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::stable_sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.expected_return < b.expected_return;
    });
    return points;
}

enum class Axis {
    by_return, // query a return, get the reference stddev
    by_stddev, // query a stddev, get the reference return
};

struct Interpolated {
    double value = 0.0;
    bool extrapolated = false;
};

/// Piecewise-linear lookup on the reference frontier. Queries outside the
/// knot range extend the nearest end segment and are flagged.
inline Interpolated interpolate_frontier(const ReferenceFrontier& ref, double query, Axis axis)
{
    const auto& knots = axis == Axis::by_return ? ref.points() : ref.points_by_stddev();
    const auto x = [axis](const FrontierKnot& k) {
        return axis == Axis::by_return ? k.mean_return : k.stddev;
    };
    const auto y = [axis](const FrontierKnot& k) {
        return axis == Axis::by_return ? k.stddev : k.mean_return;
    };

    auto upper = std::lower_bound(knots.begin(), knots.end(), query,
                                  [&](const FrontierKnot& k, double q) { return x(k) < q; });
    if (upper != knots.end() && x(*upper) == query) {
        return {y(*upper), false};
    }
    const bool extrapolated = upper == knots.begin() || upper == knots.end();
    if (upper == knots.begin()) {
        ++upper;
    } else if (upper == knots.end()) {
        --upper;
    }
    const auto lower = upper - 1;
    const double t = (query - x(*lower)) / (x(*upper) - x(*lower));
    return {y(*lower) + t * (y(*upper) - y(*lower)), extrapolated};
}

struct PointError {
    double stddev_error = 0.0;     // percent
    double return_error = 0.0;     // percent
    double percentage_error = 0.0; // min of the two
    double reference_stddev = 0.0; // s* at the point's return
    double reference_return = 0.0; // R* at the point's stddev
    bool extrapolated = false;
};

inline PointError point_errors(double stddev, double expected_return, const ReferenceFrontier& ref)
{
    const auto s_ref = interpolate_frontier(ref, expected_return, Axis::by_return);
    const auto r_ref = interpolate_frontier(ref, stddev, Axis::by_stddev);
    if (s_ref.value == 0.0 || r_ref.value == 0.0) {
        throw DegenerateReferenceError("reference frontier interpolates to 0 at ("
                                       + format_double(stddev) + ", "
                                       + format_double(expected_return) + ")");
    }
    PointError e;
    e.reference_stddev = s_ref.value;
    e.reference_return = r_ref.value;
    e.stddev_error = 100.0 * std::abs((stddev - s_ref.value) / s_ref.value);
    e.return_error = 100.0 * std::abs((expected_return - r_ref.value) / r_ref.value);
    e.percentage_error = std::min(e.stddev_error, e.return_error);
    e.extrapolated = s_ref.extrapolated || r_ref.extrapolated;
    return e;
}

inline PointError point_errors(const FrontierPoint& pt, const ReferenceFrontier& ref)
{
    return point_errors(pt.stddev, pt.expected_return, ref);
}

struct ErrorReport {
    std::vector<PointError> per_point;
    double mean_percentage_error = 0.0;

    std::vector<bool> extrapolation_flags() const
    {
        std::vector<bool> flags;
        flags.reserve(per_point.size());
        for (const auto& e : per_point) {
            flags.push_back(e.extrapolated);
        }
        return flags;
    }
};

inline ErrorReport mean_percentage_error(const std::vector<FrontierPoint>& points,
                                         const ReferenceFrontier& ref)
{
    if (points.empty()) {
        throw EmptyInputError("no frontier points to score");
    }
    ErrorReport report;
    report.per_point.reserve(points.size());
    double sum = 0.0;
    for (const auto& pt : points) {
        report.per_point.push_back(point_errors(pt, ref));
        sum += report.per_point.back().percentage_error;
    }
    report.mean_percentage_error = sum / static_cast<double>(points.size());
    return report;
}

/// Published mean percentage errors for K=10, lower 0.01, upper 1 on the five
/// OR-Library indices. GA/SA/TS from Chang et al. (2000), PSO from Deng et
/// al. (2012); ARO is the value the algorithm here is compared against.
struct PublishedErrors {
    std::string_view index_name;
    std::string_view file_stem; // OR-Library file number, "port<stem>"
    int n_assets;
    double ga;
    double sa;
    double ts;
    double pso;
    double aro;
};

inline constexpr std::array<PublishedErrors, 5> published_errors{{
    {"Hang Seng", "1", 31, 1.0974, 1.0957, 1.1217, 1.0953, 1.4181},
    {"DAX 100", "2", 85, 2.5424, 2.9297, 3.3049, 2.5417, 1.3190},
    {"FTSE 100", "3", 89, 1.1076, 1.4623, 1.1217, 1.06283, 0.8151},
    {"S&P 100", "4", 98, 1.9328, 3.0696, 3.3092, 1.6890, 1.4468},
    {"Nikkei", "5", 225, 0.7961, 0.6732, 0.8975, 0.6870, 0.6179},
}};

inline constexpr PublishedErrors published_average{"Average", "", 0,      1.4953,
                                                   1.8461,    2.0483, 1.4152, 1.1234};

inline const PublishedErrors* find_published(std::string_view index_name)
{
    for (const auto& row : published_errors) {
        if (row.index_name == index_name) {
            return &row;
        }
    }
    return nullptr;
}

struct BenchmarkDataset {
    std::string name;
    const AssetUniverse* universe = nullptr;
    const ReferenceFrontier* reference = nullptr;
};

struct BenchmarkRow {
    std::string name;
    int n_assets = 0;
    const PublishedErrors* published = nullptr;
    std::optional<double> aro_error; // empty when the row failed
    std::string failure;
    std::vector<FrontierPoint> points;
    ErrorReport report;
    double seconds = 0.0;
    long bud_evaluations = 0;
};

struct BenchmarkTable {
    std::vector<BenchmarkRow> rows;

    /// Mean over the rows; empty if any row failed.
    std::optional<double> average() const
    {
        if (rows.empty()) {
            return std::nullopt;
        }
        double sum = 0.0;
        for (const auto& r : rows) {
            if (!r.aro_error) {
                return std::nullopt;
            }
            sum += *r.aro_error;
        }
        return sum / static_cast<double>(rows.size());
    }
};

/// Trace and score one dataset. Errors are captured in the row, not thrown.
inline BenchmarkRow run_benchmark_row(const BenchmarkDataset& data, int k, double lower,
                                      double upper, const AroParams& params,
                                      const TraceOptions& options)
{
    BenchmarkRow row;
    row.name = data.name;
    row.published = find_published(data.name);
    try {
        if (data.universe == nullptr || data.reference == nullptr) {
            throw InputError("dataset not loaded");
        }
        row.n_assets = data.universe->size();
        const auto start = std::chrono::steady_clock::now();
        const Bounds bounds = Bounds::uniform(data.universe->size(), lower, upper);
        std::mutex count_mutex;
        row.points = trace_frontier(
            *data.universe, k, bounds, params, options,
            [&](std::size_t, double, const AroResult& r) {
                std::lock_guard lock(count_mutex);
                row.bud_evaluations += r.bud_evaluations;
            });
        row.report = mean_percentage_error(row.points, *data.reference);
        row.aro_error = row.report.mean_percentage_error;
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (const std::exception& e) {
        row.aro_error.reset();
        row.failure = e.what();
    }
    return row;
}

/// Seed for dataset d of a benchmark started from `seed`. Mixing before the
/// offset keeps (seed, d) and (seed + 1, d - 1) apart.
constexpr std::uint64_t dataset_seed(std::uint64_t seed, std::size_t d) noexcept
{
    return splitmix64(splitmix64(seed) + d);
}

/// One row per dataset, each traced from dataset_seed(params.seed, d).
inline BenchmarkTable benchmark_table(const std::vector<BenchmarkDataset>& datasets, int k,
                                      double lower, double upper, const AroParams& params,
                                      const TraceOptions& options)
{
    BenchmarkTable table;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        AroParams p = params;
        p.seed = dataset_seed(params.seed, d);
        table.rows.push_back(run_benchmark_row(datasets[d], k, lower, upper, p, options));
    }
    return table;
}

} // namespace aro

#endif // ARO_FRONTIER_HPP
