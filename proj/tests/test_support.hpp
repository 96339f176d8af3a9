#ifndef ARO_TEST_SUPPORT_HPP
#define ARO_TEST_SUPPORT_HPP

#include <aro/orlib.hpp>
#include <aro/random.hpp>

#include <cstdint>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace aro::test {

/// Replays fixed draws so tests can force particular mutation branches.
struct ScriptedSource {
    std::deque<double> reals;
    std::deque<std::int64_t> integers;

    double uniform01()
    {
        if (reals.empty()) {
            throw std::logic_error("scripted source ran out of reals");
        }
        const double v = reals.front();
        reals.pop_front();
        return v;
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        if (integers.empty()) {
            throw std::logic_error("scripted source ran out of integers");
        }
        const auto v = integers.front();
        integers.pop_front();
        if (v < lo || v > hi) {
            throw std::logic_error("scripted integer outside requested range");
        }
        return v;
    }
};

static_assert(UniformSource<ScriptedSource>);

inline std::filesystem::path data_dir()
{
    return ARO_TEST_DATA_DIR;
}

/// OR-Library directory from the environment, if it holds the files.
inline std::optional<std::filesystem::path> orlib_dir()
{
    const char* dir = std::getenv("ARO_ORLIB_DIR");
    if (dir == nullptr || *dir == '\0') {
        return std::nullopt;
    }
    const std::filesystem::path p(dir);
    for (const char* name : {"port1.txt", "port1"}) {
        if (std::filesystem::is_regular_file(p / name)) {
            return p;
        }
    }
    return std::nullopt;
}

/// Five assets, returns 0.10..0.30, stddevs 0.20..0.60, Toeplitz
/// correlations (1, 0.3, 0.2, 0.1, 0).
inline constexpr const char* five_asset_universe = R"(5
0.10 0.20
0.15 0.30
0.20 0.40
0.25 0.50
0.30 0.60
1 1 1.0
1 2 0.3
1 3 0.2
1 4 0.1
1 5 0.0
2 2 1.0
2 3 0.3
2 4 0.2
2 5 0.1
3 3 1.0
3 4 0.3
3 5 0.2
4 4 1.0
4 5 0.3
5 5 1.0
)";

/// Random one-factor universe of n assets (positive definite correlations).
template <typename Rng>
AssetUniverse random_universe(int n, Rng& rng)
{
    std::vector<double> mu, sd, beta;
    for (int i = 0; i < n; ++i) {
        mu.push_back(-0.005 + 0.02 * rng.uniform01());
        sd.push_back(0.01 + 0.09 * rng.uniform01());
        beta.push_back(0.9 * rng.uniform01());
    }
    Eigen::MatrixXd rho(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            rho(i, j) = i == j ? 1.0 : beta[static_cast<std::size_t>(i)] * beta[static_cast<std::size_t>(j)];
        }
    }
    return AssetUniverse(mu, sd, rho);
}

} // namespace aro::test

#endif // ARO_TEST_SUPPORT_HPP
