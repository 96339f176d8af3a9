#ifndef ARO_ORLIB_HPP
#define ARO_ORLIB_HPP

// OR-Library portfolio benchmark files.
//
// Universe files ("portN"):
//     N
//     mean_1 stddev_1
//     ...
//     mean_N stddev_N
//     i j rho_ij          (1-based, every pair i <= j)
//
// Frontier files ("portefN"): whitespace-separated (mean_return, variance)
// pairs, one per line in the published files.

#include <aro/error.hpp>
#include <aro/numfmt.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aro {

namespace detail {

struct Token {
    std::string_view text;
    std::size_t line;
};

inline std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> tokens;
    std::size_t line = 1;
    std::size_t pos = 0;
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    };
    while (pos < text.size()) {
        const char c = text[pos];
        if (c == '\n') {
            ++line;
            ++pos;
            continue;
        }
        if (is_space(c)) {
            ++pos;
            continue;
        }
        const std::size_t start = pos;
        while (pos < text.size() && !is_space(text[pos])) {
            ++pos;
        }
        tokens.push_back({text.substr(start, pos - start), line});
    }
    return tokens;
}

inline double to_real(const Token& t)
{
    if (auto v = parse_double(t.text); v && std::isfinite(*v)) {
        return *v;
    }
    throw ParseError("expected a number, got '" + std::string(t.text) + "'", t.line);
}

inline long long to_integer(const Token& t)
{
    if (auto v = parse_integer(t.text)) {
        return *v;
    }
    throw ParseError("expected an integer, got '" + std::string(t.text) + "'", t.line);
}

} // namespace detail

struct CorrelationEntry {
    int i = 0; // 1-based
    int j = 0; // 1-based
    double rho = 0.0;

    bool operator==(const CorrelationEntry&) const = default;
};

/// Raw contents of a universe file, before the covariance is assembled.
struct UniverseData {
    int n_assets = 0;
    std::vector<double> mean_returns;
    std::vector<double> stddevs;
    std::vector<CorrelationEntry> correlations;
};

inline UniverseData parse_universe(std::string_view text)
{
    const auto tokens = detail::tokenize(text);
    if (tokens.empty()) {
        throw ParseError("empty universe file", 1);
    }
    UniverseData data;
    const long long n = detail::to_integer(tokens[0]);
    if (n < 2) {
        throw ValidationError("universe needs at least 2 assets, got " + std::to_string(n));
    }
    const auto count = static_cast<std::size_t>(n);
    if (tokens.size() < 1 + 2 * count) {
        throw IncompleteDataError("expected " + std::to_string(n)
                                  + " (mean, stddev) pairs, file ends early");
    }
    data.n_assets = static_cast<int>(n);
    data.mean_returns.reserve(count);
    data.stddevs.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const auto& mt = tokens[1 + 2 * k];
        const auto& st = tokens[2 + 2 * k];
        data.mean_returns.push_back(detail::to_real(mt));
        const double s = detail::to_real(st);
        if (s < 0.0) {
            throw ValidationError("line " + std::to_string(st.line)
                                  + ": negative standard deviation");
        }
        data.stddevs.push_back(s);
    }

    const std::size_t first = 1 + 2 * count;
    const std::size_t rest = tokens.size() - first;
    if (rest % 3 != 0) {
        throw IncompleteDataError("trailing correlation entry is incomplete (line "
                                  + std::to_string(tokens.back().line) + ")");
    }
    std::vector<char> seen(count * count, 0);
    data.correlations.reserve(rest / 3);
    for (std::size_t k = first; k < tokens.size(); k += 3) {
        const long long i = detail::to_integer(tokens[k]);
        const long long j = detail::to_integer(tokens[k + 1]);
        const double rho = detail::to_real(tokens[k + 2]);
        if (i < 1 || i > n || j < 1 || j > n) {
            throw IndexError("line " + std::to_string(tokens[k].line) + ": asset index ("
                             + std::to_string(i) + ", " + std::to_string(j)
                             + ") outside [1, " + std::to_string(n) + "]");
        }
        data.correlations.push_back({static_cast<int>(i), static_cast<int>(j), rho});
        const auto a = static_cast<std::size_t>(std::min(i, j) - 1);
        const auto b = static_cast<std::size_t>(std::max(i, j) - 1);
        seen[a * count + b] = 1;
    }
    for (std::size_t a = 0; a < count; ++a) {
        for (std::size_t b = a; b < count; ++b) {
            if (!seen[a * count + b]) {
                throw IncompleteDataError("missing correlation for pair (" + std::to_string(a + 1)
                                          + ", " + std::to_string(b + 1) + ")");
            }
        }
    }
    return data;
}

/// sigma_ij = rho_ij * s_i * s_j, mirrored. Entries may list either triangle.
inline Eigen::MatrixXd build_covariance(const std::vector<double>& stddevs,
                                        const std::vector<CorrelationEntry>& entries)
{
    const auto n = static_cast<Eigen::Index>(stddevs.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
    std::vector<char> seen(static_cast<std::size_t>(n * n), 0);
    for (const auto& e : entries) {
        if (e.i < 1 || e.i > n || e.j < 1 || e.j > n) {
            throw IndexError("correlation index (" + std::to_string(e.i) + ", "
                             + std::to_string(e.j) + ") out of range");
        }
        if (std::abs(e.rho) > 1.0 + 1e-9) {
            throw ValidationError("correlation " + format_double(e.rho) + " for pair ("
                                  + std::to_string(e.i) + ", " + std::to_string(e.j)
                                  + ") outside [-1, 1]");
        }
        const Eigen::Index a = std::min(e.i, e.j) - 1;
        const Eigen::Index b = std::max(e.i, e.j) - 1;
        const auto sa = stddevs[static_cast<std::size_t>(a)];
        const auto sb = stddevs[static_cast<std::size_t>(b)];
        if (a == b) {
            if (std::abs(e.rho - 1.0) > 1e-9) {
                throw ValidationError("diagonal correlation for asset " + std::to_string(a + 1)
                                      + " is " + format_double(e.rho) + ", expected 1");
            }
            cov(a, a) = sa * sa;
        } else {
            const double sigma = e.rho * sa * sb;
            cov(a, b) = sigma;
            cov(b, a) = sigma;
        }
        seen[static_cast<std::size_t>(a * n + b)] = 1;
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a; b < n; ++b) {
            if (!seen[static_cast<std::size_t>(a * n + b)]) {
                throw IncompleteDataError("no correlation for pair (" + std::to_string(a + 1)
                                          + ", " + std::to_string(b + 1) + ")");
            }
        }
    }
    return cov;
}

/// N assets with mean returns, standard deviations and covariance.
/// Immutable once built; share freely between concurrent solver runs.
class AssetUniverse {
public:
    AssetUniverse(std::vector<double> mean_returns, std::vector<double> stddevs,
                  Eigen::MatrixXd correlation)
        : mean_(std::move(mean_returns)), stddev_(std::move(stddevs)),
          correlation_(std::move(correlation))
    {
        const auto n = mean_.size();
        if (n < 2) {
            throw ValidationError("universe needs at least 2 assets");
        }
        if (stddev_.size() != n || correlation_.rows() != static_cast<Eigen::Index>(n)
            || correlation_.cols() != static_cast<Eigen::Index>(n)) {
            throw ValidationError("universe dimensions disagree");
        }
        std::vector<CorrelationEntry> entries;
        entries.reserve(n * (n + 1) / 2);
        for (std::size_t i = 0; i < n; ++i) {
            if (!(stddev_[i] >= 0.0)) {
                throw ValidationError("negative standard deviation for asset "
                                      + std::to_string(i + 1));
            }
            for (std::size_t j = i; j < n; ++j) {
                entries.push_back({static_cast<int>(i + 1), static_cast<int>(j + 1),
                                   correlation_(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(j))});
            }
        }
        covariance_ = build_covariance(stddev_, entries);
        for (Eigen::Index i = 0; i < correlation_.rows(); ++i) {
            for (Eigen::Index j = 0; j < i; ++j) {
                correlation_(i, j) = correlation_(j, i);
            }
        }
    }

    static AssetUniverse from_data(const UniverseData& data)
    {
        const auto n = static_cast<Eigen::Index>(data.n_assets);
        Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(n, n);
        // Validate first so errors name the file's entries.
        (void)build_covariance(data.stddevs, data.correlations);
        for (const auto& e : data.correlations) {
            rho(e.i - 1, e.j - 1) = e.rho;
            rho(e.j - 1, e.i - 1) = e.rho;
        }
        return AssetUniverse(data.mean_returns, data.stddevs, std::move(rho));
    }

    static AssetUniverse from_text(std::string_view text)
    {
        return from_data(parse_universe(text));
    }

    int size() const noexcept { return static_cast<int>(mean_.size()); }

    /// 0-based accessors.
    double mean(int i) const { return mean_[static_cast<std::size_t>(i)]; }
    double stddev(int i) const { return stddev_[static_cast<std::size_t>(i)]; }
    double covariance(int i, int j) const { return covariance_(i, j); }

    const std::vector<double>& mean_returns() const noexcept { return mean_; }
    const std::vector<double>& stddevs() const noexcept { return stddev_; }
    const Eigen::MatrixXd& covariance_matrix() const noexcept { return covariance_; }
    const Eigen::MatrixXd& correlation_matrix() const noexcept { return correlation_; }

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
    Eigen::MatrixXd correlation_;
    Eigen::MatrixXd covariance_;
};

/// Writes `u` in universe-file format; parse_universe reads it back exactly.
inline std::string format_universe(const AssetUniverse& u)
{
    std::string out = std::to_string(u.size()) + "\n";
    for (int i = 0; i < u.size(); ++i) {
        out += " " + format_double(u.mean(i)) + " " + format_double(u.stddev(i)) + "\n";
    }
    for (int i = 0; i < u.size(); ++i) {
        for (int j = i; j < u.size(); ++j) {
            out += " " + std::to_string(i + 1) + " " + std::to_string(j + 1) + " "
                   + format_double(u.correlation_matrix()(i, j)) + "\n";
        }
    }
    return out;
}

struct CovarianceDiagnostics {
    double max_asymmetry = 0.0;
    double max_diagonal_mismatch = 0.0; // relative |sigma_ii - s_i^2| / s_i^2
    double min_eigenvalue = 0.0;

    bool symmetric() const noexcept { return max_asymmetry == 0.0; }
    /// Measured correlation matrices can be marginally indefinite; below
    /// -1e-8 is worth a warning, not a failure.
    bool positive_semidefinite() const noexcept { return min_eigenvalue >= -1e-8; }
};

inline CovarianceDiagnostics diagnose_covariance(const AssetUniverse& u)
{
    const auto& cov = u.covariance_matrix();
    CovarianceDiagnostics d;
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
        const double s2 = u.stddev(static_cast<int>(i)) * u.stddev(static_cast<int>(i));
        if (s2 > 0.0) {
            d.max_diagonal_mismatch =
                std::max(d.max_diagonal_mismatch, std::abs(cov(i, i) - s2) / s2);
        }
        for (Eigen::Index j = 0; j < i; ++j) {
            d.max_asymmetry = std::max(d.max_asymmetry, std::abs(cov(i, j) - cov(j, i)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues().minCoeff();
    return d;
}

struct FrontierKnot {
    double mean_return = 0.0;
    double variance = 0.0;
    double stddev = 0.0;
};

/// Unconstrained efficient frontier, sorted strictly ascending by return.
/// A second view ordered by stddev serves the return-for-risk lookups.
class ReferenceFrontier {
public:
    explicit ReferenceFrontier(const std::vector<std::pair<double, double>>& return_variance)
    {
        if (return_variance.size() < 2) {
            throw InsufficientDataError("reference frontier needs at least 2 points, got "
                                        + std::to_string(return_variance.size()));
        }
        std::vector<FrontierKnot> raw;
        raw.reserve(return_variance.size());
        for (const auto& [r, v] : return_variance) {
            if (!std::isfinite(r) || !std::isfinite(v)) {
                throw ValidationError("non-finite frontier point");
            }
            if (v < 0.0) {
                throw ValidationError("negative variance " + format_double(v)
                                      + " in reference frontier");
            }
            raw.push_back({r, v, std::sqrt(v)});
        }
        input_count_ = raw.size();

        // Duplicate returns keep the smaller variance.
        std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
            return a.mean_return < b.mean_return
                   || (a.mean_return == b.mean_return && a.variance < b.variance);
        });
        for (const auto& k : raw) {
            if (by_return_.empty() || by_return_.back().mean_return != k.mean_return) {
                by_return_.push_back(k);
            }
        }

        // Duplicate stddevs keep the larger return.
        std::vector<FrontierKnot> s = by_return_;
        std::stable_sort(s.begin(), s.end(), [](const auto& a, const auto& b) {
            return a.stddev < b.stddev || (a.stddev == b.stddev && a.mean_return > b.mean_return);
        });
        for (const auto& k : s) {
            if (by_stddev_.empty() || by_stddev_.back().stddev != k.stddev) {
                by_stddev_.push_back(k);
            }
        }

        if (by_return_.size() < 2 || by_stddev_.size() < 2) {
            throw InsufficientDataError("reference frontier has fewer than 2 distinct points");
        }
    }

    const std::vector<FrontierKnot>& points() const noexcept { return by_return_; }
    const std::vector<FrontierKnot>& points_by_stddev() const noexcept { return by_stddev_; }
    std::size_t size() const noexcept { return by_return_.size(); }
    /// Number of pairs in the source file, before duplicate collapsing.
    std::size_t input_count() const noexcept { return input_count_; }

private:
    std::vector<FrontierKnot> by_return_;
    std::vector<FrontierKnot> by_stddev_;
    std::size_t input_count_ = 0;
};

inline ReferenceFrontier parse_reference_frontier(std::string_view text)
{
    const auto tokens = detail::tokenize(text);
    if (tokens.size() % 2 != 0) {
        throw IncompleteDataError("frontier file has an unpaired value at line "
                                  + std::to_string(tokens.back().line));
    }
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(tokens.size() / 2);
    for (std::size_t k = 0; k < tokens.size(); k += 2) {
        const double r = detail::to_real(tokens[k]);
        const double v = detail::to_real(tokens[k + 1]);
        if (v < 0.0) {
            throw ValidationError("line " + std::to_string(tokens[k + 1].line)
                                  + ": negative variance");
        }
        pairs.emplace_back(r, v);
    }
    return ReferenceFrontier(pairs);
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline AssetUniverse load_universe(const std::filesystem::path& path)
{
    const auto text = read_text_file(path);
    try {
        return AssetUniverse::from_text(text);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

inline ReferenceFrontier load_reference_frontier(const std::filesystem::path& path)
{
    const auto text = read_text_file(path);
    try {
        return parse_reference_frontier(text);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

} // namespace aro

#endif // ARO_ORLIB_HPP
