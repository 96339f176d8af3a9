#ifndef ARO_PORTFOLIO_HPP
#define ARO_PORTFOLIO_HPP

// Cardinality- and bound-constrained mean-variance model.

#include <aro/error.hpp>
#include <aro/numfmt.hpp>
#include <aro/orlib.hpp>
#include <aro/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace aro {

/// A K-asset portfolio in 2K-vector form.
///
/// `indices` are 1-based asset ids. `genes` are the raw, non-negative share
/// values the search operators mutate; `weights` are the capital fractions
/// that repair_weights() derives from them. Position k of each vector
/// belongs to asset indices[k].
struct Portfolio {
    std::vector<int> indices;
    std::vector<double> genes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return indices.size(); }

    bool operator==(const Portfolio&) const = default;
};

/// Per-asset floor and ceiling on invested fraction.
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    static Bounds uniform(int n_assets, double lower, double upper)
    {
        Bounds b{std::vector<double>(static_cast<std::size_t>(n_assets), lower),
                 std::vector<double>(static_cast<std::size_t>(n_assets), upper)};
        b.validate();
        return b;
    }

    std::size_t size() const noexcept { return lower.size(); }

    void validate() const
    {
        if (lower.size() != upper.size()) {
            throw ConfigError("bounds: lower and upper lengths differ");
        }
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(0.0 <= lower[i] && lower[i] <= upper[i] && upper[i] <= 1.0)) {
                throw ConfigError("bounds for asset " + std::to_string(i + 1) + " must satisfy "
                                  "0 <= lower <= upper <= 1, got [" + format_double(lower[i])
                                  + ", " + format_double(upper[i]) + "]");
            }
        }
    }

    /// Any K-subset admits a feasible allocation iff K*max(lower) <= 1 <= K*min(upper).
    void check_cardinality(int k) const
    {
        if (lower.empty()) {
            throw ConfigError("bounds are empty");
        }
        const double max_lower = *std::max_element(lower.begin(), lower.end());
        const double min_upper = *std::min_element(upper.begin(), upper.end());
        if (k * max_lower > 1.0 + 1e-12 || k * min_upper < 1.0 - 1e-12) {
            throw InfeasibilityError("bounds [" + format_double(max_lower) + ", "
                                     + format_double(min_upper) + "] cannot hold "
                                     + std::to_string(k) + " assets summing to 1");
        }
    }
};

/// Risk-aversion weight lambda in [0, 1]: 1 minimises variance only, 0
/// maximises return only.
class RiskAversion {
public:
    explicit RiskAversion(double lambda) : lambda_(lambda)
    {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw ConfigError("lambda must lie in [0, 1], got " + format_double(lambda));
        }
    }

    double value() const noexcept { return lambda_; }

private:
    double lambda_;
};

struct Moments {
    double expected_return = 0.0;
    double variance = 0.0;
};

inline Moments portfolio_moments(const Portfolio& p, const AssetUniverse& u)
{
    Moments m;
    const auto& cov = u.covariance_matrix();
    const std::size_t k = p.size();
    for (std::size_t a = 0; a < k; ++a) {
        const int ia = p.indices[a] - 1;
        const double wa = p.weights[a];
        m.expected_return += wa * u.mean(ia);
        double row = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            row += p.weights[b] * cov(ia, p.indices[b] - 1);
        }
        m.variance += wa * row;
    }
    return m;
}

/// lambda * variance - (1 - lambda) * return. Lower is better.
inline double objective_value(const Moments& m, RiskAversion lambda) noexcept
{
    return lambda.value() * m.variance - (1.0 - lambda.value()) * m.expected_return;
}

inline double evaluate_objective(const Portfolio& p, const AssetUniverse& u, RiskAversion lambda)
{
    return objective_value(portfolio_moments(p, u), lambda);
}

/// Derive feasible weights from the genes.
///
/// Floors: w_i = lo_i + g_i * (1 - sum lo) / sum g, which sums to 1. Ceilings:
/// the asset exceeding its ceiling by the most is pinned there (ties go to
/// the smaller asset id) and the rest is redistributed over the free assets
/// with the same formula, until nothing exceeds its ceiling. At most K
/// rounds. The genes come back normalised to sum 1, which leaves the weights
/// unchanged, so repairing twice is the same as repairing once.
inline Portfolio repair_weights(Portfolio p, const Bounds& bounds)
{
    const std::size_t k = p.size();
    if (p.genes.size() != k) {
        throw DegenerateInputError("portfolio has " + std::to_string(k) + " assets but "
                                   + std::to_string(p.genes.size()) + " genes");
    }
    double gene_sum = 0.0;
    double lower_sum = 0.0;
    double upper_sum = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        const double g = p.genes[a];
        if (!(g >= 0.0) || !std::isfinite(g)) {
            throw DegenerateInputError("gene " + std::to_string(a + 1) + " is "
                                       + format_double(g) + ", must be finite and >= 0");
        }
        gene_sum += g;
        const auto id = static_cast<std::size_t>(p.indices[a] - 1);
        lower_sum += bounds.lower[id];
        upper_sum += bounds.upper[id];
    }
    if (lower_sum > 1.0 + 1e-12 || upper_sum < 1.0 - 1e-12) {
        throw InfeasibilityError("held assets' bounds sum to [" + format_double(lower_sum) + ", "
                                 + format_double(upper_sum) + "], which excludes 1");
    }
    if (gene_sum <= 0.0) {
        throw DegenerateInputError("all genes are zero");
    }
    for (auto& g : p.genes) {
        g /= gene_sum;
    }

    std::vector<char> pinned(k, 0);
    p.weights.assign(k, 0.0);
    for (;;) {
        double free_capital = 1.0;
        double free_genes = 0.0;
        std::size_t free_count = 0;
        for (std::size_t a = 0; a < k; ++a) {
            const auto id = static_cast<std::size_t>(p.indices[a] - 1);
            if (pinned[a]) {
                free_capital -= bounds.upper[id];
            } else {
                free_capital -= bounds.lower[id];
                free_genes += p.genes[a];
                ++free_count;
            }
        }
        if (free_count == 0) {
            break;
        }
        free_capital = std::max(free_capital, 0.0);

        std::size_t worst = k;
        double worst_excess = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            if (pinned[a]) {
                continue;
            }
            const auto id = static_cast<std::size_t>(p.indices[a] - 1);
            // No gene mass left among the free assets: share equally.
            const double share = free_genes > 0.0 ? p.genes[a] / free_genes
                                                  : 1.0 / static_cast<double>(free_count);
            p.weights[a] = bounds.lower[id] + share * free_capital;
            const double excess = p.weights[a] - bounds.upper[id];
            if (excess > 0.0
                && (worst == k || excess > worst_excess
                    || (excess == worst_excess && p.indices[a] < p.indices[worst]))) {
                worst = a;
                worst_excess = excess;
            }
        }
        if (worst == k) {
            break;
        }
        pinned[worst] = 1;
        p.weights[worst] = bounds.upper[static_cast<std::size_t>(p.indices[worst] - 1)];
    }
    return p;
}

/// K distinct assets drawn uniformly from 1..N with uniform genes, repaired.
template <UniformSource Rng>
Portfolio random_portfolio(const AssetUniverse& u, int k, const Bounds& bounds, Rng& rng)
{
    const int n = u.size();
    if (k < 1 || k > n) {
        throw ConfigError("cardinality K=" + std::to_string(k) + " must lie in [1, "
                          + std::to_string(n) + "]");
    }
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 1);
    Portfolio p;
    p.indices.reserve(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
        const auto pick = static_cast<std::size_t>(rng.uniform_int(a, n - 1));
        std::swap(pool[static_cast<std::size_t>(a)], pool[pick]);
        p.indices.push_back(pool[static_cast<std::size_t>(a)]);
    }
    p.genes.resize(static_cast<std::size_t>(k));
    do {
        for (auto& g : p.genes) {
            g = rng.uniform01();
        }
    } while (std::all_of(p.genes.begin(), p.genes.end(), [](double g) { return g == 0.0; }));
    return repair_weights(std::move(p), bounds);
}

enum class ViolationKind {
    cardinality,
    distinctness,
    index_range,
    budget,
    lower_bound,
    upper_bound,
};

struct Violation {
    ViolationKind kind;
    int asset = 0; // 1-based id when the violation concerns one asset, else 0
    std::string message;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    bool feasible() const noexcept { return violations.empty(); }

    bool has(ViolationKind kind) const noexcept
    {
        return std::any_of(violations.begin(), violations.end(),
                           [kind](const Violation& v) { return v.kind == kind; });
    }
};

inline constexpr double feasibility_tolerance = 1e-9;

inline FeasibilityReport validate_portfolio(const Portfolio& p, const AssetUniverse& u,
                                            const Bounds& bounds, int k)
{
    FeasibilityReport report;
    auto flag = [&](ViolationKind kind, int asset, std::string msg) {
        report.violations.push_back({kind, asset, std::move(msg)});
    };

    if (p.indices.size() != static_cast<std::size_t>(k) || p.weights.size() != p.indices.size()) {
        flag(ViolationKind::cardinality, 0,
             "expected " + std::to_string(k) + " assets and weights, got "
                 + std::to_string(p.indices.size()) + " and " + std::to_string(p.weights.size()));
    }
    const int n = u.size();
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    for (int id : p.indices) {
        if (id < 1 || id > n) {
            flag(ViolationKind::index_range, id,
                 "asset " + std::to_string(id) + " outside [1, " + std::to_string(n) + "]");
            continue;
        }
        if (seen[static_cast<std::size_t>(id)]) {
            flag(ViolationKind::distinctness, id, "asset " + std::to_string(id) + " held twice");
        }
        seen[static_cast<std::size_t>(id)] = 1;
    }

    const double total = std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
    if (std::abs(total - 1.0) > feasibility_tolerance) {
        flag(ViolationKind::budget, 0, "weights sum to " + format_double(total));
    }
    const std::size_t m = std::min(p.indices.size(), p.weights.size());
    for (std::size_t a = 0; a < m; ++a) {
        const int id = p.indices[a];
        if (id < 1 || id > n || static_cast<std::size_t>(id) > bounds.size()) {
            continue;
        }
        const double w = p.weights[a];
        const auto i = static_cast<std::size_t>(id - 1);
        if (!(w >= bounds.lower[i] - feasibility_tolerance)) {
            flag(ViolationKind::lower_bound, id,
                 "asset " + std::to_string(id) + " weight " + format_double(w) + " below "
                     + format_double(bounds.lower[i]));
        }
        if (!(w <= bounds.upper[i] + feasibility_tolerance)) {
            flag(ViolationKind::upper_bound, id,
                 "asset " + std::to_string(id) + " weight " + format_double(w) + " above "
                     + format_double(bounds.upper[i]));
        }
    }
    return report;
}

} // namespace aro

#endif // ARO_PORTFOLIO_HPP
