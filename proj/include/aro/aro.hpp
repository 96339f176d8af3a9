#ifndef ARO_ARO_HPP
#define ARO_ARO_HPP

// Asexual reproduction optimisation: a single parent buds one mutated copy
// per iteration and the fitter of the two survives.

#include <aro/error.hpp>
#include <aro/orlib.hpp>
#include <aro/portfolio.hpp>
#include <aro/random.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace aro {

/// How the stochastic/chaotic switch is computed.
///
/// `literal` is sin(max(1 - phi^(ln(i)/b), 0) * pi/2), which clamps to zero
/// for every i, b >= 1 and so always picks chaotic variation. `monotone` is
/// sin(max(1 - phi^(ln i)/b, 0) * pi/2): zero for a fresh parent, rising
/// towards one the longer a parent survives, falling as the run matures.
enum class PressureForm { monotone, literal };

struct AroParams {
    long t_max = 20000;
    std::uint64_t seed = 1;
    double share_mutation_probability = 0.5;
    PressureForm pressure = PressureForm::monotone;

    void validate() const
    {
        if (t_max < 1) {
            throw ConfigError("t_max must be at least 1");
        }
        if (!(share_mutation_probability >= 0.0 && share_mutation_probability <= 1.0)) {
            throw ConfigError("share mutation probability must lie in [0, 1]");
        }
    }
};

/// f(i, b) in [0, 1] for iteration i >= 1 and b >= 1 buds from the current parent.
inline double selection_pressure(long iteration, long buds, PressureForm form)
{
    constexpr double phi = std::numbers::phi;
    const double ln_i = std::log(static_cast<double>(iteration));
    const double b = static_cast<double>(buds);
    const double x = form == PressureForm::monotone ? 1.0 - std::pow(phi, ln_i) / b
                                                    : 1.0 - std::pow(phi, ln_i / b);
    return std::sin(std::max(x, 0.0) * std::numbers::pi / 2.0);
}

/// 1-based positions [first, last] of a chromosome part; length = last - first + 1.
struct Substring {
    int first = 1;
    int last = 1;

    int length() const noexcept { return last - first + 1; }
};

template <UniformSource Rng>
Substring pick_substring(int k, Rng& rng)
{
    const auto first = static_cast<int>(rng.uniform_int(1, k));
    const auto last = static_cast<int>(rng.uniform_int(first, k));
    return {first, last};
}

/// Replace a random run of asset ids with ids not held by the rest of the
/// chromosome. Ids dropped from the run may come back. Genes stay in place.
template <UniformSource Rng>
Portfolio mutate_shares(Portfolio p, int n_assets, Rng& rng)
{
    const int k = static_cast<int>(p.size());
    const Substring s = pick_substring(k, rng);

    std::vector<char> kept(static_cast<std::size_t>(n_assets) + 1, 0);
    for (int pos = 1; pos <= k; ++pos) {
        if (pos < s.first || pos > s.last) {
            kept[static_cast<std::size_t>(p.indices[static_cast<std::size_t>(pos - 1)])] = 1;
        }
    }
    std::vector<int> pool;
    pool.reserve(static_cast<std::size_t>(n_assets));
    for (int id = 1; id <= n_assets; ++id) {
        if (!kept[static_cast<std::size_t>(id)]) {
            pool.push_back(id);
        }
    }
    const int pool_size = static_cast<int>(pool.size());
    for (int t = 0; t < s.length(); ++t) {
        const auto pick = static_cast<std::size_t>(rng.uniform_int(t, pool_size - 1));
        std::swap(pool[static_cast<std::size_t>(t)], pool[pick]);
        p.indices[static_cast<std::size_t>(s.first - 1 + t)] = pool[static_cast<std::size_t>(t)];
    }
    return p;
}

/// Probability that a gene in a stochastic run of length g is redrawn.
inline double stochastic_rate(int g)
{
    return 1.0 / (1.0 + std::log(static_cast<double>(g)));
}

/// Stochastic variation over a random run of genes. With p = stochastic_rate(g),
/// each gene in the run is, when r4 <= p, replaced by p*U (r5 <= 0.3) or U.
template <UniformSource Rng>
std::vector<double> mutate_weights_stochastic(std::vector<double> genes, Rng& rng)
{
    const Substring s = pick_substring(static_cast<int>(genes.size()), rng);
    const double p = stochastic_rate(s.length());
    for (int pos = s.first; pos <= s.last; ++pos) {
        auto& gene = genes[static_cast<std::size_t>(pos - 1)];
        const double r4 = rng.uniform01();
        const double r5 = rng.uniform01();
        if (r4 <= p) {
            gene = r5 <= 0.3 ? p * rng.uniform01() : rng.uniform01();
        }
    }
    return genes;
}

/// Chaotic variation over every gene: r6 <= 0.2 scales by 0.2*f,
/// r6 in [0.3, 0.7] scales by r7 + 0.2*f, anything else is left alone.
template <UniformSource Rng>
std::vector<double> mutate_weights_chaotic(std::vector<double> genes, double f_value, Rng& rng)
{
    for (auto& gene : genes) {
        const double r6 = rng.uniform01();
        if (r6 <= 0.2) {
            gene *= 0.2 * f_value;
        } else if (r6 >= 0.3 && r6 <= 0.7) {
            const double r7 = rng.uniform01();
            gene *= r7 + 0.2 * f_value;
        }
    }
    return genes;
}

struct AroState {
    Portfolio parent;
    double parent_fitness = 0.0;
    long iteration = 1; // 1-based
    long buds = 1;      // buds produced by the current parent, this one included
};

/// Produce one feasible bud from the current parent.
template <UniformSource Rng>
Portfolio reproduce_bud(const AroState& state, const AssetUniverse& u, const Bounds& bounds,
                        const AroParams& params, Rng& rng)
{
    Portfolio bud = state.parent;
    if (rng.uniform01() < params.share_mutation_probability) {
        bud = mutate_shares(std::move(bud), u.size(), rng);
    }
    const double f = selection_pressure(state.iteration, state.buds, params.pressure);
    if (rng.uniform01() < f) {
        bud.genes = mutate_weights_stochastic(std::move(bud.genes), rng);
    } else {
        bud.genes = mutate_weights_chaotic(std::move(bud.genes), f, rng);
    }
    while (std::all_of(bud.genes.begin(), bud.genes.end(), [](double g) { return g == 0.0; })) {
        for (auto& g : bud.genes) {
            g = rng.uniform01();
        }
    }
    return repair_weights(std::move(bud), bounds);
}

struct AroResult {
    Portfolio best;
    double best_fitness = 0.0; // negated objective; higher is better
    /// best fitness after each iteration, length t_max
    std::vector<double> trace;
    long bud_evaluations = 0;

    double best_objective() const noexcept { return -best_fitness; }
};

inline void check_configuration(const AssetUniverse& u, int k, const Bounds& bounds,
                                const AroParams& params)
{
    params.validate();
    if (k < 1 || k > u.size()) {
        throw ConfigError("cardinality K=" + std::to_string(k) + " must lie in [1, "
                          + std::to_string(u.size()) + "]");
    }
    if (bounds.size() != static_cast<std::size_t>(u.size())) {
        throw ConfigError("bounds cover " + std::to_string(bounds.size()) + " assets, universe has "
                          + std::to_string(u.size()));
    }
    bounds.validate();
    bounds.check_cardinality(k);
}

/// Minimise lambda*variance - (1-lambda)*return over feasible K-asset
/// portfolios. Elitist: the parent is only replaced by a strictly fitter bud,
/// so the returned parent is the best portfolio seen.
template <UniformSource Rng>
AroResult aro_run(const AssetUniverse& u, int k, const Bounds& bounds, RiskAversion lambda,
                  const AroParams& params, Rng& rng)
{
    check_configuration(u, k, bounds, params);

    AroState state;
    state.parent = random_portfolio(u, k, bounds, rng);
    state.parent_fitness = -evaluate_objective(state.parent, u, lambda);

    AroResult result;
    result.trace.reserve(static_cast<std::size_t>(params.t_max));
    for (state.iteration = 1; state.iteration <= params.t_max; ++state.iteration) {
        Portfolio bud = reproduce_bud(state, u, bounds, params, rng);
        const double fitness = -evaluate_objective(bud, u, lambda);
        ++result.bud_evaluations;
        if (fitness > state.parent_fitness) {
            state.parent = std::move(bud);
            state.parent_fitness = fitness;
            state.buds = 1;
        } else {
            ++state.buds;
        }
        result.trace.push_back(state.parent_fitness);
    }
    result.best = std::move(state.parent);
    result.best_fitness = state.parent_fitness;
    return result;
}

inline AroResult aro_run(const AssetUniverse& u, int k, const Bounds& bounds, RiskAversion lambda,
                         const AroParams& params)
{
    RandomStream rng(params.seed);
    return aro_run(u, k, bounds, lambda, params, rng);
}

} // namespace aro

#endif // ARO_ARO_HPP
