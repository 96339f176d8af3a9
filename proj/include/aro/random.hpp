#ifndef ARO_RANDOM_HPP
#define ARO_RANDOM_HPP

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

namespace aro {

/// Anything that can feed the stochastic operators: a real in [0,1) and an
/// integer uniformly drawn from a closed range. Tests substitute scripted
/// sources to force particular branches.
template <typename R>
concept UniformSource = requires(R& r, std::int64_t lo, std::int64_t hi) {
    { r.uniform01() } -> std::convertible_to<double>;
    { r.uniform_int(lo, hi) } -> std::convertible_to<std::int64_t>;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seedable, splittable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions are implemented here rather than taken from
/// <random>, since those are implementation-defined and would make results
/// differ between standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    /// Independent child stream number `index` of `seed`.
    static RandomStream split(std::uint64_t seed, std::uint64_t index)
    {
        return RandomStream(splitmix64(seed) ^ splitmix64(~index));
    }

    std::uint64_t next() { return engine_(); }

    /// 53-bit uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [lo, hi]; requires lo <= hi.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
        if (range == 0) {
            return lo + static_cast<std::int64_t>(engine_());
        }
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max()
                                    - std::numeric_limits<std::uint64_t>::max() % range;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % range);
    }

private:
    std::mt19937_64 engine_;
};

static_assert(UniformSource<RandomStream>);

} // namespace aro

#endif // ARO_RANDOM_HPP
