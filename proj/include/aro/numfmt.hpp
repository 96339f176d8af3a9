#ifndef ARO_NUMFMT_HPP
#define ARO_NUMFMT_HPP

// Locale-independent number <-> text conversion.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace aro {

/// Shortest text that reads back as the same double, '.' decimal point
/// regardless of the global locale.
inline std::string format_double(double value)
{
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view text)
{
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

inline std::optional<long long> parse_integer(std::string_view text)
{
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    long long value = 0;
    auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
        return std::nullopt;
    }
    return value;
}

} // namespace aro

#endif // ARO_NUMFMT_HPP
