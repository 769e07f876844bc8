#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

namespace edclust {

/// Shortest decimal that round-trips, e.g. 4 -> "4", 0.5 -> "0.5".
inline std::string format_real(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        return std::to_string(v);
    return std::string(buf, end);
}

/// Parses a whole field as a double; false on trailing garbage.
inline bool parse_real(std::string_view s, double& out)
{
    if (s.empty())
        return false;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && end == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int& out)
{
    if (s.empty())
        return false;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && end == s.data() + s.size();
}

} // namespace edclust
