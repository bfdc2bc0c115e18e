#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace homomorph::bench::detail {

/// Shortest round-trip text for a double.
inline std::string num(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T>& items, std::string (*fmt)(T))
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += fmt(items[i]);
    }
    return out;
}

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s);

}  // namespace homomorph::bench::detail
