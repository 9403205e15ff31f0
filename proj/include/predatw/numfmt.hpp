#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace predatw {

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Strict full-string parses; return false on any trailing garbage.
bool parse_double(std::string_view s, double& out);
bool parse_u64(std::string_view s, std::uint64_t& out);
bool parse_i64(std::string_view s, std::int64_t& out);

}  // namespace predatw
