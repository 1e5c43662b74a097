#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aodvtune {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

double parse_double(std::string_view s);
std::uint64_t parse_u64(std::string_view s);
long long parse_i64(std::string_view s);

std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);

// KEY=value lines. Blank lines and lines starting with '#' are skipped.
// Keys keep file order and may repeat.
struct KeyedEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};
std::vector<KeyedEntry> parse_keyed_text(std::istream& in);
std::vector<KeyedEntry> parse_keyed_text(std::string_view text);

// 64-bit FNV-1a, used for config fingerprints written to manifests.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);

} // namespace aodvtune
