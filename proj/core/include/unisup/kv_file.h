#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace unisup {

// Flat "key = value" text. Blank lines and lines starting with '#' are
// skipped. Later duplicates of a key are rejected.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues ParseKeyValues(std::string_view text, std::string_view origin);
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

// Value parsers. `key` is used only for error messages.
double ParseDouble(std::string_view key, std::string_view value);
std::int64_t ParseInt(std::string_view key, std::string_view value);
std::uint64_t ParseUint(std::string_view key, std::string_view value);
std::vector<std::string> SplitList(std::string_view value);
std::vector<double> ParseDoubleList(std::string_view key,
                                    std::string_view value);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace unisup
