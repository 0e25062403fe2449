#include "unisup/kv_file.h"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "unisup/error.h"

namespace unisup {
namespace {

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValues ParseKeyValues(std::string_view text, std::string_view origin) {
  KeyValues out;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = Trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    const auto key = Trim(line.substr(0, eq));
    const auto value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": empty key");
    }
    if (!seen.emplace(key).second) {
      ThrowValidation(std::string(origin) + ":" + std::to_string(line_no) +
                      ": duplicate key '" + std::string(key) + "'");
    }
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowIo("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) ThrowIo("failed reading '" + path + "'");
  return std::move(buffer).str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) ThrowIo("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) ThrowIo("failed writing '" + path + "'");
}

double ParseDouble(std::string_view key, std::string_view value) {
  const std::string text(Trim(value));
  char* end = nullptr;
  errno = 0;
  const double parsed = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
      !std::isfinite(parsed)) {
    ThrowValidation("'" + std::string(key) + "': not a finite number: '" +
                    text + "'");
  }
  return parsed;
}

std::int64_t ParseInt(std::string_view key, std::string_view value) {
  const auto text = Trim(value);
  std::int64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    ThrowValidation("'" + std::string(key) + "': not an integer: '" +
                    std::string(text) + "'");
  }
  return parsed;
}

std::uint64_t ParseUint(std::string_view key, std::string_view value) {
  const auto text = Trim(value);
  std::uint64_t parsed = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), parsed);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    ThrowValidation("'" + std::string(key) +
                    "': not an unsigned integer: '" + std::string(text) + "'");
  }
  return parsed;
}

std::vector<std::string> SplitList(std::string_view value) {
  std::vector<std::string> out;
  value = Trim(value);
  if (value.empty()) return out;
  while (true) {
    const auto comma = value.find(',');
    out.emplace_back(Trim(value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value = value.substr(comma + 1);
  }
  return out;
}

std::vector<double> ParseDoubleList(std::string_view key,
                                    std::string_view value) {
  std::vector<double> out;
  for (const auto& part : SplitList(value)) out.push_back(ParseDouble(key, part));
  return out;
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace unisup
