#include "ledspdc/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "ledspdc/errors.hpp"

namespace ledspdc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_length(std::string_view text) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || end == s.data()) {
    throw ConfigError("", "cannot parse length '" + std::string(text) + "'");
  }
  const std::string_view suffix = trim(std::string_view(end, s.data() + s.size() - end));
  double scale = 0.0;
  if (suffix.empty() || suffix == "m") {
    scale = 1.0;
  } else if (suffix == "cm") {
    scale = 1e-2;
  } else if (suffix == "mm") {
    scale = 1e-3;
  } else if (suffix == "um" || suffix == "\xC2\xB5m" || suffix == "\xCE\xBCm") {
    scale = 1e-6;
  } else if (suffix == "nm") {
    scale = 1e-9;
  } else {
    throw ConfigError("", "unknown length unit '" + std::string(suffix) + "' in '" + std::string(text) + "'");
  }
  const double metres = value * scale;
  if (!std::isfinite(metres)) throw ConfigError("", "non-finite length '" + std::string(text) + "'");
  return metres;
}

}  // namespace ledspdc
