#pragma once

#include <string_view>

namespace ledspdc {

/// Parses a length such as "405nm", "11um", "5 mm" or "0.1" (metres) into metres.
/// Accepted suffixes: m, cm, mm, um, µm, nm. Throws ConfigError on anything else.
double parse_length(std::string_view text);

}  // namespace ledspdc
