#pragma once
#include <optional>
#include <string>
#include <string_view>

namespace slokit {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// 17 significant digits: always round-trips, fixed width for wire payloads.
std::string format_double_17(double v);

/// Strict full-string parse; accepts Inf/NaN spellings with optional sign.
std::optional<double> parse_double(std::string_view s);

} // namespace slokit
