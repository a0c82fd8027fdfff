#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace slokit {

// Duration literal grammar: [0-9]+(s|m|h|d). Values are milliseconds.
std::optional<std::int64_t> parse_duration_ms(std::string_view text);

// Largest unit that divides the value evenly; sub-second values fall back
// to a raw seconds suffix via integer division (callers only format values
// produced by parse_duration_ms, which are whole seconds).
std::string format_duration_ms(std::int64_t ms);

} // namespace slokit
