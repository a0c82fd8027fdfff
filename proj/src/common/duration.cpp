#include "slokit/common/duration.hpp"

#include <charconv>

namespace slokit {

std::optional<std::int64_t> parse_duration_ms(std::string_view text) {
    if (text.size() < 2) return std::nullopt;
    char unit = text.back();
    std::string_view digits = text.substr(0, text.size() - 1);
    std::int64_t n = 0;
    auto r = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (r.ec != std::errc{} || r.ptr != digits.data() + digits.size() || n < 0)
        return std::nullopt;
    switch (unit) {
        case 's': return n * 1000;
        case 'm': return n * 60 * 1000;
        case 'h': return n * 60 * 60 * 1000;
        case 'd': return n * 24 * 60 * 60 * 1000;
        default: return std::nullopt;
    }
}

std::string format_duration_ms(std::int64_t ms) {
    constexpr std::int64_t kSec = 1000, kMin = 60 * kSec, kHour = 60 * kMin, kDay = 24 * kHour;
    if (ms >= kDay && ms % kDay == 0) return std::to_string(ms / kDay) + "d";
    if (ms >= kHour && ms % kHour == 0) return std::to_string(ms / kHour) + "h";
    if (ms >= kMin && ms % kMin == 0) return std::to_string(ms / kMin) + "m";
    return std::to_string(ms / kSec) + "s";
}

} // namespace slokit
