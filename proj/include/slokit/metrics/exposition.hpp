#pragma once
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slokit/metrics/series.hpp"

namespace slokit::metrics {

struct ParseDiagnostic {
    std::size_t line = 0; // 1-based
    std::string message;
};

struct EncodingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Exposition {
    std::vector<MetricFamily> families; // in `# TYPE` order
    std::vector<MetricSample> samples;  // input order
    std::vector<ParseDiagnostic> diagnostics;
};

/// Parse the text exposition format. Lines are `# HELP`, `# TYPE`, other
/// comments, blanks, or samples `name{labels} value [timestamp_ms]`.
/// Samples without a timestamp get scrape_time_ms. Malformed lines produce
/// diagnostics with their line number; parsing never aborts on one bad
/// line. Throws EncodingError if the input is not valid UTF-8.
Exposition parse_exposition(std::string_view text, std::int64_t scrape_time_ms);

/// Inverse of parse_exposition for programmatic documents: emits HELP/TYPE
/// headers then each family's samples (with explicit timestamps).
std::string serialize_exposition(const std::vector<MetricFamily>& families,
                                 const std::vector<MetricSample>& samples);

/// Parse a canonical series string `name{a="x",b="y"}` (both the snapshot
/// file key format and the sample-line prefix).
std::optional<SeriesKey> parse_series_string(std::string_view text);

bool valid_utf8(std::string_view text);

} // namespace slokit::metrics
