#pragma once
#include <cstdint>
#include <string>

#include "slokit/common/clock.hpp"
#include "slokit/metrics/store.hpp"

namespace slokit::metrics {

struct ScrapeTarget {
    std::string service_name;
    std::string url; // http://host:port/path
    std::int64_t interval_ms = 15'000;
    bool enabled = true;
};

bool validate_scrape_target(const ScrapeTarget& t, std::string* error = nullptr);

/// One HTTP GET against the target, parsed with scrape time = request start,
/// then ingested. Success or failure is recorded as a synthetic
/// `up{service=...}` gauge sample (1 / 0); network errors are never thrown.
IngestReport scrape_once(const ScrapeTarget& target, TimeSeriesStore& store, const Clock& clock);

struct ParsedUrl {
    std::string host;
    int port = 80;
    std::string path;
};

std::optional<ParsedUrl> parse_http_url(const std::string& url);

} // namespace slokit::metrics
