#pragma once
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "slokit/metrics/matcher.hpp"
#include "slokit/metrics/series.hpp"

namespace slokit::metrics {

enum class RejectReason { out_of_order, duplicate_timestamp, negative_timestamp };

std::string_view reject_reason_name(RejectReason r);

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<std::pair<MetricSample, RejectReason>> rejected;
};

struct InvalidRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// In-memory time-series store. Samples per series are strictly increasing
/// in timestamp; out-of-order and duplicate-timestamp ingestion is rejected,
/// never reordered. Readers take a shared lock, writers an exclusive one, so
/// a query always observes whole ingest batches.
class TimeSeriesStore {
public:
    static constexpr std::int64_t kNoRetention = std::numeric_limits<std::int64_t>::max();

    explicit TimeSeriesStore(std::int64_t retention_ms = kNoRetention)
        : retention_ms_(retention_ms) {}

    IngestReport ingest(std::span<const MetricSample> samples);
    IngestReport ingest(const std::vector<MetricSample>& samples) {
        return ingest(std::span<const MetricSample>(samples));
    }

    /// All samples with start <= ts <= end per matching series, ascending;
    /// series without samples in range are omitted. Throws InvalidRange.
    std::map<SeriesKey, std::vector<Sample>> select_range(const SeriesMatcher& matcher,
                                                          std::int64_t start,
                                                          std::int64_t end) const;

    /// Drop samples older than now - retention; empty series disappear.
    void prune(std::int64_t now_ms);

    void register_family(MetricFamily family);
    std::optional<MetricFamily> family(const std::string& name) const;
    std::vector<MetricFamily> families() const;

    std::size_t series_count() const;
    std::size_t sample_count() const;

    // Snapshot file: length-prefixed (u32le) canonical series string followed
    // by i64le timestamp and f64le value bits per record; see docs/formats.md.
    void save_snapshot(const std::filesystem::path& path) const;
    void load_snapshot(const std::filesystem::path& path); // throws std::runtime_error

    std::int64_t retention_ms() const { return retention_ms_; }

private:
    mutable std::shared_mutex mu_;
    std::map<SeriesKey, std::vector<Sample>> series_;
    std::map<std::string, MetricFamily> families_;
    std::int64_t retention_ms_;
};

} // namespace slokit::metrics
