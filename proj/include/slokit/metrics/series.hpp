#pragma once
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slokit::metrics {

bool valid_metric_name(std::string_view name);
bool valid_label_name(std::string_view name);

/// Escape a label value for the text exposition format (\\, \", \n).
std::string escape_label_value(std::string_view raw);

/// Identity of one time series: metric name plus its full label set,
/// kept sorted by label name. Construction validates names and rejects
/// duplicate labels; two keys are equal iff name and label set are equal.
class SeriesKey {
public:
    using Labels = std::vector<std::pair<std::string, std::string>>;

    SeriesKey() = default;
    SeriesKey(std::string name, Labels labels); // throws std::invalid_argument

    const std::string& name() const { return name_; }
    const Labels& labels() const { return labels_; }
    std::optional<std::string_view> label(std::string_view label_name) const;

    /// Key with the metric name dropped (used for vector matching).
    SeriesKey without_name() const;
    /// Key restricted to the given label names (aggregation `by`).
    SeriesKey keep_labels(const std::vector<std::string>& names) const;
    /// Key with the given label names removed (aggregation `without`).
    SeriesKey drop_labels(const std::vector<std::string>& names) const;

    /// Canonical form: name{a="x",b="y"} with escaped values.
    std::string to_string() const;

    auto operator<=>(const SeriesKey&) const = default;

private:
    std::string name_;
    Labels labels_;
};

struct Sample {
    std::int64_t ts = 0; // milliseconds since epoch
    double value = 0;

    auto operator<=>(const Sample&) const = default;
};

struct MetricSample {
    SeriesKey series;
    std::int64_t timestamp_ms = 0;
    double value = 0;
};

enum class MetricKind { counter, gauge, histogram };

std::string_view metric_kind_name(MetricKind kind);
std::optional<MetricKind> metric_kind_from_name(std::string_view name);

struct MetricFamily {
    std::string name;
    MetricKind kind = MetricKind::gauge;
    std::string help;

    bool operator==(const MetricFamily&) const = default;
};

} // namespace slokit::metrics
