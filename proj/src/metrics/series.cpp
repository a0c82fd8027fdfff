#include "slokit/metrics/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace slokit::metrics {

bool valid_metric_name(std::string_view name) {
    if (name.empty()) return false;
    auto head = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
    };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), tail);
}

bool valid_label_name(std::string_view name) {
    if (name.empty()) return false;
    auto head = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    };
    auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
    if (!head(name.front())) return false;
    return std::all_of(name.begin() + 1, name.end(), tail);
}

std::string escape_label_value(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

SeriesKey::SeriesKey(std::string name, Labels labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
    if (!name_.empty() && !valid_metric_name(name_))
        throw std::invalid_argument("invalid metric name: " + name_);
    // An empty label value means the label is absent.
    std::erase_if(labels_, [](const auto& lv) { return lv.second.empty(); });
    std::sort(labels_.begin(), labels_.end());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (!valid_label_name(labels_[i].first))
            throw std::invalid_argument("invalid label name: " + labels_[i].first);
        if (i > 0 && labels_[i].first == labels_[i - 1].first)
            throw std::invalid_argument("duplicate label name: " + labels_[i].first);
    }
}

std::optional<std::string_view> SeriesKey::label(std::string_view label_name) const {
    for (const auto& [k, v] : labels_)
        if (k == label_name) return std::string_view(v);
    return std::nullopt;
}

SeriesKey SeriesKey::without_name() const { return SeriesKey("", labels_); }

SeriesKey SeriesKey::keep_labels(const std::vector<std::string>& names) const {
    Labels kept;
    for (const auto& lv : labels_)
        if (std::find(names.begin(), names.end(), lv.first) != names.end()) kept.push_back(lv);
    return SeriesKey("", std::move(kept));
}

SeriesKey SeriesKey::drop_labels(const std::vector<std::string>& names) const {
    Labels kept;
    for (const auto& lv : labels_)
        if (std::find(names.begin(), names.end(), lv.first) == names.end()) kept.push_back(lv);
    return SeriesKey("", std::move(kept));
}

std::string SeriesKey::to_string() const {
    std::string out = name_;
    if (labels_.empty()) return out;
    out.push_back('{');
    bool first = true;
    for (const auto& [k, v] : labels_) {
        if (!first) out.push_back(',');
        first = false;
        out += k;
        out += "=\"";
        out += escape_label_value(v);
        out.push_back('"');
    }
    out.push_back('}');
    return out;
}

std::string_view metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::counter: return "counter";
        case MetricKind::gauge: return "gauge";
        case MetricKind::histogram: return "histogram";
    }
    return "gauge";
}

std::optional<MetricKind> metric_kind_from_name(std::string_view name) {
    if (name == "counter") return MetricKind::counter;
    if (name == "gauge") return MetricKind::gauge;
    if (name == "histogram") return MetricKind::histogram;
    return std::nullopt;
}

} // namespace slokit::metrics
