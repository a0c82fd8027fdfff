#include "slokit/metrics/store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <mutex>

#include "slokit/metrics/exposition.hpp"

namespace slokit::metrics {

std::string_view reject_reason_name(RejectReason r) {
    switch (r) {
        case RejectReason::out_of_order: return "out_of_order";
        case RejectReason::duplicate_timestamp: return "duplicate_timestamp";
        case RejectReason::negative_timestamp: return "negative_timestamp";
    }
    return "unknown";
}

IngestReport TimeSeriesStore::ingest(std::span<const MetricSample> samples) {
    std::unique_lock lock(mu_);
    IngestReport report;
    for (const auto& s : samples) {
        if (s.timestamp_ms < 0) {
            report.rejected.emplace_back(s, RejectReason::negative_timestamp);
            continue;
        }
        auto it = series_.find(s.series);
        if (it != series_.end() && !it->second.empty() && s.timestamp_ms <= it->second.back().ts) {
            // Existing timestamp is a duplicate; anything else behind the
            // series head is out of order.
            const auto& vec = it->second;
            auto pos = std::lower_bound(vec.begin(), vec.end(), s.timestamp_ms,
                                        [](const Sample& a, std::int64_t t) { return a.ts < t; });
            bool duplicate = pos != vec.end() && pos->ts == s.timestamp_ms;
            report.rejected.emplace_back(s, duplicate ? RejectReason::duplicate_timestamp
                                                      : RejectReason::out_of_order);
            continue;
        }
        if (it == series_.end()) it = series_.emplace(s.series, std::vector<Sample>{}).first;
        it->second.push_back({s.timestamp_ms, s.value});
        ++report.accepted;
    }
    return report;
}

std::map<SeriesKey, std::vector<Sample>> TimeSeriesStore::select_range(
    const SeriesMatcher& matcher, std::int64_t start, std::int64_t end) const {
    if (start > end) throw InvalidRange("select_range: start > end");
    std::shared_lock lock(mu_);
    std::map<SeriesKey, std::vector<Sample>> out;
    for (const auto& [key, samples] : series_) {
        if (!matcher.matches(key)) continue;
        auto lo = std::lower_bound(samples.begin(), samples.end(), start,
                                   [](const Sample& s, std::int64_t t) { return s.ts < t; });
        auto hi = std::upper_bound(samples.begin(), samples.end(), end,
                                   [](std::int64_t t, const Sample& s) { return t < s.ts; });
        if (lo == hi) continue;
        out.emplace(key, std::vector<Sample>(lo, hi));
    }
    return out;
}

void TimeSeriesStore::prune(std::int64_t now_ms) {
    if (retention_ms_ == kNoRetention) return;
    std::unique_lock lock(mu_);
    const std::int64_t cutoff = now_ms - retention_ms_;
    for (auto it = series_.begin(); it != series_.end();) {
        auto& vec = it->second;
        auto keep = std::lower_bound(vec.begin(), vec.end(), cutoff,
                                     [](const Sample& s, std::int64_t t) { return s.ts < t; });
        vec.erase(vec.begin(), keep);
        it = vec.empty() ? series_.erase(it) : std::next(it);
    }
}

void TimeSeriesStore::register_family(MetricFamily family) {
    std::unique_lock lock(mu_);
    families_[family.name] = std::move(family);
}

std::optional<MetricFamily> TimeSeriesStore::family(const std::string& name) const {
    std::shared_lock lock(mu_);
    auto it = families_.find(name);
    if (it == families_.end()) return std::nullopt;
    return it->second;
}

std::vector<MetricFamily> TimeSeriesStore::families() const {
    std::shared_lock lock(mu_);
    std::vector<MetricFamily> out;
    out.reserve(families_.size());
    for (const auto& [_, f] : families_) out.push_back(f);
    return out;
}

std::size_t TimeSeriesStore::series_count() const {
    std::shared_lock lock(mu_);
    return series_.size();
}

std::size_t TimeSeriesStore::sample_count() const {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (const auto& [_, v] : series_) n += v.size();
    return n;
}

namespace {

void put_u32le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32le(const char* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
    return v;
}

std::uint64_t get_u64le(const char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(p[i]);
    return v;
}

} // namespace

void TimeSeriesStore::save_snapshot(const std::filesystem::path& path) const {
    std::shared_lock lock(mu_);
    std::string buf;
    for (const auto& [key, samples] : series_) {
        const std::string ks = key.to_string();
        for (const auto& s : samples) {
            put_u32le(buf, static_cast<std::uint32_t>(ks.size()));
            buf += ks;
            put_u64le(buf, static_cast<std::uint64_t>(s.ts));
            put_u64le(buf, std::bit_cast<std::uint64_t>(s.value));
        }
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open snapshot file for writing: " + path.string());
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw std::runtime_error("snapshot write failed: " + path.string());
}

void TimeSeriesStore::load_snapshot(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open snapshot file: " + path.string());
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    std::map<SeriesKey, std::vector<Sample>> loaded;
    std::size_t pos = 0;
    while (pos < buf.size()) {
        if (pos + 4 > buf.size()) throw std::runtime_error("snapshot truncated (record header)");
        std::uint32_t klen = get_u32le(buf.data() + pos);
        pos += 4;
        if (pos + klen + 16 > buf.size()) throw std::runtime_error("snapshot truncated (record)");
        auto key = parse_series_string(std::string_view(buf).substr(pos, klen));
        if (!key) throw std::runtime_error("snapshot contains malformed series key");
        pos += klen;
        auto ts = static_cast<std::int64_t>(get_u64le(buf.data() + pos));
        pos += 8;
        double value = std::bit_cast<double>(get_u64le(buf.data() + pos));
        pos += 8;
        auto& vec = loaded[*key];
        if (!vec.empty() && ts <= vec.back().ts)
            throw std::runtime_error("snapshot violates per-series timestamp order");
        vec.push_back({ts, value});
    }
    std::unique_lock lock(mu_);
    series_ = std::move(loaded);
}

} // namespace slokit::metrics
