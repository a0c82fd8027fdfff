#pragma once
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "slokit/metrics/series.hpp"

namespace slokit::metrics {

enum class MatchOp { eq, ne, re, nre };

std::string_view match_op_symbol(MatchOp op);

/// One label condition. Regexes are implicitly anchored at both ends
/// (full-string match); an absent label behaves as the empty string.
class LabelMatcher {
public:
    LabelMatcher(std::string label, MatchOp op, std::string value); // throws on bad regex

    bool matches(const SeriesKey& key) const;

    const std::string& label() const { return label_; }
    MatchOp op() const { return op_; }
    const std::string& value() const { return value_; }

private:
    std::string label_;
    MatchOp op_;
    std::string value_;
    std::optional<std::regex> re_;
};

class SeriesMatcher {
public:
    SeriesMatcher() = default;
    explicit SeriesMatcher(std::string metric_name) : name_(std::move(metric_name)) {}
    SeriesMatcher(std::optional<std::string> metric_name, std::vector<LabelMatcher> matchers)
        : name_(std::move(metric_name)), matchers_(std::move(matchers)) {}

    void add(LabelMatcher m) { matchers_.push_back(std::move(m)); }
    bool matches(const SeriesKey& key) const;

    const std::optional<std::string>& metric_name() const { return name_; }
    const std::vector<LabelMatcher>& label_matchers() const { return matchers_; }
    bool empty() const { return !name_ && matchers_.empty(); }

private:
    std::optional<std::string> name_;
    std::vector<LabelMatcher> matchers_;
};

} // namespace slokit::metrics
