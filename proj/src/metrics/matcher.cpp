#include "slokit/metrics/matcher.hpp"

#include <stdexcept>

namespace slokit::metrics {

std::string_view match_op_symbol(MatchOp op) {
    switch (op) {
        case MatchOp::eq: return "=";
        case MatchOp::ne: return "!=";
        case MatchOp::re: return "=~";
        case MatchOp::nre: return "!~";
    }
    return "=";
}

LabelMatcher::LabelMatcher(std::string label, MatchOp op, std::string value)
    : label_(std::move(label)), op_(op), value_(std::move(value)) {
    if (op_ == MatchOp::re || op_ == MatchOp::nre) {
        try {
            re_.emplace(value_, std::regex::ECMAScript);
        } catch (const std::regex_error& e) {
            throw std::invalid_argument("invalid regex '" + value_ + "': " + e.what());
        }
    }
}

bool LabelMatcher::matches(const SeriesKey& key) const {
    auto lv = key.label(label_);
    std::string_view v = lv ? *lv : std::string_view{};
    switch (op_) {
        case MatchOp::eq: return v == value_;
        case MatchOp::ne: return v != value_;
        // regex_match requires the whole string to match: implicit ^...$
        case MatchOp::re: return std::regex_match(v.begin(), v.end(), *re_);
        case MatchOp::nre: return !std::regex_match(v.begin(), v.end(), *re_);
    }
    return false;
}

bool SeriesMatcher::matches(const SeriesKey& key) const {
    if (name_ && key.name() != *name_) return false;
    for (const auto& m : matchers_)
        if (!m.matches(key)) return false;
    return true;
}

} // namespace slokit::metrics
