#include "slokit/promql/ast.hpp"

#include "slokit/common/duration.hpp"
#include "slokit/common/numfmt.hpp"

namespace slokit::promql {

bool is_comparison(BinOp op) {
    switch (op) {
        case BinOp::gt:
        case BinOp::lt:
        case BinOp::ge:
        case BinOp::le:
        case BinOp::eq:
        case BinOp::ne: return true;
        default: return false;
    }
}

std::string_view fn_name_str(FnName f) {
    switch (f) {
        case FnName::rate: return "rate";
        case FnName::increase: return "increase";
        case FnName::histogram_quantile: return "histogram_quantile";
        case FnName::clamp_min: return "clamp_min";
        case FnName::clamp_max: return "clamp_max";
    }
    return "";
}

std::string_view agg_op_str(AggOp op) {
    switch (op) {
        case AggOp::sum: return "sum";
        case AggOp::avg: return "avg";
        case AggOp::min: return "min";
        case AggOp::max: return "max";
        case AggOp::count: return "count";
    }
    return "";
}

std::string_view bin_op_str(BinOp op) {
    switch (op) {
        case BinOp::add: return "+";
        case BinOp::sub: return "-";
        case BinOp::mul: return "*";
        case BinOp::div: return "/";
        case BinOp::gt: return ">";
        case BinOp::lt: return "<";
        case BinOp::ge: return ">=";
        case BinOp::le: return "<=";
        case BinOp::eq: return "==";
        case BinOp::ne: return "!=";
    }
    return "";
}

std::optional<FnName> fn_from_str(std::string_view s) {
    for (FnName f : {FnName::rate, FnName::increase, FnName::histogram_quantile, FnName::clamp_min,
                     FnName::clamp_max})
        if (fn_name_str(f) == s) return f;
    return std::nullopt;
}

std::optional<AggOp> agg_from_str(std::string_view s) {
    for (AggOp op : {AggOp::sum, AggOp::avg, AggOp::min, AggOp::max, AggOp::count})
        if (agg_op_str(op) == s) return op;
    return std::nullopt;
}

bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, NumberLiteral>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, VectorSelector>) {
                return na.name == nb.name && na.matchers == nb.matchers;
            } else if constexpr (std::is_same_v<T, RangeSelector>) {
                return na.window_ms == nb.window_ms && na.inner.name == nb.inner.name &&
                       na.inner.matchers == nb.inner.matchers;
            } else if constexpr (std::is_same_v<T, FnCall>) {
                if (na.fn != nb.fn || na.args.size() != nb.args.size()) return false;
                for (std::size_t i = 0; i < na.args.size(); ++i)
                    if (!equal(*na.args[i], *nb.args[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<T, AggregateExpr>) {
                return na.op == nb.op && na.grouping == nb.grouping && na.labels == nb.labels &&
                       equal(*na.arg, *nb.arg);
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                return na.op == nb.op && na.bool_modifier == nb.bool_modifier &&
                       equal(*na.lhs, *nb.lhs) && equal(*na.rhs, *nb.rhs);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return equal(*na.arg, *nb.arg);
            } else {
                return equal(*na.inner, *nb.inner);
            }
        },
        a.node);
}

namespace {

void print_selector(std::string& out, const VectorSelector& sel) {
    if (sel.name) out += *sel.name;
    if (!sel.matchers.empty() || !sel.name) {
        out.push_back('{');
        bool first = true;
        for (const auto& m : sel.matchers) {
            if (!first) out.push_back(',');
            first = false;
            out += m.label;
            out += metrics::match_op_symbol(m.op);
            out.push_back('"');
            out += metrics::escape_label_value(m.value);
            out.push_back('"');
        }
        out.push_back('}');
    }
}

void print(std::string& out, const Expr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NumberLiteral>) {
                out += slokit::format_double(n.value);
            } else if constexpr (std::is_same_v<T, VectorSelector>) {
                print_selector(out, n);
            } else if constexpr (std::is_same_v<T, RangeSelector>) {
                print_selector(out, n.inner);
                out.push_back('[');
                out += slokit::format_duration_ms(n.window_ms);
                out.push_back(']');
            } else if constexpr (std::is_same_v<T, FnCall>) {
                out += fn_name_str(n.fn);
                out.push_back('(');
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) out += ", ";
                    print(out, *n.args[i]);
                }
                out.push_back(')');
            } else if constexpr (std::is_same_v<T, AggregateExpr>) {
                out += agg_op_str(n.op);
                if (n.grouping != Grouping::none) {
                    out += n.grouping == Grouping::by ? " by (" : " without (";
                    for (std::size_t i = 0; i < n.labels.size(); ++i) {
                        if (i) out += ", ";
                        out += n.labels[i];
                    }
                    out += ") ";
                }
                out.push_back('(');
                print(out, *n.arg);
                out.push_back(')');
            } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                print(out, *n.lhs);
                out.push_back(' ');
                out += bin_op_str(n.op);
                if (n.bool_modifier) out += " bool";
                out.push_back(' ');
                print(out, *n.rhs);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                out.push_back('-');
                print(out, *n.arg);
            } else {
                out.push_back('(');
                print(out, *n.inner);
                out.push_back(')');
            }
        },
        e.node);
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print(out, e);
    return out;
}

metrics::SeriesMatcher to_series_matcher(const VectorSelector& sel) {
    std::vector<metrics::LabelMatcher> ms;
    ms.reserve(sel.matchers.size());
    for (const auto& m : sel.matchers) ms.emplace_back(m.label, m.op, m.value);
    return metrics::SeriesMatcher(sel.name, std::move(ms));
}

} // namespace slokit::promql
