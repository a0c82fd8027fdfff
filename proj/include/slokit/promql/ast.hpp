#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slokit/metrics/matcher.hpp"

namespace slokit::promql {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class FnName { rate, increase, histogram_quantile, clamp_min, clamp_max };
enum class AggOp { sum, avg, min, max, count };
enum class BinOp { add, sub, mul, div, gt, lt, ge, le, eq, ne };
enum class Grouping { none, by, without };

bool is_comparison(BinOp op);
std::string_view fn_name_str(FnName f);
std::string_view agg_op_str(AggOp op);
std::string_view bin_op_str(BinOp op);
std::optional<FnName> fn_from_str(std::string_view s);
std::optional<AggOp> agg_from_str(std::string_view s);

struct MatcherSpec {
    std::string label;
    metrics::MatchOp op = metrics::MatchOp::eq;
    std::string value;

    bool operator==(const MatcherSpec&) const = default;
};

struct NumberLiteral {
    double value = 0;
};

struct VectorSelector {
    std::optional<std::string> name;
    std::vector<MatcherSpec> matchers;
};

struct RangeSelector {
    VectorSelector inner;
    std::int64_t window_ms = 0;
};

struct FnCall {
    FnName fn;
    std::vector<ExprPtr> args;
};

struct AggregateExpr {
    AggOp op;
    Grouping grouping = Grouping::none;
    std::vector<std::string> labels;
    ExprPtr arg;
};

struct BinaryExpr {
    BinOp op;
    bool bool_modifier = false;
    ExprPtr lhs;
    ExprPtr rhs;
};

struct UnaryNeg {
    ExprPtr arg;
};

struct ParenExpr {
    ExprPtr inner;
};

struct Span {
    std::size_t start = 0; // byte offsets into the query string
    std::size_t end = 0;
};

struct Expr {
    std::variant<NumberLiteral, VectorSelector, RangeSelector, FnCall, AggregateExpr, BinaryExpr,
                 UnaryNeg, ParenExpr>
        node;
    Span span;
};

/// Structural equality, spans ignored.
bool equal(const Expr& a, const Expr& b);

/// Source form that reparses to a structurally identical AST.
std::string to_string(const Expr& e);

metrics::SeriesMatcher to_series_matcher(const VectorSelector& sel); // throws on bad regex

} // namespace slokit::promql
