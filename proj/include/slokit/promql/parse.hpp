#pragma once
#include <optional>
#include <string>
#include <vector>

#include "slokit/promql/ast.hpp"

namespace slokit::promql {

enum class Severity { error, warning };

struct Diagnostic {
    std::size_t start = 0;
    std::size_t end = 0;
    std::string message;
    Severity severity = Severity::error;
};

struct ParseResult {
    std::optional<Expr> expr; // absent when any error diagnostic exists
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return expr.has_value(); }
};

/// Grammar (precedence low to high): comparison < add/sub < mul/div < unary
/// < atoms. Durations are [0-9]+(s|m|h|d); matchers =, !=, =~, !~ with
/// regexes anchored implicitly at both ends.
ParseResult parse(std::string_view query);

/// parse + static type check (arities, range vs instant argument kinds).
/// Never touches a store. Errors reject the query; warnings do not.
std::vector<Diagnostic> validate(std::string_view query);

std::vector<Diagnostic> typecheck(const Expr& expr);

inline bool has_errors(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Severity::error) return true;
    return false;
}

} // namespace slokit::promql
