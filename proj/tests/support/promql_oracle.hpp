#pragma once
#include "slokit/metrics/store.hpp"
#include "slokit/promql/ast.hpp"
#include "slokit/promql/eval.hpp"

// Brute-force reference evaluator, transcribed line by line from the
// documented query semantics with plain linear scans. Shares the AST with
// the production parser but none of the evaluator code; used as the
// independent oracle for eval_instant.
namespace oracle {

slokit::promql::QueryValue eval(const slokit::promql::Expr& expr, std::int64_t t_ms,
                                const slokit::metrics::TimeSeriesStore& store,
                                std::int64_t lookback_ms = 5 * 60 * 1000);

} // namespace oracle
