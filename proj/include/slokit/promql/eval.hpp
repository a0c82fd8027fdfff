#pragma once
#include <map>
#include <stdexcept>
#include <variant>

#include "slokit/metrics/store.hpp"
#include "slokit/promql/ast.hpp"
#include "slokit/promql/parse.hpp"

namespace slokit::promql {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalOptions {
    // A series is absent at t if its newest sample is older than this.
    std::int64_t lookback_ms = 5 * 60 * 1000;
};

using InstantVector = std::map<metrics::SeriesKey, double>;
using Matrix = std::map<metrics::SeriesKey, std::vector<metrics::Sample>>;

struct QueryValue {
    std::variant<double, InstantVector, Matrix> v;

    bool is_scalar() const { return std::holds_alternative<double>(v); }
    bool is_vector() const { return std::holds_alternative<InstantVector>(v); }
    bool is_matrix() const { return std::holds_alternative<Matrix>(v); }
    double scalar() const { return std::get<double>(v); }
    const InstantVector& vector() const { return std::get<InstantVector>(v); }
    const Matrix& matrix() const { return std::get<Matrix>(v); }
};

// Evaluation semantics (documented divergences from upstream PromQL):
//  - instant selectors resolve each series to its newest sample with
//    t - lookback <= ts <= t;
//  - a range window [t-w, t] includes both endpoints, and rate() does no
//    boundary extrapolation: rate = sum of deltas over consecutive samples
//    in the window, a negative delta (counter reset) contributing the
//    post-reset value, divided by the window in seconds;
//  - increase(c[w]) is literally rate(c[w]) * w_seconds;
//  - series with fewer than two samples in the window yield no rate sample.
QueryValue eval_instant(const Expr& expr, std::int64_t t_ms, const metrics::TimeSeriesStore& store,
                        const EvalOptions& opts = {});

/// eval_instant at each t in {start, start+step, ...} <= end, per series.
Matrix eval_range(const Expr& expr, std::int64_t start, std::int64_t end, std::int64_t step,
                  const metrics::TimeSeriesStore& store, const EvalOptions& opts = {});

/// Convenience: parse, typecheck (errors throw EvalError), then evaluate.
QueryValue eval_instant(std::string_view query, std::int64_t t_ms,
                        const metrics::TimeSeriesStore& store, const EvalOptions& opts = {});

/// Sum of an instant vector's entries; 0.0 when empty. The uniform scalar
/// reading of generated ratio queries (which aggregate to one sample).
double scalarize(const QueryValue& value);

} // namespace slokit::promql
