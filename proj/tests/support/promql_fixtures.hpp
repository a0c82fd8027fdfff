#pragma once
#include <string>
#include <vector>

#include "slokit/metrics/store.hpp"
#include "slokit/promql/eval.hpp"

// Shared hand-computed evaluation fixtures; exercised by the promql unit
// suite and re-run wholesale by the acceptance suite.
namespace fixtures {

struct QueryFixture {
    std::string name;
    std::string query;
    std::int64_t t;
    slokit::promql::QueryValue expected; // hand-derived from the semantics
};

void fill_eval_store(slokit::metrics::TimeSeriesStore& store);
std::vector<QueryFixture> eval_fixtures();

/// Exact comparison: identical alternatives, identical keys, bitwise-equal
/// values (NaN equal to NaN).
bool qv_equal(const slokit::promql::QueryValue& a, const slokit::promql::QueryValue& b);
std::string qv_to_string(const slokit::promql::QueryValue& v);

} // namespace fixtures
