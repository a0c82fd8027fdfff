#include "promql_fixtures.hpp"

#include <bit>
#include <cmath>

#include "slokit/common/numfmt.hpp"

namespace fixtures {

using namespace slokit;
using metrics::MetricSample;
using metrics::SeriesKey;
using promql::InstantVector;
using promql::QueryValue;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

MetricSample s(const std::string& name, SeriesKey::Labels labels, std::int64_t ts, double v) {
    return {SeriesKey(name, std::move(labels)), ts, v};
}

QueryValue scalar(double v) { return {v}; }

QueryValue vec(std::vector<std::pair<SeriesKey, double>> entries) {
    InstantVector out;
    for (auto& [k, v] : entries) out.emplace(std::move(k), v);
    return {out};
}

SeriesKey key(const std::string& name, SeriesKey::Labels labels = {}) {
    return SeriesKey(name, std::move(labels));
}

} // namespace

void fill_eval_store(metrics::TimeSeriesStore& store) {
    std::vector<MetricSample> batch{
        s("c_lin_total", {}, 0, 0), s("c_lin_total", {}, 30'000, 30), s("c_lin_total", {}, 60'000, 60),
        s("c_reset_total", {}, 0, 10), s("c_reset_total", {}, 30'000, 4),
        s("c_reset2_total", {}, 0, 100), s("c_reset2_total", {}, 30'000, 10),
        s("c_reset2_total", {}, 60'000, 40),
        s("c_zero_reset_total", {}, 0, 50), s("c_zero_reset_total", {}, 30'000, 0),
        s("c_zero_reset_total", {}, 60'000, 25),
        s("req_total", {{"code", "200"}}, 0, 0), s("req_total", {{"code", "200"}}, 60'000, 60),
        s("req_total", {{"code", "404"}}, 0, 0), s("req_total", {{"code", "404"}}, 60'000, 3),
        s("req_total", {{"code", "500"}}, 0, 0), s("req_total", {{"code", "500"}}, 60'000, 6),
        s("g_one", {{"job", "a"}}, 60'000, 10),
        s("g_one", {{"job", "b"}}, 60'000, 20),
        s("g_one", {{"job", "c"}}, 55'000, 30),
        s("g_nan", {{"job", "a"}}, 60'000, kNaN),
        s("g_nan", {{"job", "b"}}, 60'000, 5),
        s("g_allnan", {{"job", "a"}}, 60'000, kNaN),
        s("g_stale", {}, 0, 42),
        s("g_zero", {}, 60'000, 0),
        s("pair_a", {{"x", "1"}}, 60'000, 10), s("pair_a", {{"x", "2"}}, 60'000, 20),
        s("pair_b", {{"x", "1"}}, 60'000, 4), s("pair_b", {{"x", "2"}}, 60'000, 5),
        s("lat_bucket", {{"le", "0.1"}}, 60'000, 50),
        s("lat_bucket", {{"le", "1"}}, 60'000, 90),
        s("lat_bucket", {{"le", "+Inf"}}, 60'000, 100),
        s("lat2_bucket", {{"le", "0.1"}}, 0, 0), s("lat2_bucket", {{"le", "0.1"}}, 60'000, 50),
        s("lat2_bucket", {{"le", "1"}}, 0, 0), s("lat2_bucket", {{"le", "1"}}, 60'000, 90),
        s("lat2_bucket", {{"le", "+Inf"}}, 0, 0), s("lat2_bucket", {{"le", "+Inf"}}, 60'000, 100),
    };
    auto report = store.ingest(batch);
    if (report.accepted != batch.size()) throw std::logic_error("fixture ingest failed");
}

std::vector<QueryFixture> eval_fixtures() {
    const std::int64_t T = 60'000;
    std::vector<QueryFixture> out;
    auto add = [&](std::string name, std::string q, std::int64_t t, QueryValue expected) {
        out.push_back({std::move(name), std::move(q), t, std::move(expected)});
    };

    // --- rate / increase ---------------------------------------------------
    // window [0,60s]: samples 0,30,60 -> deltas 30+30=60 -> 60/60s = 1
    add("rate linear full window", "rate(c_lin_total[60s])", T, vec({{key(""), 1.0}}));
    // window [30s,60s]: samples 30,60 -> delta 30 -> 30/30s = 1
    add("rate linear half window", "rate(c_lin_total[30s])", T, vec({{key(""), 1.0}}));
    // increase = rate * window seconds = 1 * 60
    add("increase linear", "increase(c_lin_total[60s])", T, vec({{key(""), 60.0}}));
    // reset rule: delta 4-10=-6 < 0 contributes current value 4; (4/60)*60 = 4
    add("increase across reset", "increase(c_reset_total[60s])", 30'000, vec({{key(""), 4.0}}));
    add("rate across reset", "rate(c_reset_total[60s])", 30'000, vec({{key(""), 4.0 / 60.0}}));
    // resets: 100->10 contributes 10, 10->40 contributes 30 => 40
    add("rate reset mid-window", "rate(c_reset2_total[60s])", T, vec({{key(""), 40.0 / 60.0}}));
    // reset to zero contributes 0, then +25
    add("rate reset to zero", "rate(c_zero_reset_total[60s])", T, vec({{key(""), 25.0 / 60.0}}));
    // only one sample in [45s,60s]: no delta, series omitted
    add("rate single sample omitted", "rate(c_lin_total[15s])", T, vec({}));

    // --- selectors ----------------------------------------------------------
    add("selector regex anchored", "req_total{code=~\"2..\"}", T,
        vec({{key("req_total", {{"code", "200"}}), 60.0}}));
    add("selector ne", "req_total{code!=\"500\"}", T,
        vec({{key("req_total", {{"code", "200"}}), 60.0},
             {key("req_total", {{"code", "404"}}), 3.0}}));
    add("selector nre", "req_total{code!~\"4..\"}", T,
        vec({{key("req_total", {{"code", "200"}}), 60.0},
             {key("req_total", {{"code", "500"}}), 6.0}}));
    add("selector unknown metric", "missing_metric", T, vec({}));
    // newest of several samples within lookback
    add("selector newest sample", "g_one{job=\"c\"}", T,
        vec({{key("g_one", {{"job", "c"}}), 30.0}}));
    // staleness boundary: sample at 0 visible at t = lookback, gone 1ms later
    add("staleness boundary inclusive", "g_stale", 300'000, vec({{key("g_stale"), 42.0}}));
    add("staleness beyond lookback", "g_stale", 300'001, vec({}));

    // --- aggregation ---------------------------------------------------------
    // rates: 200 -> 1, 404 -> 0.05, 500 -> 0.1, summed in key order
    add("sum of rates", "sum(rate(req_total[60s]))", T,
        vec({{key(""), ((60.0 / 60.0) + (3.0 / 60.0)) + (6.0 / 60.0)}}));
    add("sum by code", "sum by (code) (rate(req_total[60s]))", T,
        vec({{key("", {{"code", "200"}}), 60.0 / 60.0},
             {key("", {{"code", "404"}}), 3.0 / 60.0},
             {key("", {{"code", "500"}}), 6.0 / 60.0}}));
    add("sum filtered to 5xx", "sum(rate(req_total{code=~\"5..\"}[60s]))", T,
        vec({{key(""), 6.0 / 60.0}}));
    // (10+20)+30 = 60 over three entries
    add("avg", "avg(g_one)", T, vec({{key(""), 20.0}}));
    add("min", "min(g_one)", T, vec({{key(""), 10.0}}));
    add("max", "max(g_one)", T, vec({{key(""), 30.0}}));
    add("count", "count(g_one)", T, vec({{key(""), 3.0}}));
    add("sum without", "sum without (job) (g_one)", T, vec({{key(""), 60.0}}));
    // NaN samples are excluded from aggregation
    add("sum skips NaN", "sum(g_nan)", T, vec({{key(""), 5.0}}));
    add("count skips NaN", "count(g_nan)", T, vec({{key(""), 1.0}}));
    // a fully-NaN group disappears
    add("all-NaN group disappears", "count(g_allnan)", T, vec({}));

    // --- histogram_quantile ---------------------------------------------------
    // rank 0.5*100 = 50 = cumulative at le 0.1; interpolation hits the
    // bucket's upper bound: 0 + 0.1*(50-0)/50 = 0.1
    add("hq median hits bucket bound", "histogram_quantile(0.5, lat_bucket)", T,
        vec({{key(""), 0.0 + (0.1 - 0.0) * (0.5 * 100.0 - 0.0) / 50.0}}));
    // rank 90: bucket (0.1,1]: 0.1 + 0.9*(90-50)/40 = 1.0
    add("hq upper interpolation", "histogram_quantile(0.9, lat_bucket)", T,
        vec({{key(""), 0.1 + (1.0 - 0.1) * (0.9 * 100.0 - 50.0) / 40.0}}));
    // rank 70: 0.1 + 0.9*(70-50)/40 = 0.55
    add("hq mid interpolation", "histogram_quantile(0.7, lat_bucket)", T,
        vec({{key(""), 0.1 + (1.0 - 0.1) * (0.7 * 100.0 - 50.0) / 40.0}}));
    // rank = total falls into +Inf: report last finite bound
    add("hq q=1 reports last finite bound", "histogram_quantile(1, lat_bucket)", T,
        vec({{key(""), 1.0}}));
    // rank 0 interpolates to the lower edge of the first bucket
    add("hq q=0", "histogram_quantile(0, lat_bucket)", T, vec({{key(""), 0.0}}));
    // rated buckets: total 100/60, rank 0.99*total > cum(le=1)=90/60 -> +Inf
    add("hq over rated buckets", "histogram_quantile(0.99, sum by (le) (rate(lat2_bucket[60s])))",
        T, vec({{key(""), 1.0}}));

    // --- binary operators -------------------------------------------------------
    add("vector plus scalar", "g_one + 5", T,
        vec({{key("", {{"job", "a"}}), 15.0},
             {key("", {{"job", "b"}}), 25.0},
             {key("", {{"job", "c"}}), 35.0}}));
    add("scalar times vector", "2 * g_one", T,
        vec({{key("", {{"job", "a"}}), 20.0},
             {key("", {{"job", "b"}}), 40.0},
             {key("", {{"job", "c"}}), 60.0}}));
    add("vector div vector matches labels", "pair_a / pair_b", T,
        vec({{key("", {{"x", "1"}}), 2.5}, {key("", {{"x", "2"}}), 4.0}}));
    // comparison without bool filters, keeping original series identity
    add("comparison filters", "g_one > 15", T,
        vec({{key("g_one", {{"job", "b"}}), 20.0}, {key("g_one", {{"job", "c"}}), 30.0}}));
    add("comparison bool yields 0/1", "g_one > bool 15", T,
        vec({{key("", {{"job", "a"}}), 0.0},
             {key("", {{"job", "b"}}), 1.0},
             {key("", {{"job", "c"}}), 1.0}}));
    add("scalar precedence", "2 + 3 * 4", T, scalar(14.0));
    add("paren precedence", "(2 + 3) * 4", T, scalar(20.0));
    add("scalar comparison bool", "3 > bool 2", T, scalar(1.0));
    add("unary minus", "-3 + 5", T, scalar(2.0));
    add("division by zero gives Inf", "g_one{job=\"a\"} / 0", T,
        vec({{key("", {{"job", "a"}}), kInf}}));
    add("zero over zero gives NaN", "g_zero / 0", T, vec({{key(""), kNaN}}));

    // --- clamps ---------------------------------------------------------------
    add("clamp_min", "clamp_min(g_one, 15)", T,
        vec({{key("", {{"job", "a"}}), 15.0},
             {key("", {{"job", "b"}}), 20.0},
             {key("", {{"job", "c"}}), 30.0}}));
    add("clamp_max", "clamp_max(g_one, 15)", T,
        vec({{key("", {{"job", "a"}}), 10.0},
             {key("", {{"job", "b"}}), 15.0},
             {key("", {{"job", "c"}}), 15.0}}));

    return out;
}

bool qv_equal(const QueryValue& a, const QueryValue& b) {
    auto deq = [](double x, double y) {
        return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y) ||
               (std::isnan(x) && std::isnan(y));
    };
    if (a.v.index() != b.v.index()) return false;
    if (a.is_scalar()) return deq(a.scalar(), b.scalar());
    if (a.is_vector()) {
        const auto& va = a.vector();
        const auto& vb = b.vector();
        if (va.size() != vb.size()) return false;
        auto ib = vb.begin();
        for (auto ia = va.begin(); ia != va.end(); ++ia, ++ib)
            if (!(ia->first == ib->first) || !deq(ia->second, ib->second)) return false;
        return true;
    }
    const auto& ma = a.matrix();
    const auto& mb = b.matrix();
    if (ma.size() != mb.size()) return false;
    auto ib = mb.begin();
    for (const auto& [k, samples] : ma) {
        if (!(k == ib->first) || samples.size() != ib->second.size()) return false;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (samples[i].ts != ib->second[i].ts || !deq(samples[i].value, ib->second[i].value))
                return false;
        ++ib;
    }
    return true;
}

std::string qv_to_string(const QueryValue& v) {
    if (v.is_scalar()) return "scalar " + format_double(v.scalar());
    std::string out;
    if (v.is_vector()) {
        out = "vector{";
        for (const auto& [k, val] : v.vector())
            out += k.to_string() + "=" + format_double(val) + " ";
        return out + "}";
    }
    out = "matrix{";
    for (const auto& [k, samples] : v.matrix()) {
        out += k.to_string() + "=[";
        for (const auto& s : samples)
            out += "(" + std::to_string(s.ts) + "," + format_double(s.value) + ")";
        out += "] ";
    }
    return out + "}";
}

} // namespace fixtures
