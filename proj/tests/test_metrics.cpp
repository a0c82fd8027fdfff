#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <regex>
#include <thread>

#include <httplib.h>

#include "slokit/common/clock.hpp"
#include "slokit/common/numfmt.hpp"
#include "slokit/metrics/exposition.hpp"
#include "slokit/metrics/scrape.hpp"
#include "slokit/metrics/store.hpp"

using namespace slokit;
using namespace slokit::metrics;

namespace {

MetricSample sample(const std::string& name, SeriesKey::Labels labels, std::int64_t ts,
                    double v) {
    return {SeriesKey(name, std::move(labels)), ts, v};
}

// Reference exposition parser: one regex per sample line, no code shared
// with the production parser. Only well-formed sample lines are counted.
struct RefSample {
    std::string series;
    double value;
    std::optional<std::int64_t> ts;
};
std::vector<std::pair<int, RefSample>> reference_parse(const std::string& text) {
    static const std::regex line_re(
        R"(^\s*([a-zA-Z_:][a-zA-Z0-9_:]*)(\{(?:\s*[a-zA-Z_][a-zA-Z0-9_]*\s*=\s*"(?:[^"\\]|\\.)*"\s*,?)*\s*\})?\s+([^\s]+)(?:\s+(-?[0-9]+))?\s*$)");
    std::vector<std::pair<int, RefSample>> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        if (pos == text.size() && line_no > 0) break;
        auto eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t") == std::string::npos) continue;
        if (line[line.find_first_not_of(" \t")] == '#') continue;
        std::smatch m;
        if (!std::regex_match(line, m, line_re)) continue;
        auto value = parse_double(m[3].str());
        if (!value) continue;
        RefSample s{m[1].str() + m[2].str(), *value, std::nullopt};
        if (m[4].matched) s.ts = std::stoll(m[4].str());
        out.emplace_back(line_no, s);
    }
    return out;
}

} // namespace

TEST_CASE("parse_exposition: single counter sample") {
    auto exp = parse_exposition("http_requests_total{code=\"200\"} 1027", 5000);
    REQUIRE(exp.samples.size() == 1);
    CHECK(exp.diagnostics.empty());
    const auto& s = exp.samples[0];
    CHECK(s.series.name() == "http_requests_total");
    CHECK(s.series.label("code") == "200");
    CHECK(s.value == 1027.0);
    CHECK(s.timestamp_ms == 5000);
}

TEST_CASE("parse_exposition: empty input") {
    auto exp = parse_exposition("", 0);
    CHECK(exp.samples.empty());
    CHECK(exp.diagnostics.empty());
}

TEST_CASE("parse_exposition: malformed line reported, rest parses") {
    const std::string doc = "a_total 1\nfoo{bad\nb_total 2\n";
    auto exp = parse_exposition(doc, 0);
    REQUIRE(exp.samples.size() == 2);
    REQUIRE(exp.diagnostics.size() == 1);
    CHECK(exp.diagnostics[0].line == 2);
    CHECK(exp.samples[0].series.name() == "a_total");
    CHECK(exp.samples[1].series.name() == "b_total");

    auto ref = reference_parse(doc);
    REQUIRE(ref.size() == exp.samples.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        CHECK(ref[i].second.series == exp.samples[i].series.to_string());
        CHECK(ref[i].second.value == exp.samples[i].value);
    }
}

TEST_CASE("parse_exposition agrees with reference parser on a mixed document") {
    const std::string doc =
        "# HELP req_total Requests seen.\n"
        "# TYPE req_total counter\n"
        "req_total{code=\"200\",path=\"/a\"} 10 1000\n"
        "req_total{code=\"500\"} 2\n"
        "# some comment\n"
        "\n"
        "gauge_x 3.5\n"
        "bad line here\n"
        "esc{v=\"a\\\\b\\\"c\\nd\"} 1\n"
        "inf_metric +Inf\n";
    auto exp = parse_exposition(doc, 777);
    auto ref = reference_parse(doc);
    REQUIRE(exp.samples.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto& want = ref[i].second;
        const auto& got = exp.samples[i];
        CHECK(got.timestamp_ms == want.ts.value_or(777));
        if (std::isnan(want.value)) CHECK(std::isnan(got.value));
        else CHECK(got.value == want.value);
    }
    // escapes decoded
    auto esc = std::find_if(exp.samples.begin(), exp.samples.end(),
                            [](const MetricSample& s) { return s.series.name() == "esc"; });
    REQUIRE(esc != exp.samples.end());
    CHECK(esc->series.label("v") == "a\\b\"c\nd");
    // TYPE applied
    bool have_counter = false;
    for (const auto& f : exp.families)
        if (f.name == "req_total")
            have_counter = f.kind == MetricKind::counter && f.help == "Requests seen.";
    CHECK(have_counter);
}

TEST_CASE("parse_exposition rejects non-UTF8") {
    std::string bad = "x 1\n";
    bad += static_cast<char>(0xff);
    CHECK_THROWS_AS(parse_exposition(bad, 0), EncodingError);
}

TEST_CASE("exposition serialize/parse round trip") {
    std::mt19937_64 rng(42);
    std::vector<MetricFamily> families;
    std::vector<MetricSample> samples;
    for (int f = 0; f < 8; ++f) {
        MetricFamily fam{"m" + std::to_string(f) + "_total",
                         f % 2 ? MetricKind::counter : MetricKind::gauge,
                         f % 3 ? "help text " + std::to_string(f) : ""};
        families.push_back(fam);
        for (int s = 0; s < 4; ++s) {
            double v = std::ldexp(static_cast<double>(rng() >> 11), -30);
            samples.push_back(sample(fam.name, {{"idx", std::to_string(s)}, {"blank", ""}},
                                     1000 * s + f, v));
        }
    }
    // exercise escaping in label values
    samples.push_back(sample("m0_total", {{"v", "a\\b\"c\nd"}}, 99999, 1.5));

    std::string text = serialize_exposition(families, samples);
    auto exp = parse_exposition(text, 0);
    CHECK(exp.diagnostics.empty());
    REQUIRE(exp.families.size() == families.size());
    for (std::size_t i = 0; i < families.size(); ++i) CHECK(exp.families[i] == families[i]);

    // serialization groups samples by family; compare content, not order
    auto flatten = [](const std::vector<MetricSample>& v) {
        std::vector<std::tuple<std::string, std::int64_t, std::uint64_t>> out;
        for (const auto& s : v)
            out.emplace_back(s.series.to_string(), s.timestamp_ms, std::bit_cast<std::uint64_t>(s.value));
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(flatten(exp.samples) == flatten(samples));
}

TEST_CASE("ingest accepts in-order, rejects duplicates") {
    TimeSeriesStore store;
    std::vector<MetricSample> batch{sample("c_total", {}, 1000, 1), sample("c_total", {}, 2000, 2)};
    auto r1 = store.ingest(batch);
    CHECK(r1.accepted == 2);
    CHECK(r1.rejected.empty());

    auto r2 = store.ingest(batch);
    CHECK(r2.accepted == 0);
    REQUIRE(r2.rejected.size() == 2);
    CHECK(r2.rejected[0].second == RejectReason::duplicate_timestamp);
    CHECK(r2.rejected[1].second == RejectReason::duplicate_timestamp);

    auto r3 = store.ingest(std::vector<MetricSample>{sample("c_total", {}, 1500, 9)});
    CHECK(r3.accepted == 0);
    REQUIRE(r3.rejected.size() == 1);
    CHECK(r3.rejected[0].second == RejectReason::out_of_order);
}

TEST_CASE("ingest count reconciliation across 100 series") {
    TimeSeriesStore store;
    std::vector<MetricSample> batch;
    for (int s = 0; s < 100; ++s)
        for (int i = 0; i < 100; ++i)
            batch.push_back(sample("bulk_total", {{"s", std::to_string(s)}}, 1000 + i * 10, i));
    auto report = store.ingest(batch);
    CHECK(report.accepted == 10'000);

    auto out = store.select_range(SeriesMatcher("bulk_total"), 0, 10'000'000);
    std::size_t total = 0;
    for (const auto& [_, v] : out) total += v.size();
    CHECK(total == report.accepted);
    CHECK(out.size() == 100);
}

TEST_CASE("ingest round trip returns samples bit-identically") {
    TimeSeriesStore store;
    std::mt19937_64 rng(7);
    std::map<SeriesKey, std::vector<Sample>> expect;
    std::vector<MetricSample> batch;
    for (int s = 0; s < 10; ++s) {
        SeriesKey key("rt_metric", {{"s", std::to_string(s)}});
        std::int64_t ts = 0;
        for (int i = 0; i < 50; ++i) {
            ts += 1 + static_cast<std::int64_t>(rng() % 1000);
            double v = std::bit_cast<double>((rng() & 0x7fefffffffffffffULL)); // finite
            batch.push_back({key, ts, v});
            expect[key].push_back({ts, v});
        }
    }
    auto rep = store.ingest(batch);
    CHECK(rep.accepted == batch.size());
    auto out = store.select_range(SeriesMatcher("rt_metric"), 0,
                                  std::numeric_limits<std::int64_t>::max() / 2);
    CHECK(out == expect);
}

TEST_CASE("monotone timestamps: rejected set is exactly the out-of-order suffix-max rule") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> ts;
        for (int i = 0; i < 60; ++i) ts.push_back(rng() % 100 * 10);
        TimeSeriesStore store;
        std::map<SeriesKey, std::int64_t> high_water;
        std::vector<bool> expect_accept;
        SeriesKey key("shuffled_total", {});
        for (auto t : ts) {
            auto it = high_water.find(key);
            bool acc = it == high_water.end() || t > it->second;
            expect_accept.push_back(acc);
            if (acc) high_water[key] = t;
            auto rep = store.ingest(std::vector<MetricSample>{{key, t, 1.0}});
            CHECK(rep.accepted == (acc ? 1u : 0u));
        }
        // stored sequence strictly increasing
        auto out = store.select_range(SeriesMatcher("shuffled_total"), 0, 1'000'000);
        REQUIRE(out.size() == 1);
        const auto& v = out.begin()->second;
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i - 1].ts < v[i].ts);
        CHECK(v.size() ==
              static_cast<std::size_t>(std::count(expect_accept.begin(), expect_accept.end(), true)));
    }
}

TEST_CASE("select_range point query and regex matcher") {
    TimeSeriesStore store;
    std::vector<MetricSample> batch;
    for (std::string code : {"200", "201", "404"})
        for (int i = 0; i < 5; ++i)
            batch.push_back(sample("req_total", {{"code", code}}, 1000 + i * 1000, i));
    store.ingest(batch);

    auto point = store.select_range(SeriesMatcher("req_total"), 3000, 3000);
    REQUIRE(point.size() == 3);
    for (const auto& [_, v] : point) {
        REQUIRE(v.size() == 1);
        CHECK(v[0].ts == 3000);
    }

    SeriesMatcher m2xx("req_total");
    m2xx.add(LabelMatcher("code", MatchOp::re, "2.."));
    auto got = store.select_range(m2xx, 0, 10'000);

    // linear-scan oracle over the ingested batch
    std::map<SeriesKey, std::vector<Sample>> want;
    for (const auto& s : batch) {
        auto code = s.series.label("code");
        if (code && code->size() == 3 && (*code)[0] == '2')
            want[s.series].push_back({s.timestamp_ms, s.value});
    }
    CHECK(got == want);

    // anchoring: "2.." must not match "1200"
    store.ingest(std::vector<MetricSample>{sample("req_total", {{"code", "1200"}}, 1000, 1)});
    auto again = store.select_range(m2xx, 0, 10'000);
    CHECK(again == want);

    CHECK_THROWS_AS(store.select_range(SeriesMatcher("req_total"), 10, 5), InvalidRange);
}

TEST_CASE("retention pruning") {
    TimeSeriesStore store(60'000);
    std::vector<MetricSample> batch;
    for (int i = 0; i < 10; ++i) batch.push_back(sample("g", {}, i * 10'000, i));
    store.ingest(batch);
    const std::int64_t now = 100'000;
    store.prune(now);
    auto out = store.select_range(SeriesMatcher("g"), 0, now);
    REQUIRE(out.size() == 1);
    for (const auto& s : out.begin()->second) CHECK(s.ts >= now - store.retention_ms());
    CHECK(out.begin()->second.size() == 6); // ts 40k..90k; boundary 40000 == cutoff kept
}

TEST_CASE("snapshot save/load round trip") {
    TimeSeriesStore store;
    std::vector<MetricSample> batch;
    for (int i = 0; i < 20; ++i)
        batch.push_back(sample("snap_total", {{"q", "a\"b\\c"}}, 100 + i, i * 0.5));
    store.ingest(batch);

    auto path = std::filesystem::temp_directory_path() / "slokit_snap_test.bin";
    store.save_snapshot(path);
    TimeSeriesStore loaded;
    loaded.load_snapshot(path);
    CHECK(loaded.select_range(SeriesMatcher("snap_total"), 0, 1'000'000) ==
          store.select_range(SeriesMatcher("snap_total"), 0, 1'000'000));
    std::filesystem::remove(path);
}

TEST_CASE("concurrent readers never observe torn batches") {
    TimeSeriesStore store;
    constexpr int kBatches = 200;
    constexpr int kPerBatch = 10;
    std::atomic<bool> done{false};
    std::atomic<int> violations{0};

    std::thread reader([&] {
        SeriesMatcher m("conc_total");
        while (!done.load(std::memory_order_acquire)) {
            auto out = store.select_range(m, 0, 1'000'000'000);
            std::size_t n = 0;
            for (const auto& [_, v] : out) n += v.size();
            if (n % kPerBatch != 0) violations.fetch_add(1);
        }
    });

    std::int64_t ts = 0;
    for (int b = 0; b < kBatches; ++b) {
        std::vector<MetricSample> batch;
        for (int i = 0; i < kPerBatch; ++i)
            batch.push_back(sample("conc_total", {{"i", std::to_string(i)}}, ++ts, b));
        store.ingest(batch);
    }
    done.store(true, std::memory_order_release);
    reader.join();
    CHECK(violations.load() == 0);
}

TEST_CASE("scrape_once against live endpoint, failure, and counter reset") {
    httplib::Server server;
    std::atomic<int> phase{0};
    server.Get("/metrics", [&](const httplib::Request&, httplib::Response& res) {
        if (phase.load() == 0)
            res.set_content("a_total 10\nb_total 20\nc_total 30\nd 1.5\ne 2.5\n", "text/plain");
        else
            res.set_content("a_total 3\n", "text/plain"); // counter reset
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread srv([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    TimeSeriesStore store;
    SimClock clock(1000);
    ScrapeTarget target{"svc", "http://127.0.0.1:" + std::to_string(port) + "/metrics", 1000, true};

    auto r1 = scrape_once(target, store, clock);
    CHECK(r1.accepted == 6); // 5 samples + up=1
    auto up = store.select_range(SeriesMatcher("up"), 0, 10'000);
    REQUIRE(up.size() == 1);
    CHECK(up.begin()->first.label("service") == "svc");
    CHECK(up.begin()->second.back().value == 1.0);

    // reset between scrapes: raw values stored unmodified
    phase.store(1);
    clock.advance_ms(1000);
    auto r2 = scrape_once(target, store, clock);
    CHECK(r2.accepted == 2);
    auto a = store.select_range(SeriesMatcher("a_total"), 0, 10'000);
    REQUIRE(a.size() == 1);
    REQUIRE(a.begin()->second.size() == 2);
    CHECK(a.begin()->second[0].value == 10.0);
    CHECK(a.begin()->second[1].value == 3.0);

    server.stop();
    srv.join();

    // unreachable endpoint: only the up=0 sample
    clock.advance_ms(1000);
    ScrapeTarget dead{"svc", "http://127.0.0.1:1/metrics", 1000, true};
    auto r3 = scrape_once(dead, store, clock);
    CHECK(r3.accepted == 1);
    auto up2 = store.select_range(SeriesMatcher("up"), clock.now_ms(), clock.now_ms());
    REQUIRE(up2.size() == 1);
    CHECK(up2.begin()->second.back().value == 0.0);
}

TEST_CASE("scrape target validation") {
    std::string err;
    CHECK(validate_scrape_target({"svc", "http://127.0.0.1:9100/metrics", 15'000, true}));
    CHECK_FALSE(validate_scrape_target({"svc", "http://x/metrics", 500, true}, &err));
    CHECK(err.find(">= 1s") != std::string::npos);
    CHECK_FALSE(validate_scrape_target({"svc", "ftp://x/metrics", 15'000, true}));
    CHECK_FALSE(validate_scrape_target({"", "http://x/", 15'000, true}));
}

TEST_CASE("series key invariants") {
    CHECK_THROWS_AS(SeriesKey("1bad", {}), std::invalid_argument);
    CHECK_THROWS_AS(SeriesKey("ok", {{"1bad", "v"}}), std::invalid_argument);
    CHECK_THROWS_AS(SeriesKey("ok", {{"dup", "a"}, {"dup", "b"}}), std::invalid_argument);
    // label order does not matter for identity
    CHECK(SeriesKey("m", {{"a", "1"}, {"b", "2"}}) == SeriesKey("m", {{"b", "2"}, {"a", "1"}}));
    CHECK(SeriesKey("m", {{"a", "1"}}) != SeriesKey("m", {{"a", "2"}}));
    CHECK(SeriesKey("m", {{"b", "2"}, {"a", "1"}}).to_string() == "m{a=\"1\",b=\"2\"}");
}
