#include "slokit/metrics/scrape.hpp"

#include <httplib.h>

#include "slokit/metrics/exposition.hpp"

namespace slokit::metrics {

bool validate_scrape_target(const ScrapeTarget& t, std::string* error) {
    auto fail = [&](const char* msg) {
        if (error) *error = msg;
        return false;
    };
    if (t.service_name.empty()) return fail("service_name must not be empty");
    if (t.interval_ms < 1000) return fail("scrape interval must be >= 1s");
    if (!parse_http_url(t.url)) return fail("url must be http://host[:port]/path");
    return true;
}

std::optional<ParsedUrl> parse_http_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0) return std::nullopt;
    std::string rest = url.substr(scheme.size());
    auto slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
    if (hostport.empty()) return std::nullopt;
    ParsedUrl out;
    out.path = path;
    auto colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        out.host = hostport;
    } else {
        out.host = hostport.substr(0, colon);
        try {
            out.port = std::stoi(hostport.substr(colon + 1));
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (out.port <= 0 || out.port > 65535) return std::nullopt;
    }
    if (out.host.empty()) return std::nullopt;
    return out;
}

IngestReport scrape_once(const ScrapeTarget& target, TimeSeriesStore& store, const Clock& clock) {
    const std::int64_t scrape_time = clock.now_ms();
    auto up_sample = [&](double v) {
        return MetricSample{SeriesKey("up", {{"service", target.service_name}}), scrape_time, v};
    };

    auto url = parse_http_url(target.url);
    std::optional<std::string> body;
    if (url) {
        httplib::Client client(url->host, url->port);
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(5, 0);
        if (auto res = client.Get(url->path); res && res->status == 200) body = res->body;
    }

    std::vector<MetricSample> batch;
    if (body) {
        try {
            Exposition exp = parse_exposition(*body, scrape_time);
            for (auto& f : exp.families) store.register_family(std::move(f));
            batch = std::move(exp.samples);
            batch.push_back(up_sample(1));
        } catch (const EncodingError&) {
            batch = {up_sample(0)};
        }
    } else {
        batch = {up_sample(0)};
    }
    return store.ingest(batch);
}

} // namespace slokit::metrics
