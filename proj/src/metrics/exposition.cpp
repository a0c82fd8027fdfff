#include "slokit/metrics/exposition.hpp"

#include <cctype>

#include "slokit/common/numfmt.hpp"

namespace slokit::metrics {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }
};

bool is_name_tail(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

std::string_view read_name(Cursor& c) {
    std::size_t start = c.pos;
    while (!c.done() && is_name_tail(c.peek())) ++c.pos;
    return c.text.substr(start, c.pos - start);
}

// Label value between quotes with \\, \", \n escapes.
std::optional<std::string> read_quoted(Cursor& c) {
    if (c.done() || c.peek() != '"') return std::nullopt;
    ++c.pos;
    std::string out;
    while (!c.done()) {
        char ch = c.text[c.pos++];
        if (ch == '"') return out;
        if (ch == '\\') {
            if (c.done()) return std::nullopt;
            char esc = c.text[c.pos++];
            switch (esc) {
                case '\\': out.push_back('\\'); break;
                case '"': out.push_back('"'); break;
                case 'n': out.push_back('\n'); break;
                default: return std::nullopt;
            }
        } else {
            out.push_back(ch);
        }
    }
    return std::nullopt; // unterminated
}

std::optional<SeriesKey::Labels> read_label_set(Cursor& c) {
    if (c.done() || c.peek() != '{') return std::nullopt;
    ++c.pos;
    SeriesKey::Labels labels;
    c.skip_ws();
    if (!c.done() && c.peek() == '}') {
        ++c.pos;
        return labels;
    }
    while (true) {
        c.skip_ws();
        std::string_view lname = read_name(c);
        if (lname.empty() || !valid_label_name(lname)) return std::nullopt;
        c.skip_ws();
        if (c.done() || c.peek() != '=') return std::nullopt;
        ++c.pos;
        c.skip_ws();
        auto value = read_quoted(c);
        if (!value) return std::nullopt;
        labels.emplace_back(std::string(lname), std::move(*value));
        c.skip_ws();
        if (c.done()) return std::nullopt;
        if (c.peek() == ',') {
            ++c.pos;
            c.skip_ws();
            if (!c.done() && c.peek() == '}') { // trailing comma tolerated
                ++c.pos;
                return labels;
            }
            continue;
        }
        if (c.peek() == '}') {
            ++c.pos;
            return labels;
        }
        return std::nullopt;
    }
}

std::string unescape_help(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\' && i + 1 < raw.size()) {
            char n = raw[i + 1];
            if (n == '\\') { out.push_back('\\'); ++i; continue; }
            if (n == 'n') { out.push_back('\n'); ++i; continue; }
        }
        out.push_back(raw[i]);
    }
    return out;
}

std::string escape_help(std::string_view raw) {
    std::string out;
    for (char ch : raw) {
        if (ch == '\\') out += "\\\\";
        else if (ch == '\n') out += "\\n";
        else out.push_back(ch);
    }
    return out;
}

} // namespace

bool valid_utf8(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        std::size_t extra;
        unsigned cp_min;
        if (c < 0x80) { ++i; continue; }
        else if ((c & 0xe0) == 0xc0) { extra = 1; cp_min = 0x80; }
        else if ((c & 0xf0) == 0xe0) { extra = 2; cp_min = 0x800; }
        else if ((c & 0xf8) == 0xf0) { extra = 3; cp_min = 0x10000; }
        else return false;
        if (i + extra >= text.size()) return false;
        unsigned cp = c & (0x3f >> extra);
        for (std::size_t k = 1; k <= extra; ++k) {
            unsigned char cc = text[i + k];
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        if (cp < cp_min || cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
        i += extra + 1;
    }
    return true;
}

std::optional<SeriesKey> parse_series_string(std::string_view text) {
    Cursor c{text};
    std::string_view name = read_name(c);
    SeriesKey::Labels labels;
    if (!c.done() && c.peek() == '{') {
        auto ls = read_label_set(c);
        if (!ls) return std::nullopt;
        labels = std::move(*ls);
    }
    if (!c.done()) return std::nullopt;
    if (name.empty() && labels.empty()) return std::nullopt;
    if (!name.empty() && !valid_metric_name(name)) return std::nullopt;
    try {
        return SeriesKey(std::string(name), std::move(labels));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

Exposition parse_exposition(std::string_view text, std::int64_t scrape_time_ms) {
    if (!valid_utf8(text)) throw EncodingError("exposition document is not valid UTF-8");

    Exposition out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    auto diag = [&](std::string msg) { out.diagnostics.push_back({line_no, std::move(msg)}); };

    while (pos <= text.size()) {
        if (pos == text.size() && line_no > 0) break;
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Cursor c{line};
        c.skip_ws();
        if (c.done()) continue;

        if (c.peek() == '#') {
            ++c.pos;
            c.skip_ws();
            std::string_view kw = read_name(c);
            if (kw == "HELP") {
                c.skip_ws();
                std::string_view name = read_name(c);
                if (name.empty() || !valid_metric_name(name)) {
                    diag("malformed HELP line");
                    continue;
                }
                c.skip_ws();
                std::string help = unescape_help(line.substr(c.pos));
                bool found = false;
                for (auto& f : out.families)
                    if (f.name == name) { f.help = help; found = true; }
                if (!found) out.families.push_back({std::string(name), MetricKind::gauge, help});
            } else if (kw == "TYPE") {
                c.skip_ws();
                std::string_view name = read_name(c);
                c.skip_ws();
                std::string_view kind_name = read_name(c);
                if (name.empty() || !valid_metric_name(name)) {
                    diag("malformed TYPE line");
                    continue;
                }
                auto kind = metric_kind_from_name(kind_name);
                if (!kind) {
                    diag("unsupported metric kind '" + std::string(kind_name) +
                         "', treating as gauge");
                    kind = MetricKind::gauge;
                }
                bool found = false;
                for (auto& f : out.families)
                    if (f.name == name) { f.kind = *kind; found = true; }
                if (!found) out.families.push_back({std::string(name), *kind, ""});
            }
            continue; // plain comment
        }

        // sample line: name{labels} value [timestamp]
        std::string_view name = read_name(c);
        if (name.empty() || !valid_metric_name(name)) {
            diag("expected metric name");
            continue;
        }
        SeriesKey::Labels labels;
        if (!c.done() && c.peek() == '{') {
            auto ls = read_label_set(c);
            if (!ls) {
                diag("malformed label set");
                continue;
            }
            labels = std::move(*ls);
        }
        c.skip_ws();
        std::size_t vstart = c.pos;
        while (!c.done() && c.peek() != ' ' && c.peek() != '\t') ++c.pos;
        auto value = parse_double(line.substr(vstart, c.pos - vstart));
        if (!value) {
            diag("malformed sample value");
            continue;
        }
        c.skip_ws();
        std::int64_t ts = scrape_time_ms;
        if (!c.done()) {
            std::size_t tstart = c.pos;
            while (!c.done() && c.peek() != ' ' && c.peek() != '\t') ++c.pos;
            std::string_view tstr = line.substr(tstart, c.pos - tstart);
            try {
                std::size_t used = 0;
                ts = std::stoll(std::string(tstr), &used);
                if (used != tstr.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                diag("malformed timestamp");
                continue;
            }
            c.skip_ws();
            if (!c.done()) {
                diag("trailing garbage after timestamp");
                continue;
            }
        }
        SeriesKey key;
        try {
            key = SeriesKey(std::string(name), std::move(labels));
        } catch (const std::invalid_argument& e) {
            diag(e.what());
            continue;
        }
        out.samples.push_back({std::move(key), ts, *value});
    }
    return out;
}

std::string serialize_exposition(const std::vector<MetricFamily>& families,
                                 const std::vector<MetricSample>& samples) {
    std::string out;
    for (const auto& f : families) {
        if (!f.help.empty()) {
            out += "# HELP ";
            out += f.name;
            out.push_back(' ');
            out += escape_help(f.help);
            out.push_back('\n');
        }
        out += "# TYPE ";
        out += f.name;
        out.push_back(' ');
        out += metric_kind_name(f.kind);
        out.push_back('\n');
        for (const auto& s : samples) {
            // histogram child series share the family prefix
            const std::string& sn = s.series.name();
            bool belongs = sn == f.name;
            if (!belongs && f.kind == MetricKind::histogram)
                belongs = sn == f.name + "_bucket" || sn == f.name + "_sum" ||
                          sn == f.name + "_count";
            if (!belongs) continue;
            out += s.series.to_string();
            out.push_back(' ');
            out += slokit::format_double(s.value);
            out.push_back(' ');
            out += std::to_string(s.timestamp_ms);
            out.push_back('\n');
        }
    }
    return out;
}

} // namespace slokit::metrics
