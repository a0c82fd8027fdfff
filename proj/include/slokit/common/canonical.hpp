#pragma once
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace slokit {

// nlohmann::json with the default std::map object backend: keys iterate in
// sorted order, so dump() below is the project's canonical encoding
// (sorted keys, no whitespace, UTF-8, doubles as shortest round-trip
// decimals). Ledger payloads, NFT tokens and export files all go through it.
using Json = nlohmann::json;

inline std::string canonical_json(const Json& j) { return j.dump(); }

inline std::optional<Json> try_parse_json(std::string_view text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

} // namespace slokit
