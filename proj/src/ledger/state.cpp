#include "slokit/ledger/state.hpp"

#include <charconv>

namespace slokit::ledger {

namespace {

std::optional<Json> parse_payload(const Transaction& tx) {
    auto j = try_parse_json(tx.payload);
    if (!j || !j->is_object()) return std::nullopt;
    return j;
}

bool get_string(const Json& j, const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

} // namespace

std::optional<std::string> ContractState::apply_tx(const Transaction& tx) {
    auto payload = parse_payload(tx);
    if (!payload) return "malformed payload: expected a JSON object";

    // Everything except self-registration requires an active submitter id.
    if (!(tx.contract == Contract::identity && tx.action == "register") &&
        !identity_active(tx.submitter))
        return "submitter '" + tx.submitter + "' is not an active identity";

    switch (tx.contract) {
        case Contract::identity: return apply_identity(tx, *payload);
        case Contract::service_registry: return apply_service_registry(tx, *payload);
        case Contract::federated_learning: return apply_federated_learning(tx, *payload);
        case Contract::llm: return apply_llm(tx, *payload);
        case Contract::nft: return apply_nft(tx, *payload);
    }
    return "unknown contract";
}

void ContractState::apply_block(const Block& block) {
    for (const auto& tx : block.txs) {
        if (auto reason = apply_tx(tx)) {
            auto& errors = meta_["errors"];
            if (!errors.is_array()) errors = Json::array();
            errors.push_back(Json{{"height", block.height},
                                  {"reason", *reason},
                                  {"tx_id", hex_encode(tx.tx_id)}});
        }
    }
}

Hash256 ContractState::state_hash() const { return sha256(canonical_json(to_json())); }

Json ContractState::to_json() const {
    Json out;
    for (std::size_t i = 0; i < kContractCount; ++i) {
        Json store = Json::object();
        for (const auto& [k, v] : stores_[i]) store[k] = v;
        out[std::string(contract_name(static_cast<Contract>(i)))] = std::move(store);
    }
    Json meta = Json::object();
    for (const auto& [k, v] : meta_) meta[k] = v;
    out["meta"] = std::move(meta);
    return out;
}

std::optional<Json> ContractState::lookup(Contract c, const std::string& key) const {
    const auto& store = stores_[static_cast<std::size_t>(c)];
    auto it = store.find(key);
    if (it == store.end()) return std::nullopt;
    return it->second;
}

const std::map<std::string, Json>& ContractState::contract_store(Contract c) const {
    return stores_[static_cast<std::size_t>(c)];
}

bool ContractState::identity_active(const std::string& id) const {
    auto rec = lookup(Contract::identity, id);
    return rec && !rec->value("revoked", false);
}

std::optional<Json> ContractState::service(const std::string& name) const {
    return lookup(Contract::service_registry, name);
}

std::vector<Json> ContractState::services() const {
    std::vector<Json> out;
    for (const auto& [_, v] : contract_store(Contract::service_registry)) out.push_back(v);
    return out;
}

std::vector<Json> ContractState::slo_records() const {
    std::vector<Json> out; // keys are zero-padded sequence numbers: map order = insertion order
    for (const auto& [_, v] : contract_store(Contract::llm)) out.push_back(v);
    return out;
}

std::optional<Json> ContractState::token(const std::string& token_id_hex) const {
    return lookup(Contract::nft, "token/" + token_id_hex);
}

std::uint64_t ContractState::latest_token_version(const std::string& service,
                                                  const std::string& kind,
                                                  const std::string& object_name) const {
    auto rec = lookup(Contract::nft, "version/" + service + "/" + kind + "/" + object_name);
    if (!rec) return 0;
    return rec->get<std::uint64_t>();
}

std::string ContractState::next_seq_key(const char* prefix) {
    auto& seq = meta_["next_seq"];
    std::uint64_t n = seq.is_number_unsigned() ? seq.get<std::uint64_t>() : 0;
    seq = n + 1;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s/%012llu", prefix, static_cast<unsigned long long>(n));
    return buf;
}

std::optional<std::string> ContractState::apply_identity(const Transaction& tx, const Json& p) {
    auto& store = stores_[static_cast<std::size_t>(Contract::identity)];
    std::string id;
    if (!get_string(p, "id", id) || id.empty()) return "identity: missing id";
    if (tx.action == "register") {
        if (store.contains(id)) return "identity: '" + id + "' already registered";
        store[id] = Json{{"id", id}, {"revoked", false}};
        return std::nullopt;
    }
    if (tx.action == "revoke") {
        auto it = store.find(id);
        if (it == store.end()) return "identity: '" + id + "' not registered";
        it->second["revoked"] = true;
        return std::nullopt;
    }
    return "identity: unknown action '" + tx.action + "'";
}

std::optional<std::string> ContractState::apply_service_registry(const Transaction& tx,
                                                                 const Json& p) {
    auto& store = stores_[static_cast<std::size_t>(Contract::service_registry)];
    std::string name;
    if (!get_string(p, "name", name) || name.empty()) return "service_registry: missing name";
    if (tx.action == "register") {
        if (store.contains(name)) return "service_registry: '" + name + "' already registered";
        store[name] = p;
        return std::nullopt;
    }
    if (tx.action == "update") {
        auto it = store.find(name);
        if (it == store.end()) return "service_registry: '" + name + "' not registered";
        it->second = p;
        return std::nullopt;
    }
    return "service_registry: unknown action '" + tx.action + "'";
}

std::optional<std::string> ContractState::apply_federated_learning(const Transaction& tx,
                                                                   const Json& p) {
    auto& store = stores_[static_cast<std::size_t>(Contract::federated_learning)];
    auto round_of = [&](std::uint64_t& out) {
        auto it = p.find("round");
        if (it == p.end() || !it->is_number_unsigned()) return false;
        out = it->get<std::uint64_t>();
        return true;
    };
    std::uint64_t round = 0;
    if (!round_of(round)) return "federated_learning: missing round";
    const std::string round_key = "round/" + std::to_string(round);

    if (tx.action == "open_round") {
        if (store.contains(round_key))
            return "federated_learning: round " + std::to_string(round) + " already open";
        if (!p.contains("expected_peers") || !p.at("expected_peers").is_array())
            return "federated_learning: missing expected_peers";
        Json rec = p;
        rec["sealed"] = false;
        store[round_key] = std::move(rec);
        return std::nullopt;
    }
    if (tx.action == "publish_update") {
        auto round_it = store.find(round_key);
        if (round_it == store.end()) return "federated_learning: round not open";
        if (round_it->second.value("sealed", false)) return "federated_learning: round sealed";
        std::string peer;
        if (!get_string(p, "peer", peer)) return "federated_learning: missing peer";
        bool expected = false;
        for (const auto& e : round_it->second.at("expected_peers"))
            if (e.is_string() && e.get<std::string>() == peer) expected = true;
        if (!expected) return "federated_learning: peer '" + peer + "' not in round";
        const std::string update_key = "update/" + std::to_string(round) + "/" + peer;
        if (store.contains(update_key))
            return "federated_learning: duplicate update for (round, peer)";
        store[update_key] = p;
        return std::nullopt;
    }
    if (tx.action == "seal_round") {
        auto round_it = store.find(round_key);
        if (round_it == store.end()) return "federated_learning: round not open";
        std::string agg_hash;
        if (!get_string(p, "aggregate_hash", agg_hash))
            return "federated_learning: missing aggregate_hash";
        if (round_it->second.value("sealed", false)) {
            // idempotent agreement: identical re-seals are a no-op
            if (round_it->second.value("aggregate_hash", std::string()) == agg_hash)
                return std::nullopt;
            return "federated_learning: conflicting seal for round " + std::to_string(round);
        }
        round_it->second["sealed"] = true;
        round_it->second["aggregate_hash"] = agg_hash;
        return std::nullopt;
    }
    return "federated_learning: unknown action '" + tx.action + "'";
}

std::optional<std::string> ContractState::apply_llm(const Transaction& tx, const Json& p) {
    auto& store = stores_[static_cast<std::size_t>(Contract::llm)];
    if (tx.action != "record") return "llm: unknown action '" + tx.action + "'";
    std::string service;
    if (!get_string(p, "service", service)) return "llm: missing service";
    if (!p.contains("slo")) return "llm: missing slo";
    Json rec = p;
    rec["tx_id"] = hex_encode(tx.tx_id);
    store[next_seq_key("record")] = std::move(rec);
    return std::nullopt;
}

std::optional<std::string> ContractState::apply_nft(const Transaction& tx, const Json& p) {
    auto& store = stores_[static_cast<std::size_t>(Contract::nft)];
    if (tx.action == "mint") {
        auto tok_it = p.find("token");
        if (tok_it == p.end() || !tok_it->is_object()) return "nft: missing token";
        const Json& token = *tok_it;
        std::string token_id, kind, service, object_name;
        if (!get_string(token, "token_id", token_id)) return "nft: missing token_id";
        if (!get_string(token, "kind", kind)) return "nft: missing kind";
        if (!get_string(token, "service", service)) return "nft: missing service";
        if (!get_string(token, "name", object_name)) return "nft: missing name";
        if (!token.contains("version") || !token.at("version").is_number_unsigned())
            return "nft: missing version";
        const std::string token_key = "token/" + token_id;
        if (store.contains(token_key)) return "nft: token already minted";
        const std::uint64_t version = token.at("version").get<std::uint64_t>();
        const std::string version_key = "version/" + service + "/" + kind + "/" + object_name;
        const std::uint64_t latest = latest_token_version(service, kind, object_name);
        if (version != latest + 1)
            return "nft: version " + std::to_string(version) + " does not follow " +
                   std::to_string(latest);
        Json rec = Json{{"owner", tx.submitter}, {"token", token}};
        store[token_key] = std::move(rec);
        store[version_key] = version;
        return std::nullopt;
    }
    if (tx.action == "transfer") {
        std::string token_id, new_owner;
        if (!get_string(p, "token_id", token_id)) return "nft: missing token_id";
        if (!get_string(p, "new_owner", new_owner)) return "nft: missing new_owner";
        auto it = store.find("token/" + token_id);
        if (it == store.end()) return "nft: token not found";
        if (!identity_active(new_owner)) return "nft: new owner is not an active identity";
        if (it->second.value("owner", std::string()) != tx.submitter)
            return "nft: submitter does not own token";
        it->second["owner"] = new_owner;
        return std::nullopt;
    }
    return "nft: unknown action '" + tx.action + "'";
}

} // namespace slokit::ledger
