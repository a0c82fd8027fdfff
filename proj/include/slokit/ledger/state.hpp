#pragma once
#include <array>
#include <map>
#include <optional>
#include <string>

#include "slokit/ledger/block.hpp"

namespace slokit::ledger {

/// State derived purely by replaying blocks through the five contract
/// handlers. A transaction whose handler rejects is recorded under
/// meta/errors (applied-with-error) and mutates nothing else, so identical
/// chains always reproduce identical state hashes.
class ContractState {
public:
    /// Handler dispatch. Returns the rejection reason, if any.
    std::optional<std::string> apply_tx(const Transaction& tx);

    /// Applies every tx in order, folding handler rejections into
    /// meta/errors. Performs no block validation.
    void apply_block(const Block& block);

    Hash256 state_hash() const;
    Json to_json() const;

    std::optional<Json> lookup(Contract c, const std::string& key) const;
    const std::map<std::string, Json>& contract_store(Contract c) const;
    const std::map<std::string, Json>& meta() const { return meta_; }

    // typed views used across the platform
    bool identity_active(const std::string& id) const;
    std::optional<Json> service(const std::string& name) const;
    std::vector<Json> services() const;
    std::vector<Json> slo_records() const; // insertion order
    std::optional<Json> token(const std::string& token_id_hex) const;
    std::uint64_t latest_token_version(const std::string& service, const std::string& kind,
                                       const std::string& object_name) const;

private:
    std::optional<std::string> apply_identity(const Transaction& tx, const Json& p);
    std::optional<std::string> apply_service_registry(const Transaction& tx, const Json& p);
    std::optional<std::string> apply_federated_learning(const Transaction& tx, const Json& p);
    std::optional<std::string> apply_llm(const Transaction& tx, const Json& p);
    std::optional<std::string> apply_nft(const Transaction& tx, const Json& p);

    std::string next_seq_key(const char* prefix);

    std::array<std::map<std::string, Json>, kContractCount> stores_;
    std::map<std::string, Json> meta_;
};

} // namespace slokit::ledger
