#pragma once
#include <cstdint>
#include <optional>
#include <string>

#include "slokit/common/canonical.hpp"
#include "slokit/common/hash.hpp"

namespace slokit::ledger {

enum class Contract { identity, service_registry, federated_learning, llm, nft };
inline constexpr std::size_t kContractCount = 5;

std::string_view contract_name(Contract c);
std::optional<Contract> contract_from_name(std::string_view name);

/// Ledger transaction. tx_id commits to every other field:
/// sha256(contract ‖ action ‖ payload ‖ submitter ‖ nonce) over the
/// length-prefixed byte layout in docs/formats.md. (submitter, nonce)
/// pairs are unique chain-wide.
struct Transaction {
    Hash256 tx_id{};
    Contract contract = Contract::identity;
    std::string action;
    std::string payload; // canonical JSON bytes
    std::string submitter;
    std::uint64_t nonce = 0;

    static Hash256 compute_id(Contract contract, const std::string& action,
                              const std::string& payload, const std::string& submitter,
                              std::uint64_t nonce);
    static Transaction make(Contract contract, std::string action, std::string payload,
                            std::string submitter, std::uint64_t nonce);

    bool id_valid() const;

    bool operator==(const Transaction&) const = default;
};

Json tx_to_json(const Transaction& tx);
std::optional<Transaction> tx_from_json(const Json& j); // nullopt on malformed input

} // namespace slokit::ledger
