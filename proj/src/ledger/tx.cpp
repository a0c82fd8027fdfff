#include "slokit/ledger/tx.hpp"

namespace slokit::ledger {

std::string_view contract_name(Contract c) {
    switch (c) {
        case Contract::identity: return "identity";
        case Contract::service_registry: return "service_registry";
        case Contract::federated_learning: return "federated_learning";
        case Contract::llm: return "llm";
        case Contract::nft: return "nft";
    }
    return "";
}

std::optional<Contract> contract_from_name(std::string_view name) {
    for (Contract c : {Contract::identity, Contract::service_registry,
                       Contract::federated_learning, Contract::llm, Contract::nft})
        if (contract_name(c) == name) return c;
    return std::nullopt;
}

Hash256 Transaction::compute_id(Contract contract, const std::string& action,
                                const std::string& payload, const std::string& submitter,
                                std::uint64_t nonce) {
    return Preimage{}
        .field(contract_name(contract))
        .field(action)
        .field(payload)
        .field(submitter)
        .u64(nonce)
        .hash();
}

Transaction Transaction::make(Contract contract, std::string action, std::string payload,
                              std::string submitter, std::uint64_t nonce) {
    Transaction tx;
    tx.contract = contract;
    tx.action = std::move(action);
    tx.payload = std::move(payload);
    tx.submitter = std::move(submitter);
    tx.nonce = nonce;
    tx.tx_id = compute_id(tx.contract, tx.action, tx.payload, tx.submitter, tx.nonce);
    return tx;
}

bool Transaction::id_valid() const {
    return tx_id == compute_id(contract, action, payload, submitter, nonce);
}

Json tx_to_json(const Transaction& tx) {
    return Json{{"action", tx.action},
                {"contract", std::string(contract_name(tx.contract))},
                {"nonce", tx.nonce},
                {"payload", tx.payload},
                {"submitter", tx.submitter},
                {"tx_id", hex_encode(tx.tx_id)}};
}

std::optional<Transaction> tx_from_json(const Json& j) {
    try {
        Transaction tx;
        auto c = contract_from_name(j.at("contract").get<std::string>());
        if (!c) return std::nullopt;
        tx.contract = *c;
        tx.action = j.at("action").get<std::string>();
        tx.payload = j.at("payload").get<std::string>();
        tx.submitter = j.at("submitter").get<std::string>();
        tx.nonce = j.at("nonce").get<std::uint64_t>();
        auto id = hex_decode32(j.at("tx_id").get<std::string>());
        if (!id) return std::nullopt;
        tx.tx_id = *id;
        return tx;
    } catch (const Json::exception&) {
        return std::nullopt;
    }
}

} // namespace slokit::ledger
