#include "slokit/ledger/peer.hpp"

#include <stdexcept>

namespace slokit::ledger {

std::string_view submit_result_name(SubmitResult r) {
    switch (r) {
        case SubmitResult::accepted: return "accepted";
        case SubmitResult::bad_hash: return "BadHash";
        case SubmitResult::duplicate_nonce: return "DuplicateNonce";
        case SubmitResult::duplicate_tx: return "DuplicateTx";
        case SubmitResult::unknown_contract: return "UnknownContract";
    }
    return "unknown";
}

Peer::Peer(std::vector<std::string> peer_ids, std::size_t index)
    : peer_ids_(std::move(peer_ids)), index_(index) {
    if (peer_ids_.empty() || index_ >= peer_ids_.size())
        throw std::invalid_argument("Peer: bad peer list or index");
    // identical genesis on every peer: height 0, zero prev_hash, no txs
    chain_.push_back(make_block(0, kZeroHash, 0, peer_ids_[0], {}));
}

SubmitResult Peer::accept_tx(const Transaction& tx) {
    if (static_cast<std::size_t>(tx.contract) >= kContractCount)
        return SubmitResult::unknown_contract;
    if (!tx.id_valid()) return SubmitResult::bad_hash;
    if (chain_tx_ids_.contains(tx.tx_id) || mempool_tx_ids_.contains(tx.tx_id))
        return SubmitResult::duplicate_tx;
    auto nonce_key = std::make_pair(tx.submitter, tx.nonce);
    if (chain_nonces_.contains(nonce_key) || mempool_nonces_.contains(nonce_key))
        return SubmitResult::duplicate_nonce;
    mempool_tx_ids_.insert(tx.tx_id);
    mempool_nonces_.insert(nonce_key);
    mempool_.push_back(tx);
    return SubmitResult::accepted;
}

ProposeOutcome Peer::propose(std::int64_t now_ms, std::size_t max_txs, bool heartbeat) {
    if (!is_next_leader()) return {.block = std::nullopt, .error = "NotLeader"};
    if (mempool_.empty() && !heartbeat) return {};
    std::vector<Transaction> txs;
    for (std::size_t i = 0; i < max_txs && i < mempool_.size(); ++i) txs.push_back(mempool_[i]);
    Block b = make_block(next_height(), chain_.back().block_hash, now_ms, id(), std::move(txs));
    return {.block = std::move(b), .error = std::nullopt};
}

std::vector<std::string> Peer::validate_block(const Block& block) const {
    std::vector<std::string> reasons;
    if (block.height != next_height())
        reasons.push_back("height " + std::to_string(block.height) + " does not extend chain at " +
                          std::to_string(next_height()));
    else if (block.prev_hash != chain_.back().block_hash)
        reasons.push_back("prev_hash does not link to chain head");
    if (!block.hash_valid()) reasons.push_back("block_hash mismatch");
    if (block.proposer != leader_for(block.height))
        reasons.push_back("proposer '" + block.proposer + "' is not the scheduled leader '" +
                          leader_for(block.height) + "'");
    std::set<std::pair<std::string, std::uint64_t>> in_block;
    std::set<Hash256> ids_in_block;
    for (const auto& tx : block.txs) {
        const std::string tag = "tx " + hex_encode(tx.tx_id).substr(0, 12);
        if (static_cast<std::size_t>(tx.contract) >= kContractCount)
            reasons.push_back(tag + ": unknown contract");
        if (!tx.id_valid()) reasons.push_back(tag + ": hash mismatch");
        if (!ids_in_block.insert(tx.tx_id).second) reasons.push_back(tag + ": duplicated in block");
        if (chain_tx_ids_.contains(tx.tx_id)) reasons.push_back(tag + ": already on chain");
        auto nonce_key = std::make_pair(tx.submitter, tx.nonce);
        if (chain_nonces_.contains(nonce_key))
            reasons.push_back(tag + ": (submitter, nonce) already used on chain");
        if (!in_block.insert(nonce_key).second)
            reasons.push_back(tag + ": duplicate (submitter, nonce) in block");
    }
    return reasons;
}

void Peer::apply_block(const Block& block) {
    if (auto reasons = validate_block(block); !reasons.empty())
        throw std::logic_error("apply_block on invalid block: " + reasons.front());
    state_.apply_block(block);
    for (const auto& tx : block.txs) {
        chain_tx_ids_.insert(tx.tx_id);
        chain_nonces_.insert({tx.submitter, tx.nonce});
        mempool_tx_ids_.erase(tx.tx_id);
        mempool_nonces_.erase({tx.submitter, tx.nonce});
        std::erase_if(mempool_, [&](const Transaction& m) { return m.tx_id == tx.tx_id; });
    }
    chain_.push_back(block);
}

} // namespace slokit::ledger
