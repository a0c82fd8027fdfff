#pragma once
#include <deque>
#include <set>

#include "slokit/ledger/state.hpp"

namespace slokit::ledger {

enum class SubmitResult { accepted, bad_hash, duplicate_nonce, duplicate_tx, unknown_contract };
std::string_view submit_result_name(SubmitResult r);

struct ProposeOutcome {
    std::optional<Block> block;
    std::optional<std::string> error; // "NotLeader"
};

/// One ledger peer: an independent sequential state machine holding the
/// chain, the derived contract state, and a FIFO mempool. Never appends a
/// block that fails validate_block. All peers share the same static peer
/// list, so the round-robin leader schedule (height mod peer count) needs
/// no coordination.
class Peer {
public:
    Peer(std::vector<std::string> peer_ids, std::size_t index);

    const std::string& id() const { return peer_ids_[index_]; }
    std::size_t index() const { return index_; }

    SubmitResult accept_tx(const Transaction& tx);

    std::uint64_t next_height() const { return chain_.size(); }
    const std::string& leader_for(std::uint64_t height) const {
        return peer_ids_[height % peer_ids_.size()];
    }
    bool is_next_leader() const { return leader_for(next_height()) == id(); }

    /// Drains up to max_txs mempool entries (submission order) into a block.
    /// Empty mempool yields a block only when heartbeat is set. The mempool
    /// itself shrinks when the block is applied, not here.
    ProposeOutcome propose(std::int64_t now_ms, std::size_t max_txs, bool heartbeat);

    /// Itemized validation: height continuity, prev_hash linkage, hash
    /// recomputation, leader schedule, and structural validity of every tx
    /// against the current chain. Empty result means valid.
    std::vector<std::string> validate_block(const Block& block) const;

    /// Precondition: validate_block(block) is empty (throws otherwise).
    void apply_block(const Block& block);

    const std::vector<Block>& chain() const { return chain_; }
    const ContractState& state() const { return state_; }
    const std::deque<Transaction>& mempool() const { return mempool_; }

private:
    std::vector<std::string> peer_ids_;
    std::size_t index_;
    std::vector<Block> chain_;
    ContractState state_;
    std::deque<Transaction> mempool_;
    std::set<Hash256> chain_tx_ids_;
    std::set<std::pair<std::string, std::uint64_t>> chain_nonces_;
    std::set<Hash256> mempool_tx_ids_;
    std::set<std::pair<std::string, std::uint64_t>> mempool_nonces_;
};

} // namespace slokit::ledger
