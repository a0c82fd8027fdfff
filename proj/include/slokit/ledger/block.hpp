#pragma once
#include <vector>

#include "slokit/ledger/tx.hpp"

namespace slokit::ledger {

/// Hash-chained block. block_hash = sha256(height ‖ prev_hash ‖ timestamp ‖
/// proposer ‖ concatenated tx_ids); genesis has height 0 and an all-zero
/// prev_hash; heights are consecutive.
struct Block {
    std::uint64_t height = 0;
    Hash256 prev_hash{};
    std::int64_t timestamp_ms = 0;
    std::string proposer;
    std::vector<Transaction> txs;
    Hash256 block_hash{};

    static Hash256 compute_hash(const Block& b);
    bool hash_valid() const { return block_hash == compute_hash(*this); }
};

Block make_block(std::uint64_t height, const Hash256& prev_hash, std::int64_t timestamp_ms,
                 std::string proposer, std::vector<Transaction> txs);

Json block_to_json(const Block& b);
std::optional<Block> block_from_json(const Json& j);

/// Chain dump: one canonical-encoded block per line.
std::string chain_to_jsonl(const std::vector<Block>& chain);
std::optional<std::vector<Block>> chain_from_jsonl(const std::string& text);

} // namespace slokit::ledger
