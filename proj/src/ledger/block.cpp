#include "slokit/ledger/block.hpp"

#include <sstream>

namespace slokit::ledger {

Hash256 Block::compute_hash(const Block& b) {
    Preimage p;
    p.u64(b.height).raw(b.prev_hash).i64(b.timestamp_ms).field(b.proposer);
    for (const auto& tx : b.txs) p.raw(tx.tx_id);
    return p.hash();
}

Block make_block(std::uint64_t height, const Hash256& prev_hash, std::int64_t timestamp_ms,
                 std::string proposer, std::vector<Transaction> txs) {
    Block b;
    b.height = height;
    b.prev_hash = prev_hash;
    b.timestamp_ms = timestamp_ms;
    b.proposer = std::move(proposer);
    b.txs = std::move(txs);
    b.block_hash = Block::compute_hash(b);
    return b;
}

Json block_to_json(const Block& b) {
    Json txs = Json::array();
    for (const auto& tx : b.txs) txs.push_back(tx_to_json(tx));
    return Json{{"block_hash", hex_encode(b.block_hash)},
                {"height", b.height},
                {"prev_hash", hex_encode(b.prev_hash)},
                {"proposer", b.proposer},
                {"timestamp_ms", b.timestamp_ms},
                {"txs", txs}};
}

std::optional<Block> block_from_json(const Json& j) {
    try {
        Block b;
        b.height = j.at("height").get<std::uint64_t>();
        b.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
        b.proposer = j.at("proposer").get<std::string>();
        auto prev = hex_decode32(j.at("prev_hash").get<std::string>());
        auto hash = hex_decode32(j.at("block_hash").get<std::string>());
        if (!prev || !hash) return std::nullopt;
        b.prev_hash = *prev;
        b.block_hash = *hash;
        for (const auto& tj : j.at("txs")) {
            auto tx = tx_from_json(tj);
            if (!tx) return std::nullopt;
            b.txs.push_back(std::move(*tx));
        }
        return b;
    } catch (const Json::exception&) {
        return std::nullopt;
    }
}

std::string chain_to_jsonl(const std::vector<Block>& chain) {
    std::string out;
    for (const auto& b : chain) {
        out += canonical_json(block_to_json(b));
        out.push_back('\n');
    }
    return out;
}

std::optional<std::vector<Block>> chain_from_jsonl(const std::string& text) {
    std::vector<Block> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = try_parse_json(line);
        if (!j) return std::nullopt;
        auto b = block_from_json(*j);
        if (!b) return std::nullopt;
        out.push_back(std::move(*b));
    }
    return out;
}

} // namespace slokit::ledger
