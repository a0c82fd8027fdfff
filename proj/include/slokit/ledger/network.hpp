#pragma once
#include <functional>
#include <memory>
#include <queue>

#include "slokit/common/clock.hpp"
#include "slokit/ledger/peer.hpp"

namespace slokit::ledger {

struct NetworkConfig {
    std::size_t peer_count = 3;
    std::int64_t gossip_latency_ms = 20;
    std::int64_t block_interval_ms = 1000;
    std::size_t max_block_txs = 100;
    bool heartbeat_blocks = false;
};

struct BlockRow {
    std::uint64_t height = 0;
    std::string proposer;
    std::size_t tx_count = 0;
    std::int64_t accept_latency_ms = 0;
};

struct BlockTimeReport {
    std::vector<BlockRow> rows;

    double mean_ms() const;
    double p95_ms() const;
    std::string to_csv() const; // columns: height,proposer,tx_count,accept_latency_ms
};

/// Deterministic discrete-event simulation of the peer network: reliable
/// broadcast with a fixed gossip latency, round-robin block production on a
/// fixed tick. Each peer stays a sequential state machine; all cross-peer
/// traffic is simulated message delivery, and events at equal timestamps
/// process in insertion order, so identical inputs replay identically.
class SimNetwork {
public:
    explicit SimNetwork(NetworkConfig cfg);

    const NetworkConfig& config() const { return cfg_; }
    SimClock& clock() { return clock_; }
    std::int64_t now() const { return clock_.now_ms(); }

    Peer& peer(std::size_t i) { return *peers_[i]; }
    const Peer& peer(std::size_t i) const { return *peers_[i]; }
    std::size_t peer_count() const { return peers_.size(); }

    /// Local admission on the origin peer; on acceptance the tx is gossiped
    /// to every other peer after the configured latency.
    SubmitResult submit_tx(std::size_t origin, const Transaction& tx);

    /// Process deliveries and block-production ticks up to and including
    /// t_ms (simulated time).
    void run_until(std::int64_t t_ms);

    /// Run until every mempool is drained and every in-flight message is
    /// delivered, or until max_t_ms. Returns true when quiescent.
    bool run_until_quiescent(std::int64_t max_t_ms);

    bool chains_identical() const;

    void set_block_callback(std::function<void(std::size_t peer, const Block&)> cb) {
        on_block_applied_ = std::move(cb);
    }

    const BlockTimeReport& report() const { return report_; }
    std::size_t rejected_block_count() const { return rejected_blocks_; }

private:
    struct Event {
        std::int64_t at;
        int phase; // deliveries (0) before ticks (1) at equal timestamps
        std::uint64_t seq;
        std::function<void()> fn;
        bool operator>(const Event& o) const {
            return std::tie(at, phase, seq) > std::tie(o.at, o.phase, o.seq);
        }
    };

    void schedule(std::int64_t at, int phase, std::function<void()> fn);
    void tick();
    void deliver_block(std::size_t peer_idx, const Block& block);
    void note_applied(std::size_t peer_idx, const Block& block);
    bool pending_deliveries() const { return delivery_count_ > 0; }

    NetworkConfig cfg_;
    SimClock clock_;
    std::vector<std::unique_ptr<Peer>> peers_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::uint64_t seq_ = 0;
    std::size_t delivery_count_ = 0; // in-flight tx/block messages
    std::size_t rejected_blocks_ = 0;

    struct Measure {
        std::int64_t started_at = 0; // first gossip of the block's first tx
        std::size_t applied = 0;
    };
    std::map<Hash256, Measure> pending_measures_;
    std::map<Hash256, std::int64_t> first_gossip_;
    BlockTimeReport report_;
    std::function<void(std::size_t, const Block&)> on_block_applied_;
};

/// Fig-7-style harness: drives identity-registration txs at tx_rate for
/// duration_ms, returns per-height acceptance latencies.
BlockTimeReport run_network(const NetworkConfig& cfg, double tx_rate_per_s,
                            std::int64_t duration_ms);

} // namespace slokit::ledger
