#include "slokit/ledger/network.hpp"

#include <algorithm>
#include <cmath>

namespace slokit::ledger {

double BlockTimeReport::mean_ms() const {
    if (rows.empty()) return 0;
    double sum = 0;
    for (const auto& r : rows) sum += static_cast<double>(r.accept_latency_ms);
    return sum / static_cast<double>(rows.size());
}

double BlockTimeReport::p95_ms() const {
    if (rows.empty()) return 0;
    std::vector<std::int64_t> lat;
    lat.reserve(rows.size());
    for (const auto& r : rows) lat.push_back(r.accept_latency_ms);
    std::sort(lat.begin(), lat.end());
    std::size_t idx = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(lat.size())));
    return static_cast<double>(lat[idx == 0 ? 0 : idx - 1]);
}

std::string BlockTimeReport::to_csv() const {
    std::string out = "height,proposer,tx_count,accept_latency_ms\n";
    for (const auto& r : rows) {
        out += std::to_string(r.height) + "," + r.proposer + "," + std::to_string(r.tx_count) +
               "," + std::to_string(r.accept_latency_ms) + "\n";
    }
    return out;
}

namespace {
std::vector<std::string> make_peer_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("peer-" + std::to_string(i));
    return ids;
}
} // namespace

SimNetwork::SimNetwork(NetworkConfig cfg) : cfg_(cfg) {
    if (cfg_.peer_count < 1) throw std::invalid_argument("SimNetwork: need at least one peer");
    auto ids = make_peer_ids(cfg_.peer_count);
    for (std::size_t i = 0; i < cfg_.peer_count; ++i)
        peers_.push_back(std::make_unique<Peer>(ids, i));
    schedule(cfg_.block_interval_ms, 1, [this] { tick(); });
}

void SimNetwork::schedule(std::int64_t at, int phase, std::function<void()> fn) {
    events_.push(Event{at, phase, seq_++, std::move(fn)});
}

SubmitResult SimNetwork::submit_tx(std::size_t origin, const Transaction& tx) {
    SubmitResult res = peers_[origin]->accept_tx(tx);
    if (res != SubmitResult::accepted) return res;
    first_gossip_.emplace(tx.tx_id, now());
    for (std::size_t p = 0; p < peers_.size(); ++p) {
        if (p == origin) continue;
        ++delivery_count_;
        schedule(now() + cfg_.gossip_latency_ms, 0, [this, p, tx] {
            --delivery_count_;
            peers_[p]->accept_tx(tx); // duplicates are dropped
        });
    }
    return res;
}

void SimNetwork::tick() {
    for (std::size_t p = 0; p < peers_.size(); ++p) {
        Peer& peer = *peers_[p];
        if (!peer.is_next_leader()) continue;
        auto outcome = peer.propose(now(), cfg_.max_block_txs, cfg_.heartbeat_blocks);
        if (!outcome.block) continue;
        const Block& block = *outcome.block;
        std::int64_t started = block.txs.empty() ? now() : first_gossip_.at(block.txs[0].tx_id);
        pending_measures_[block.block_hash] = {started, 0};
        peer.apply_block(block); // proposer accepts its own block immediately
        note_applied(p, block);
        for (std::size_t q = 0; q < peers_.size(); ++q) {
            if (q == p) continue;
            ++delivery_count_;
            schedule(now() + cfg_.gossip_latency_ms, 0, [this, q, block] {
                --delivery_count_;
                deliver_block(q, block);
            });
        }
    }
    schedule(now() + cfg_.block_interval_ms, 1, [this] { tick(); });
}

void SimNetwork::deliver_block(std::size_t peer_idx, const Block& block) {
    Peer& peer = *peers_[peer_idx];
    if (!peer.validate_block(block).empty()) {
        ++rejected_blocks_;
        return;
    }
    peer.apply_block(block);
    note_applied(peer_idx, block);
}

void SimNetwork::note_applied(std::size_t peer_idx, const Block& block) {
    auto it = pending_measures_.find(block.block_hash);
    if (it != pending_measures_.end() && ++it->second.applied == peers_.size()) {
        report_.rows.push_back({block.height, block.proposer, block.txs.size(),
                                now() - it->second.started_at});
        pending_measures_.erase(it);
    }
    if (on_block_applied_) on_block_applied_(peer_idx, block);
}

void SimNetwork::run_until(std::int64_t t_ms) {
    while (!events_.empty() && events_.top().at <= t_ms) {
        Event ev = events_.top();
        events_.pop();
        clock_.advance_to(ev.at);
        ev.fn();
    }
    if (t_ms > clock_.now_ms()) clock_.advance_to(t_ms);
}

bool SimNetwork::run_until_quiescent(std::int64_t max_t_ms) {
    auto quiescent = [this] {
        if (pending_deliveries()) return false;
        for (const auto& p : peers_)
            if (!p->mempool().empty()) return false;
        return chains_identical();
    };
    while (now() < max_t_ms) {
        if (quiescent()) return true;
        run_until(std::min(max_t_ms, now() + cfg_.block_interval_ms));
    }
    return quiescent();
}

bool SimNetwork::chains_identical() const {
    for (std::size_t p = 1; p < peers_.size(); ++p) {
        const auto& a = peers_[0]->chain();
        const auto& b = peers_[p]->chain();
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].block_hash != b[i].block_hash) return false;
    }
    return true;
}

BlockTimeReport run_network(const NetworkConfig& cfg, double tx_rate_per_s,
                            std::int64_t duration_ms) {
    SimNetwork net(cfg);
    const std::int64_t gap_ms =
        tx_rate_per_s > 0 ? std::max<std::int64_t>(1, std::llround(1000.0 / tx_rate_per_s)) : 0;
    std::uint64_t i = 0;
    for (std::int64_t t = 0; gap_ms > 0 && t < duration_ms; t += gap_ms, ++i) {
        net.run_until(t);
        auto tx = Transaction::make(
            Contract::identity, "register",
            canonical_json(Json{{"id", "bench-user-" + std::to_string(i)}}),
            "bench-user-" + std::to_string(i), i);
        net.submit_tx(i % cfg.peer_count, tx);
    }
    net.run_until_quiescent(duration_ms + 64 * (cfg.block_interval_ms + cfg.gossip_latency_ms));
    return net.report();
}

} // namespace slokit::ledger
