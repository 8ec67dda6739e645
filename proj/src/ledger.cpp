#include "iovsim/ledger.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "iovsim/error.hpp"
#include "iovsim/rng.hpp"

namespace iovsim {

void ChainCostModel::validate() const {
    for (double c : {dr, dv, dh, dw})
        if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("chain cost model delays must be finite and >= 0");
}

double block_add_delay(std::uint64_t nb, const ChainCostModel& cost) {
    if (nb < 1) throw std::invalid_argument("block_add_delay: nb must be >= 1");
    const auto n = static_cast<double>(nb);
    return n * (cost.dr + cost.dv) + (n - 1.0) * cost.dh + cost.dw;
}

double rejection_delay(std::uint64_t segment_len, const ChainCostModel& cost) {
    return static_cast<double>(segment_len) * cost.dv;
}

std::uint64_t link_digest(std::uint64_t prev_digest, std::uint64_t payload_digest) {
    return mix64(prev_digest ^ mix64(payload_digest + 0x51ed27a3ULL));
}

std::uint64_t Chain::tip_digest() const {
    if (blocks_.empty()) return anchor_;
    const Block& b = blocks_.back();
    return link_digest(b.prev_digest, b.payload_digest);
}

Block Chain::make_block(std::uint64_t payload, NodeId miner) const {
    Block b;
    b.index = blocks_.empty() ? 0 : blocks_.back().index + 1;
    b.payload_digest = mix64(payload);
    b.prev_digest = tip_digest();
    b.miner = miner;
    return b;
}

Block Chain::forge_block(std::uint64_t payload, NodeId miner) const {
    Block b = make_block(payload, miner);
    b.prev_digest = ~b.prev_digest;
    return b;
}

bool Chain::verify() const {
    std::uint64_t expected = anchor_;
    for (const Block& b : blocks_) {
        if ((b.prev_digest == expected) != b.valid) return false;
        expected = link_digest(b.prev_digest, b.payload_digest);
    }
    return true;
}

AppendResult append(Chain& chain, Block block, const ChainCostModel& cost) {
    if (!chain.links(block)) return {rejection_delay(chain.size(), cost), false};
    block.valid = true;
    chain.push(block);
    return {block_add_delay(chain.size(), cost), true};
}

void SidechainConfig::validate() const {
    if (total_len < 2 || split_point < 1 || split_point > total_len - 1)
        throw std::invalid_argument("sidechain split_point " + std::to_string(split_point) + " invalid for length " +
                                    std::to_string(total_len));
}

std::pair<Chain, Chain> split(const Chain& chain, SidechainConfig cfg) {
    cfg.validate();
    if (cfg.total_len != chain.size())
        throw std::invalid_argument("split: config length " + std::to_string(cfg.total_len) +
                                    " does not match chain length " + std::to_string(chain.size()));
    const auto& blocks = chain.blocks();
    const auto mid = blocks.begin() + static_cast<std::ptrdiff_t>(cfg.split_point);
    Chain a(chain.anchor(), std::vector<Block>(blocks.begin(), mid));
    Chain b(a.tip_digest(), std::vector<Block>(mid, blocks.end()));
    return {std::move(a), std::move(b)};
}

Chain concatenate(const Chain& a, const Chain& b) {
    std::vector<Block> blocks = a.blocks();
    blocks.insert(blocks.end(), b.blocks().begin(), b.blocks().end());
    return Chain(a.anchor(), std::move(blocks));
}

SegmentSide active_segment(const Chain& a, const Chain& b) {
    return b.size() < a.size() ? SegmentSide::b : SegmentSide::a;
}

Ledger::Ledger(ChainCostModel cost) : cost_(cost), segments_(1) { cost_.validate(); }

std::size_t Ledger::main_length() const {
    std::size_t n = 0;
    for (const Chain& c : segments_) n += c.size();
    return n;
}

AppendResult Ledger::append(std::size_t segment, const Block& b) {
    if (segment >= segments_.size())
        throw std::out_of_range("append: no segment " + std::to_string(segment));
    const AppendResult r = iovsim::append(segments_[segment], b, cost_);
    if (!r.accepted) ++rejected_;
    cumulative_delay_ += r.delay_ms;
    return r;
}

void Ledger::resplit(SidechainConfig cfg) {
    auto [a, b] = split(active(), cfg);
    const bool b_active = active_segment(a, b) == SegmentSide::b;
    segments_[active_] = std::move(a);
    segments_.insert(segments_.begin() + static_cast<std::ptrdiff_t>(active_) + 1, std::move(b));
    if (b_active) ++active_;
}

}  // namespace iovsim
