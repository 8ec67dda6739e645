#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "iovsim/types.hpp"

namespace iovsim {

// Per-block processing delays in ms: read, verify, hash, write.
struct ChainCostModel {
    double dr = 0.01;
    double dv = 0.01;
    double dh = 0.01;
    double dw = 0.01;

    void validate() const;
};

// Delay to append a block so that the chain holds nb blocks:
// nb*(dr+dv) + (nb-1)*dh + dw.
double block_add_delay(std::uint64_t nb, const ChainCostModel& cost);

// Delay charged for rejecting an invalid block against a segment of
// `segment_len` blocks: a verification scan, segment_len * dv.
double rejection_delay(std::uint64_t segment_len, const ChainCostModel& cost);

inline constexpr std::uint64_t kGenesisAnchor = 0x10f5a1d0c0ffee01ULL;

struct Block {
    std::uint64_t index = 0;
    std::uint64_t payload_digest = 0;
    std::uint64_t prev_digest = 0;
    NodeId miner = kNoNode;
    bool valid = false;
};

// Chain value of a block: what its successor must carry as prev_digest.
std::uint64_t link_digest(std::uint64_t prev_digest, std::uint64_t payload_digest);

class Chain {
public:
    explicit Chain(std::uint64_t anchor = kGenesisAnchor) : anchor_(anchor) {}
    Chain(std::uint64_t anchor, std::vector<Block> blocks) : anchor_(anchor), blocks_(std::move(blocks)) {}

    std::size_t size() const { return blocks_.size(); }
    bool empty() const { return blocks_.empty(); }
    const std::vector<Block>& blocks() const { return blocks_; }
    std::uint64_t anchor() const { return anchor_; }

    // Digest the next block must reference.
    std::uint64_t tip_digest() const;

    // A block correctly linked to the current tip.
    Block make_block(std::uint64_t payload, NodeId miner) const;
    // A block whose prev_digest does not match the tip.
    Block forge_block(std::uint64_t payload, NodeId miner) const;

    bool links(const Block& b) const { return b.prev_digest == tip_digest(); }

    // Recomputes every link and checks it against the stored valid flags.
    bool verify() const;

    void push(Block b) { blocks_.push_back(b); }

private:
    std::uint64_t anchor_;
    std::vector<Block> blocks_;
};

struct AppendResult {
    double delay_ms = 0.0;
    bool accepted = false;
};

// Valid blocks are appended at block_add_delay(new length); invalid ones are
// rejected at rejection_delay(current length) and leave the chain unchanged.
AppendResult append(Chain& chain, Block block, const ChainCostModel& cost);

struct SidechainConfig {
    std::size_t split_point = 1;  // length of the first part
    std::size_t total_len = 2;

    void validate() const;
};

// Splits into (first split_point blocks, remainder). The second part is
// anchored on the first part's tip so both verify independently.
std::pair<Chain, Chain> split(const Chain& chain, SidechainConfig cfg);

Chain concatenate(const Chain& a, const Chain& b);

enum class SegmentSide : std::uint8_t { a, b };

// The shorter segment; a on ties.
SegmentSide active_segment(const Chain& a, const Chain& b);

// A chain kept as a list of segments, one of which receives new blocks.
class Ledger {
public:
    explicit Ledger(ChainCostModel cost);

    const ChainCostModel& cost() const { return cost_; }
    const std::vector<Chain>& segments() const { return segments_; }
    std::size_t active_index() const { return active_; }
    const Chain& active() const { return segments_[active_]; }

    std::size_t main_length() const;
    std::size_t active_length() const { return active().size(); }
    std::uint64_t rejected() const { return rejected_; }
    double cumulative_delay() const { return cumulative_delay_; }

    Block make_block(std::uint64_t payload, NodeId miner) const { return active().make_block(payload, miner); }
    Block forge_block(std::uint64_t payload, NodeId miner) const { return active().forge_block(payload, miner); }

    AppendResult append(std::size_t segment, const Block& b);
    AppendResult append_active(const Block& b) { return append(active_, b); }

    // Splits the active segment and activates the shorter part.
    void resplit(SidechainConfig cfg);

private:
    ChainCostModel cost_;
    std::vector<Chain> segments_;
    std::size_t active_ = 0;
    std::uint64_t rejected_ = 0;
    double cumulative_delay_ = 0.0;
};

}  // namespace iovsim
