#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "iovsim/types.hpp"

namespace iovsim {

// One completed communication as seen by a participating node. Units are
// packets, milliseconds and millijoules. Construction rejects zero-duration and
// zero-energy records so every derived ratio is finite.
class CommRecord {
public:
    CommRecord(std::uint32_t rx, std::uint32_t tx, double ts_start, double ts_complete, double e_start,
               double e_complete);

    static bool is_valid(std::uint32_t rx, std::uint32_t tx, double ts_start, double ts_complete, double e_start,
                         double e_complete);

    std::uint32_t rx() const { return rx_; }
    std::uint32_t tx() const { return tx_; }
    double ts_start() const { return ts_start_; }
    double ts_complete() const { return ts_complete_; }
    double e_start() const { return e_start_; }
    double e_complete() const { return e_complete_; }

private:
    std::uint32_t rx_;
    std::uint32_t tx_;
    double ts_start_;
    double ts_complete_;
    double e_start_;
    double e_complete_;
};

double pdr(const CommRecord& r);          // rx / tx
double rtt(const CommRecord& r);          // ms
double thr(const CommRecord& r);          // packets per ms
double energy_used(const CommRecord& r);  // mJ

// pdr * thr / (rtt * energy_used): one summand of the trust level.
double trust_term(const CommRecord& r);

// residual_energy * sum of trust_term over records; 0 for no records.
double trust_level(double residual_energy, std::span<const CommRecord> records);

// Communication history of one node. window == 0 keeps every record, otherwise
// only the most recent `window` records count.
class TrustState {
public:
    explicit TrustState(std::size_t window = 0) : window_(window) {}

    void add(const CommRecord& r);
    void clear();

    std::span<const CommRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    std::size_t window() const { return window_; }

    // Cached sum of trust_term over the current records.
    double evidence() const { return evidence_; }
    double trust_level(double residual_energy) const { return residual_energy * evidence_; }

private:
    std::size_t window_;
    std::vector<CommRecord> records_;
    double evidence_ = 0.0;
};

struct TrustEntry {
    NodeId id;
    double tl;
};

// The k entries with greatest trust level, descending; equal levels are
// ordered by lower id. Requires 1 <= k <= entries.size().
std::vector<NodeId> select_miners(std::span<const TrustEntry> entries, std::size_t k);

}  // namespace iovsim
