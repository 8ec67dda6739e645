#include "iovsim/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iovsim {

bool CommRecord::is_valid(std::uint32_t rx, std::uint32_t tx, double ts_start, double ts_complete, double e_start,
                          double e_complete) {
    return tx >= 1 && rx <= tx && std::isfinite(ts_start) && std::isfinite(ts_complete) && ts_complete > ts_start &&
           std::isfinite(e_start) && std::isfinite(e_complete) && e_start > e_complete;
}

CommRecord::CommRecord(std::uint32_t rx, std::uint32_t tx, double ts_start, double ts_complete, double e_start,
                       double e_complete)
    : rx_(rx), tx_(tx), ts_start_(ts_start), ts_complete_(ts_complete), e_start_(e_start), e_complete_(e_complete) {
    if (tx < 1) throw std::invalid_argument("CommRecord: tx must be >= 1");
    if (rx > tx) throw std::invalid_argument("CommRecord: rx exceeds tx");
    if (!(ts_complete > ts_start)) throw std::invalid_argument("CommRecord: completion must follow start");
    if (!(e_start > e_complete)) throw std::invalid_argument("CommRecord: energy must strictly decrease");
    if (!is_valid(rx, tx, ts_start, ts_complete, e_start, e_complete))
        throw std::invalid_argument("CommRecord: non-finite field");
}

double pdr(const CommRecord& r) { return static_cast<double>(r.rx()) / static_cast<double>(r.tx()); }

double rtt(const CommRecord& r) { return r.ts_complete() - r.ts_start(); }

double thr(const CommRecord& r) { return static_cast<double>(r.rx()) / rtt(r); }

double energy_used(const CommRecord& r) { return r.e_start() - r.e_complete(); }

double trust_term(const CommRecord& r) { return pdr(r) * thr(r) / (rtt(r) * energy_used(r)); }

double trust_level(double residual_energy, std::span<const CommRecord> records) {
    double sum = 0.0;
    for (const auto& r : records) sum += trust_term(r);
    return residual_energy * sum;
}

void TrustState::add(const CommRecord& r) {
    records_.push_back(r);
    if (window_ != 0 && records_.size() > window_) {
        records_.erase(records_.begin(), records_.begin() + static_cast<std::ptrdiff_t>(records_.size() - window_));
        // Cache must stay equal to an in-order sum over the retained records.
        evidence_ = 0.0;
        for (const auto& rec : records_) evidence_ += trust_term(rec);
        return;
    }
    evidence_ += trust_term(r);
}

void TrustState::clear() {
    records_.clear();
    evidence_ = 0.0;
}

std::vector<NodeId> select_miners(std::span<const TrustEntry> entries, std::size_t k) {
    if (k < 1 || k > entries.size())
        throw std::invalid_argument("select_miners: k=" + std::to_string(k) + " outside [1, " +
                                    std::to_string(entries.size()) + "]");
    std::vector<TrustEntry> sorted(entries.begin(), entries.end());
    auto by_trust = [](const TrustEntry& a, const TrustEntry& b) {
        if (a.tl != b.tl) return a.tl > b.tl;
        return a.id < b.id;
    };
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end(), by_trust);
    std::vector<NodeId> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(sorted[i].id);
    return out;
}

}  // namespace iovsim
