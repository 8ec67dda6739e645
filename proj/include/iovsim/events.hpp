#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string_view>
#include <vector>

#include "iovsim/types.hpp"

namespace iovsim {

enum class EventKind : std::uint8_t { dispatch, hop, deliver, block_submit, attack_effect };

std::string_view to_string(EventKind k);

struct Event {
    double time = 0.0;  // ms
    std::uint64_t seq = 0;
    EventKind kind = EventKind::dispatch;
    std::uint64_t comm = 0;
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    std::uint64_t packet = 0;
};

// Min-heap on (time, seq). Scheduling into the past is a logic error.
class EventQueue {
public:
    const Event& push(Event e);
    Event pop();

    bool empty() const { return heap_.empty(); }
    std::size_t pending() const { return heap_.size(); }
    double now() const { return now_; }
    std::uint64_t processed() const { return processed_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t processed_ = 0;
    double now_ = 0.0;
};

using TraceSink = std::function<void(const Event&)>;

}  // namespace iovsim
