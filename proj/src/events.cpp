#include "iovsim/events.hpp"

#include <stdexcept>
#include <string>

namespace iovsim {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::dispatch: return "dispatch";
        case EventKind::hop: return "hop";
        case EventKind::deliver: return "deliver";
        case EventKind::block_submit: return "block_submit";
        case EventKind::attack_effect: return "attack_effect";
    }
    return "unknown";
}

const Event& EventQueue::push(Event e) {
    if (e.time < now_)
        throw std::logic_error("event scheduled at " + std::to_string(e.time) + " before now " + std::to_string(now_));
    e.seq = next_seq_++;
    heap_.push(e);
    return heap_.top();
}

Event EventQueue::pop() {
    if (heap_.empty()) throw std::logic_error("pop from empty event queue");
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    ++processed_;
    return e;
}

}  // namespace iovsim
