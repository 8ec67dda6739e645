#pragma once

#include <cstdint>
#include <limits>

namespace iovsim {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

}  // namespace iovsim
