#pragma once

#include <cstdint>

namespace gfrsim {

using VcId = std::uint32_t;
using ConnId = std::uint32_t;
using FrameId = std::uint64_t;

}  // namespace gfrsim
