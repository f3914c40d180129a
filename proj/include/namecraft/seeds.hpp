#pragma once

#include <cstdint>
#include <string_view>

namespace namecraft {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

// Per-stage seed derived from one global seed:
//   splitmix64(global ^ fnv1a64(stage))
std::uint64_t stage_seed(std::uint64_t global, std::string_view stage);

}  // namespace namecraft
