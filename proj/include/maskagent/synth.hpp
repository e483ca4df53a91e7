#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "maskagent/task.hpp"

namespace maskagent {

enum class ShapeFamily { disk, rectangle, ring, thin_bar, scatter };

inline constexpr int kShapeFamilyCount = 5;

std::string_view to_string(ShapeFamily family);

// Family of the i-th synthesized task (families cycle in declaration order).
ShapeFamily synth_family(int index);

// Deterministic desk-scale tasks. Foreground and background intensities
// differ by at least 64; scatter tasks have 2 or 3 separate components,
// every other family exactly one. Requires n >= 1 and side >= 16.
std::vector<Task> synth_tasks(int n, int side, std::uint64_t seed);

}  // namespace maskagent
