#pragma once

#include <optional>

#include "maskagent/action.hpp"
#include "maskagent/mask.hpp"

namespace maskagent {

// Click simulator: clicks the deepest pixel of the larger error region.
//
// Missed pixels (gt & ~pred) and spurious pixels (pred & ~gt) each get an exact
// squared distance transform. A positive click goes to the first row-major
// maximum of the missed region when its depth is strictly larger; otherwise a
// negative click goes to the spurious region's maximum, so equal depths pick
// the negative click. Returns nothing when pred == gt.
std::optional<Action> next_click(const BitMask& pred, const BitMask& gt);

}  // namespace maskagent
