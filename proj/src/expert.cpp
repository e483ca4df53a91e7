#include "maskagent/expert.hpp"

#include "maskagent/edt.hpp"
#include "maskagent/error.hpp"

namespace maskagent {

std::optional<Action> next_click(const BitMask& pred, const BitMask& gt) {
    if (!pred.same_shape(gt)) throw DimensionMismatch("next_click: prediction and target differ in size");
    const BitMask missed = gt - pred;
    const BitMask spurious = pred - gt;
    const FieldMax fn = argmax_point(edt_sq(missed));
    const FieldMax fp = argmax_point(edt_sq(spurious));
    if (fn.value == 0 && fp.value == 0) return std::nullopt;
    if (fn.value > fp.value) return Action::positive(pixel_to_norm(fn.at, gt.width(), gt.height()));
    return Action::negative(pixel_to_norm(fp.at, gt.width(), gt.height()));
}

}  // namespace maskagent
