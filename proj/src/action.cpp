#include "maskagent/action.hpp"

#include <string>

#include "maskagent/error.hpp"

namespace maskagent {

std::string_view to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::positive_click: return "positive_click";
        case ActionKind::negative_click: return "negative_click";
        case ActionKind::box: return "box";
    }
    return "unknown";
}

ActionKind parse_action_kind(std::string_view text) {
    if (text == "positive_click") return ActionKind::positive_click;
    if (text == "negative_click") return ActionKind::negative_click;
    if (text == "box") return ActionKind::box;
    throw FormatError("unknown action kind '" + std::string(text) + "'");
}

Action::Action(ActionKind kind, NormPoint p) : kind_(kind), payload_(p) {
    if (!p.valid()) {
        throw InvalidArgument("click coordinates must lie in [0,1): (" + std::to_string(p.x) + ", " +
                              std::to_string(p.y) + ")");
    }
}

Action Action::box(NormBox b) {
    if (!b.valid()) throw InvalidArgument("box corners must lie in [0,1) with x1<=x2, y1<=y2");
    return Action(b);
}

const NormPoint& Action::point() const {
    if (!is_click()) throw InvalidArgument("box action has no point");
    return std::get<NormPoint>(payload_);
}

const NormBox& Action::corners() const {
    if (is_click()) throw InvalidArgument("click action has no box");
    return std::get<NormBox>(payload_);
}

Action Action::flipped() const {
    switch (kind_) {
        case ActionKind::positive_click: return negative(point());
        case ActionKind::negative_click: return positive(point());
        case ActionKind::box: break;
    }
    return *this;
}

}  // namespace maskagent
