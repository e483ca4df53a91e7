#pragma once

#include <string_view>
#include <variant>

#include "maskagent/mask.hpp"

namespace maskagent {

enum class ActionKind { positive_click, negative_click, box };

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view text);

// A signed click at a normalized point, or a normalized box.
class Action {
public:
    static Action positive(NormPoint p) { return Action(ActionKind::positive_click, p); }
    static Action negative(NormPoint p) { return Action(ActionKind::negative_click, p); }
    static Action click(bool positive, NormPoint p) {
        return positive ? Action::positive(p) : Action::negative(p);
    }
    static Action box(NormBox b);

    ActionKind kind() const { return kind_; }
    bool is_click() const { return kind_ != ActionKind::box; }
    bool is_positive() const { return kind_ == ActionKind::positive_click; }
    bool is_negative() const { return kind_ == ActionKind::negative_click; }

    const NormPoint& point() const;
    const NormBox& corners() const;

    // Same click with the attribute flipped; boxes are returned unchanged.
    Action flipped() const;

    bool operator==(const Action&) const = default;

private:
    Action(ActionKind kind, NormPoint p);
    Action(NormBox b) : kind_(ActionKind::box), payload_(b) {}

    ActionKind kind_;
    std::variant<NormPoint, NormBox> payload_;
};

}  // namespace maskagent
