#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "maskagent/action.hpp"
#include "maskagent/error.hpp"

namespace maskagent {

// How coordinates are written in action text.
enum class CoordFormat {
    decimal,  // 3-decimal values in [0,1), e.g. 0.175
    integer,  // integers in [0,1000), e.g. 175
};

std::string_view to_string(CoordFormat format);
CoordFormat parse_coord_format(std::string_view text);

// Quantized coordinate on the 1/1000 grid: round(v*1000) clamped to [0,999].
int quantize_coord(double v);

// `Positive point: (X, Y)`, `Negative point: (X, Y)` or `Box: (X1, Y1, X2, Y2)`.
std::string format_action(const Action& action, CoordFormat format);

// `Current mIoU: NN` with NN = round-half-up(100 * reward).
std::string format_reward(double reward);
int reward_percent(double reward);

enum class ParseErrorCode {
    empty_input,
    unknown_verb,
    out_of_range,
    malformed_number,
    malformed_syntax,
};

std::string_view to_string(ParseErrorCode code);

class ActionParseError : public FormatError {
public:
    ActionParseError(ParseErrorCode code, const std::string& what)
        : FormatError(std::string(to_string(code)) + ": " + what), code_(code) {}
    ParseErrorCode code() const { return code_; }

private:
    ParseErrorCode code_;
};

struct ParsedAction {
    std::optional<double> stated_reward;
    Action action;
};

// Optional `Current mIoU: <0..100>` line followed by one action line.
// Whitespace around punctuation is ignored, verbs are case-insensitive, and
// a trailing period is accepted.
ParsedAction parse_action(std::string_view text, CoordFormat format);

// Parses a reply that must contain a `Current mIoU: NN` line; returns NN/100.
double parse_reward(std::string_view text);

}  // namespace maskagent
