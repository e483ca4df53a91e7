#include "maskagent/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace maskagent {

std::string_view to_string(CoordFormat format) {
    return format == CoordFormat::decimal ? "decimal" : "integer";
}

CoordFormat parse_coord_format(std::string_view text) {
    if (text == "decimal" || text == "decimal_0_1") return CoordFormat::decimal;
    if (text == "integer" || text == "integer_0_1000") return CoordFormat::integer;
    throw InvalidArgument("unknown coordinate format '" + std::string(text) + "'");
}

std::string_view to_string(ParseErrorCode code) {
    switch (code) {
        case ParseErrorCode::empty_input: return "empty_input";
        case ParseErrorCode::unknown_verb: return "unknown_verb";
        case ParseErrorCode::out_of_range: return "out_of_range";
        case ParseErrorCode::malformed_number: return "malformed_number";
        case ParseErrorCode::malformed_syntax: return "malformed_syntax";
    }
    return "unknown";
}

int quantize_coord(double v) {
    const double r = std::round(v * 1000.0);
    if (!(r >= 0.0)) return 0;
    return static_cast<int>(std::min(r, 999.0));
}

namespace {

std::string coord_text(double v, CoordFormat format) {
    const int q = quantize_coord(v);
    char buf[16];
    if (format == CoordFormat::integer) {
        std::snprintf(buf, sizeof buf, "%d", q);
    } else {
        std::snprintf(buf, sizeof buf, "0.%03d", q);
    }
    return buf;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> nonempty_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = trim(text.substr(0, nl));
        if (!line.empty()) lines.push_back(line);
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

constexpr std::string_view kRewardPrefix = "current miou";

bool is_reward_line(std::string_view line) {
    return lower(line.substr(0, kRewardPrefix.size())) == kRewardPrefix;
}

double parse_reward_line(std::string_view line) {
    auto rest = trim(line.substr(kRewardPrefix.size()));
    if (!rest.empty() && rest.front() == ':') rest = trim(rest.substr(1));
    if (!rest.empty() && rest.back() == '.') rest = trim(rest.substr(0, rest.size() - 1));
    if (rest.empty()) throw ActionParseError(ParseErrorCode::malformed_number, "missing mIoU value");
    long value = 0;
    const auto [end, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc() || end != rest.data() + rest.size()) {
        throw ActionParseError(ParseErrorCode::malformed_number, "bad mIoU value '" + std::string(rest) + "'");
    }
    if (value < 0 || value > 100) {
        throw ActionParseError(ParseErrorCode::out_of_range, "mIoU " + std::to_string(value) + " outside [0,100]");
    }
    return static_cast<double>(value) / 100.0;
}

double parse_coord(std::string_view token, CoordFormat format) {
    token = trim(token);
    if (token.empty()) throw ActionParseError(ParseErrorCode::malformed_number, "empty coordinate");
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (format == CoordFormat::integer) {
        long value = 0;
        const auto [end, ec] = std::from_chars(first, last, value);
        if (ec == std::errc::result_out_of_range) {
            throw ActionParseError(ParseErrorCode::out_of_range, "coordinate '" + std::string(token) + "'");
        }
        if (ec != std::errc() || end != last) {
            throw ActionParseError(ParseErrorCode::malformed_number, "coordinate '" + std::string(token) + "'");
        }
        if (value < 0 || value >= 1000) {
            throw ActionParseError(ParseErrorCode::out_of_range,
                                   "coordinate " + std::to_string(value) + " outside [0,1000)");
        }
        return static_cast<double>(value) / 1000.0;
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || end != last || !std::isfinite(value)) {
        throw ActionParseError(ParseErrorCode::malformed_number, "coordinate '" + std::string(token) + "'");
    }
    if (value < 0.0 || value >= 1.0) {
        throw ActionParseError(ParseErrorCode::out_of_range, "coordinate '" + std::string(token) + "' outside [0,1)");
    }
    return value;
}

Action parse_action_line(std::string_view line, CoordFormat format) {
    const auto open = line.find('(');
    if (open == std::string_view::npos) {
        const auto verb = lower(trim(line.substr(0, line.find(':'))));
        if (verb != "positive point" && verb != "negative point" && verb != "box") {
            throw ActionParseError(ParseErrorCode::unknown_verb, "unknown action '" + std::string(line) + "'");
        }
        throw ActionParseError(ParseErrorCode::malformed_syntax, "missing '(' in '" + std::string(line) + "'");
    }
    auto verb_text = trim(line.substr(0, open));
    if (!verb_text.empty() && verb_text.back() == ':') verb_text = trim(verb_text.substr(0, verb_text.size() - 1));
    const std::string verb = lower(verb_text);
    int arity = 0;
    if (verb == "positive point" || verb == "negative point") {
        arity = 2;
    } else if (verb == "box") {
        arity = 4;
    } else {
        throw ActionParseError(ParseErrorCode::unknown_verb, "unknown verb '" + std::string(verb_text) + "'");
    }

    const auto close = line.find(')', open);
    if (close == std::string_view::npos) {
        throw ActionParseError(ParseErrorCode::malformed_syntax, "missing ')' in '" + std::string(line) + "'");
    }
    auto tail = trim(line.substr(close + 1));
    if (!tail.empty() && tail != ".") {
        throw ActionParseError(ParseErrorCode::malformed_syntax, "trailing text '" + std::string(tail) + "'");
    }

    std::vector<double> values;
    auto inner = line.substr(open + 1, close - open - 1);
    while (true) {
        const auto comma = inner.find(',');
        values.push_back(parse_coord(inner.substr(0, comma), format));
        if (comma == std::string_view::npos) break;
        inner.remove_prefix(comma + 1);
    }
    if (static_cast<int>(values.size()) != arity) {
        throw ActionParseError(ParseErrorCode::malformed_syntax,
                               "expected " + std::to_string(arity) + " coordinates, got " +
                                   std::to_string(values.size()));
    }
    if (arity == 2) return Action::click(verb == "positive point", {values[0], values[1]});
    const NormBox box{values[0], values[1], values[2], values[3]};
    if (box.x1 > box.x2 || box.y1 > box.y2) {
        throw ActionParseError(ParseErrorCode::out_of_range, "box corners are not ordered");
    }
    return Action::box(box);
}

}  // namespace

std::string format_action(const Action& action, CoordFormat format) {
    if (action.is_click()) {
        const auto& p = action.point();
        return std::string(action.is_positive() ? "Positive point: (" : "Negative point: (") +
               coord_text(p.x, format) + ", " + coord_text(p.y, format) + ")";
    }
    const auto& b = action.corners();
    return "Box: (" + coord_text(b.x1, format) + ", " + coord_text(b.y1, format) + ", " +
           coord_text(b.x2, format) + ", " + coord_text(b.y2, format) + ")";
}

int reward_percent(double reward) {
    // The epsilon keeps exact halves like 0.285 from rounding down after scaling.
    const double scaled = std::floor(100.0 * reward + 0.5 + 1e-9);
    return static_cast<int>(std::clamp(scaled, 0.0, 100.0));
}

std::string format_reward(double reward) {
    return "Current mIoU: " + std::to_string(reward_percent(reward));
}

ParsedAction parse_action(std::string_view text, CoordFormat format) {
    const auto lines = nonempty_lines(text);
    if (lines.empty()) throw ActionParseError(ParseErrorCode::empty_input, "no action text");
    std::size_t i = 0;
    std::optional<double> stated;
    if (is_reward_line(lines[0])) {
        stated = parse_reward_line(lines[0]);
        ++i;
    }
    if (i == lines.size()) throw ActionParseError(ParseErrorCode::empty_input, "no action line");
    if (lines.size() - i > 1) {
        throw ActionParseError(ParseErrorCode::malformed_syntax, "more than one action line");
    }
    return {stated, parse_action_line(lines[i], format)};
}

double parse_reward(std::string_view text) {
    const auto lines = nonempty_lines(text);
    if (lines.empty()) throw ActionParseError(ParseErrorCode::empty_input, "no reward text");
    for (const auto line : lines)
        if (is_reward_line(line)) return parse_reward_line(line);
    throw ActionParseError(ParseErrorCode::malformed_syntax, "no 'Current mIoU' line");
}

}  // namespace maskagent
