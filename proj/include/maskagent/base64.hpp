#pragma once

#include <string>
#include <string_view>

namespace maskagent::base64 {

std::string encode(std::string_view bytes);
// Throws FormatError on characters outside the standard alphabet or bad padding.
std::string decode(std::string_view text);

}  // namespace maskagent::base64
