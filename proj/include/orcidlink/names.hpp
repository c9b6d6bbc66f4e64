#pragma once

#include <string>
#include <string_view>

namespace orcidlink::names {

// Linkage/quality name key: Unicode case fold, canonical decomposition with
// nonspacing marks dropped, whitespace runs collapsed to one ASCII space and
// trimmed. Output is UTF-8. Invalid UTF-8 bytes become U+FFFD.
std::string normalize(std::string_view utf8);

// normalize(given + " " + family).
std::string full_name(std::string_view given, std::string_view family);

std::u32string to_code_points(std::string_view utf8);
std::string to_utf8(std::u32string_view cps);

}  // namespace orcidlink::names
