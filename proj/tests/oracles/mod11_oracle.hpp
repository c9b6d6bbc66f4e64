#pragma once

// ISO 7064 MOD 11-2 written directly from the standard's recursive
// definition, independent of the library's implementation.

#include <cctype>
#include <string>
#include <string_view>

namespace oracle {

// Check character for a string of decimal digits.
inline char mod11_2_check(std::string_view digits) {
  int p = 0;
  for (char c : digits) p = ((p + (c - '0')) * 2) % 11;
  int check = (12 - p) % 11;
  return check == 10 ? 'X' : static_cast<char>('0' + check);
}

// Accepts exactly dddd-dddd-dddd-dddC.
inline bool orcid_valid(std::string_view s) {
  if (s.size() != 19) return false;
  std::string digits;
  for (std::size_t i = 0; i < 19; ++i) {
    if (i == 4 || i == 9 || i == 14) {
      if (s[i] != '-') return false;
      continue;
    }
    if (i == 18) break;
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    digits.push_back(s[i]);
  }
  return s[18] == mod11_2_check(digits);
}

}  // namespace oracle
