#include "orcidlink/identifiers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <ctime>

namespace orcidlink {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

// Officially assigned ISO 3166-1 alpha-2 codes, sorted.
constexpr std::array<std::string_view, 249> kCountryCodes = {
    "AD", "AE", "AF", "AG", "AI", "AL", "AM", "AO", "AQ", "AR", "AS", "AT", "AU", "AW", "AX", "AZ",
    "BA", "BB", "BD", "BE", "BF", "BG", "BH", "BI", "BJ", "BL", "BM", "BN", "BO", "BQ", "BR", "BS",
    "BT", "BV", "BW", "BY", "BZ", "CA", "CC", "CD", "CF", "CG", "CH", "CI", "CK", "CL", "CM", "CN",
    "CO", "CR", "CU", "CV", "CW", "CX", "CY", "CZ", "DE", "DJ", "DK", "DM", "DO", "DZ", "EC", "EE",
    "EG", "EH", "ER", "ES", "ET", "FI", "FJ", "FK", "FM", "FO", "FR", "GA", "GB", "GD", "GE", "GF",
    "GG", "GH", "GI", "GL", "GM", "GN", "GP", "GQ", "GR", "GS", "GT", "GU", "GW", "GY", "HK", "HM",
    "HN", "HR", "HT", "HU", "ID", "IE", "IL", "IM", "IN", "IO", "IQ", "IR", "IS", "IT", "JE", "JM",
    "JO", "JP", "KE", "KG", "KH", "KI", "KM", "KN", "KP", "KR", "KW", "KY", "KZ", "LA", "LB", "LC",
    "LI", "LK", "LR", "LS", "LT", "LU", "LV", "LY", "MA", "MC", "MD", "ME", "MF", "MG", "MH", "MK",
    "ML", "MM", "MN", "MO", "MP", "MQ", "MR", "MS", "MT", "MU", "MV", "MW", "MX", "MY", "MZ", "NA",
    "NC", "NE", "NF", "NG", "NI", "NL", "NO", "NP", "NR", "NU", "NZ", "OM", "PA", "PE", "PF", "PG",
    "PH", "PK", "PL", "PM", "PN", "PR", "PS", "PT", "PW", "PY", "QA", "RE", "RO", "RS", "RU", "RW",
    "SA", "SB", "SC", "SD", "SE", "SG", "SH", "SI", "SJ", "SK", "SL", "SM", "SN", "SO", "SR", "SS",
    "ST", "SV", "SX", "SY", "SZ", "TC", "TD", "TF", "TG", "TH", "TJ", "TK", "TL", "TM", "TN", "TO",
    "TR", "TT", "TV", "TW", "TZ", "UA", "UG", "UM", "US", "UY", "UZ", "VA", "VC", "VE", "VG", "VI",
    "VN", "VU", "WF", "WS", "YE", "YT", "ZA", "ZM", "ZW",
};

}  // namespace

std::optional<Doi> Doi::parse(std::string_view text) {
  std::string v;
  v.reserve(text.size());
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (is_space(u)) continue;
    v.push_back(static_cast<char>(std::tolower(u)));
  }
  if (v.size() < 5 || v.compare(0, 3, "10.") != 0) return std::nullopt;
  auto slash = v.find('/');
  if (slash == std::string::npos || slash == 3 || slash + 1 == v.size()) return std::nullopt;
  return Doi(std::move(v));
}

char orcid_check_character(std::string_view digits) noexcept {
  int total = 0;
  for (char c : digits) total = (total + (c - '0')) * 2 % 11;
  int result = (12 - total) % 11;
  return result == 10 ? 'X' : static_cast<char>('0' + result);
}

bool validate_orcid_checksum(std::string_view s) noexcept {
  if (s.size() != 19) return false;
  char digits[15];
  int n = 0;
  for (std::size_t i = 0; i < 19; ++i) {
    char c = s[i];
    if (i == 4 || i == 9 || i == 14) {
      if (c != '-') return false;
      continue;
    }
    if (i == 18) break;
    if (c < '0' || c > '9') return false;
    digits[n++] = c;
  }
  return orcid_check_character(std::string_view(digits, 15)) == s[18];
}

std::optional<OrcidId> OrcidId::parse(std::string_view text) noexcept {
  if (!validate_orcid_checksum(text)) return std::nullopt;
  std::uint64_t payload = 0;
  for (std::size_t i = 0; i < 18; ++i) {
    if (text[i] == '-') continue;
    payload = payload * 10 + static_cast<std::uint64_t>(text[i] - '0');
  }
  return from_payload(payload);
}

OrcidId OrcidId::from_payload(std::uint64_t payload) noexcept {
  char digits[15];
  std::uint64_t p = payload;
  for (int i = 14; i >= 0; --i) {
    digits[i] = static_cast<char>('0' + p % 10);
    p /= 10;
  }
  char check = orcid_check_character(std::string_view(digits, 15));
  std::uint64_t cv = check == 'X' ? 10 : static_cast<std::uint64_t>(check - '0');
  return OrcidId(payload * 11 + cv);
}

std::string OrcidId::str() const {
  std::uint64_t payload = packed_ / 11;
  std::uint64_t cv = packed_ % 11;
  std::string out(19, '-');
  int pos = 17;
  for (int i = 0; i < 15; ++i) {
    if (pos == 14 || pos == 9 || pos == 4) --pos;
    out[static_cast<std::size_t>(pos--)] = static_cast<char>('0' + payload % 10);
    payload /= 10;
  }
  out[18] = cv == 10 ? 'X' : static_cast<char>('0' + cv);
  return out;
}

std::optional<Date> parse_date(std::string_view s) noexcept {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto num = [&](std::size_t off, std::size_t len, int& out) {
    auto first = s.data() + off;
    auto [ptr, ec] = std::from_chars(first, first + len, out);
    return ec == std::errc{} && ptr == first + len;
  };
  int y = 0, m = 0, d = 0;
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d)) return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date today_utc() {
  return Date{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

bool is_iso_country_code(std::string_view code) noexcept {
  return std::binary_search(kCountryCodes.begin(), kCountryCodes.end(), code);
}

bool is_for_code(std::string_view code) noexcept {
  return code.size() == 2 && code[0] >= '0' && code[0] <= '9' && code[1] >= '0' && code[1] <= '9';
}

}  // namespace orcidlink
