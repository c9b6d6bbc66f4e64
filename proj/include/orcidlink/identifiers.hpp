#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace orcidlink {

// A DOI in normalized form: lowercased with all whitespace removed. Always
// starts with "10." and has a nonempty suffix after the first '/'.
class Doi {
 public:
  Doi() = default;

  // Returns nullopt if the text is not a well-formed DOI after normalization.
  static std::optional<Doi> parse(std::string_view text);

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Doi&, const Doi&) = default;
  friend auto operator<=>(const Doi&, const Doi&) = default;

 private:
  explicit Doi(std::string v) : value_(std::move(v)) {}
  std::string value_;
};

// True iff `candidate` has the canonical form XXXX-XXXX-XXXX-XXXC (15 digits
// and a check character 0-9/X) and the ISO 7064 MOD 11-2 check is valid.
bool validate_orcid_checksum(std::string_view candidate) noexcept;

// Check character for the first 15 digits of an ORCID iD ('0'..'9' or 'X').
char orcid_check_character(std::string_view fifteen_digits) noexcept;

// ORCID iD packed into 64 bits (15 payload digits * 11 + check value).
class OrcidId {
 public:
  OrcidId() = default;

  static std::optional<OrcidId> parse(std::string_view text) noexcept;
  static OrcidId from_payload(std::uint64_t fifteen_digit_number) noexcept;

  std::string str() const;
  std::uint64_t packed() const noexcept { return packed_; }

  friend bool operator==(const OrcidId&, const OrcidId&) = default;
  friend auto operator<=>(const OrcidId&, const OrcidId&) = default;

 private:
  explicit OrcidId(std::uint64_t p) : packed_(p) {}
  std::uint64_t packed_ = 0;
};

using Date = std::chrono::year_month_day;

// Strict "YYYY-MM-DD" parser; rejects impossible calendar dates.
std::optional<Date> parse_date(std::string_view text) noexcept;
std::string format_date(const Date& d);
Date today_utc();

// ISO 3166-1 alpha-2 membership (officially assigned codes, uppercase).
bool is_iso_country_code(std::string_view code) noexcept;

// Two ASCII digits.
bool is_for_code(std::string_view code) noexcept;

}  // namespace orcidlink

template <>
struct std::hash<orcidlink::Doi> {
  std::size_t operator()(const orcidlink::Doi& d) const noexcept {
    return std::hash<std::string>{}(d.str());
  }
};

template <>
struct std::hash<orcidlink::OrcidId> {
  std::size_t operator()(const orcidlink::OrcidId& o) const noexcept {
    std::uint64_t x = o.packed() * 0x9E3779B97F4A7C15ull;
    return static_cast<std::size_t>(x ^ (x >> 29));
  }
};
