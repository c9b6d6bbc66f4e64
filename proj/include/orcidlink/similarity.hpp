#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orcidlink::similarity {

// Edit distance with insert = delete = 1 and substitute = 2 (equivalently
// |a| + |b| - 2 * LCS(a, b)), over code points.
std::size_t indel_distance(std::u32string_view a, std::u32string_view b);

// (|a| + |b| - indel_distance) / (|a| + |b|); 1.0 when both are empty.
double levenshtein_ratio(std::u32string_view a, std::u32string_view b);

// UTF-8 convenience overload; inputs are compared as given (normalize first).
double levenshtein_ratio(std::string_view a, std::string_view b);

enum class Kernel { Auto, Scalar, Avx2 };

bool avx2_available() noexcept;

// Selects the batch kernel used by RatioScorer. Auto picks AVX2 when the CPU
// supports it, unless ORCIDLINK_KERNEL=scalar is set in the environment.
// Requesting Avx2 on a CPU without it falls back to Scalar.
void set_kernel(Kernel k) noexcept;
Kernel active_kernel() noexcept;
const char* kernel_name(Kernel k) noexcept;

// Scores one query string against many candidates. The query's per-symbol
// match bitmasks are computed once; candidates are encoded against the
// query alphabet and processed by the active kernel.
class RatioScorer {
 public:
  explicit RatioScorer(std::u32string_view query);

  std::size_t length() const noexcept { return length_; }

  std::uint32_t lcs(std::u32string_view candidate) const;
  double ratio(std::u32string_view candidate) const;

  void lcs(std::span<const std::u32string_view> candidates, std::span<std::uint32_t> out) const;
  void ratios(std::span<const std::u32string_view> candidates, std::span<double> out) const;

  // Same as lcs(), with an explicit kernel (for equivalence testing).
  void lcs_with(Kernel kernel, std::span<const std::u32string_view> candidates,
                std::span<std::uint32_t> out) const;

 private:
  std::uint32_t symbol(char32_t c) const noexcept;

  std::size_t length_ = 0;
  std::size_t words_ = 0;
  std::vector<char32_t> alphabet_;     // sorted distinct query symbols
  std::vector<std::uint64_t> masks_;   // (alphabet_.size() + 1) * words_, row 0 all-zero
};

}  // namespace orcidlink::similarity
