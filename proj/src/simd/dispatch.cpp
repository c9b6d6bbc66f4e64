#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "lcs_kernels.hpp"
#include "orcidlink/names.hpp"
#include "orcidlink/similarity.hpp"

namespace orcidlink::similarity {

#ifndef ORCIDLINK_AVX2_KERNEL
namespace detail {
bool avx2_kernel_compiled() noexcept { return false; }
void lcs_batch_avx2(const EncodedQuery& q, std::span<const Encoded> c, std::span<std::uint32_t> out) {
  lcs_batch_scalar(q, c, out);
}
}  // namespace detail
#endif

namespace {

Kernel resolve_auto() noexcept {
  if (const char* env = std::getenv("ORCIDLINK_KERNEL"); env && std::strcmp(env, "scalar") == 0)
    return Kernel::Scalar;
  return avx2_available() ? Kernel::Avx2 : Kernel::Scalar;
}

std::atomic<Kernel>& kernel_slot() {
  static std::atomic<Kernel> k{resolve_auto()};
  return k;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return detail::avx2_kernel_compiled() && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void set_kernel(Kernel k) noexcept {
  if (k == Kernel::Auto) k = resolve_auto();
  if (k == Kernel::Avx2 && !avx2_available()) k = Kernel::Scalar;
  kernel_slot().store(k, std::memory_order_relaxed);
}

Kernel active_kernel() noexcept { return kernel_slot().load(std::memory_order_relaxed); }

const char* kernel_name(Kernel k) noexcept {
  switch (k) {
    case Kernel::Auto: return "auto";
    case Kernel::Scalar: return "scalar";
    case Kernel::Avx2: return "avx2";
  }
  return "?";
}

RatioScorer::RatioScorer(std::u32string_view query) : length_(query.size()) {
  words_ = std::max<std::size_t>(1, (length_ + 63) / 64);
  alphabet_.assign(query.begin(), query.end());
  std::sort(alphabet_.begin(), alphabet_.end());
  alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
  masks_.assign((alphabet_.size() + 1) * words_, 0);
  for (std::size_t i = 0; i < length_; ++i) {
    std::size_t sym = symbol(query[i]);
    masks_[sym * words_ + i / 64] |= 1ull << (i % 64);
  }
}

std::uint32_t RatioScorer::symbol(char32_t c) const noexcept {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), c);
  if (it == alphabet_.end() || *it != c) return 0;
  return static_cast<std::uint32_t>(it - alphabet_.begin()) + 1;
}

std::uint32_t RatioScorer::lcs(std::u32string_view candidate) const {
  std::uint32_t out = 0;
  lcs(std::span<const std::u32string_view>(&candidate, 1), std::span<std::uint32_t>(&out, 1));
  return out;
}

double RatioScorer::ratio(std::u32string_view candidate) const {
  std::size_t total = length_ + candidate.size();
  if (total == 0) return 1.0;
  return 2.0 * lcs(candidate) / static_cast<double>(total);
}

void RatioScorer::lcs(std::span<const std::u32string_view> candidates,
                      std::span<std::uint32_t> out) const {
  lcs_with(active_kernel(), candidates, out);
}

void RatioScorer::lcs_with(Kernel kernel, std::span<const std::u32string_view> candidates,
                           std::span<std::uint32_t> out) const {
  if (kernel == Kernel::Auto) kernel = active_kernel();
  if (kernel == Kernel::Avx2 && (!avx2_available() || words_ != 1)) kernel = Kernel::Scalar;

  std::size_t total = 0;
  for (auto c : candidates) total += c.size();
  std::vector<std::uint32_t> symbols;
  symbols.reserve(total);
  for (auto c : candidates)
    for (char32_t ch : c) symbols.push_back(symbol(ch));

  std::vector<detail::Encoded> encoded;
  encoded.reserve(candidates.size());
  std::size_t off = 0;
  for (auto c : candidates) {
    encoded.emplace_back(symbols.data() + off, c.size());
    off += c.size();
  }

  detail::EncodedQuery q{masks_.data(), words_, length_};
  if (kernel == Kernel::Avx2)
    detail::lcs_batch_avx2(q, encoded, out);
  else
    detail::lcs_batch_scalar(q, encoded, out);
}

void RatioScorer::ratios(std::span<const std::u32string_view> candidates,
                         std::span<double> out) const {
  std::vector<std::uint32_t> l(candidates.size());
  lcs(candidates, l);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::size_t total = length_ + candidates[i].size();
    out[i] = total == 0 ? 1.0 : 2.0 * l[i] / static_cast<double>(total);
  }
}

std::size_t indel_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);  // shorter string as the bit-vector query
  RatioScorer scorer(b);
  return a.size() + b.size() - 2 * static_cast<std::size_t>(scorer.lcs(a));
}

double levenshtein_ratio(std::u32string_view a, std::u32string_view b) {
  std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return static_cast<double>(total - indel_distance(a, b)) / static_cast<double>(total);
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
  return levenshtein_ratio(names::to_code_points(a), names::to_code_points(b));
}

}  // namespace orcidlink::similarity
