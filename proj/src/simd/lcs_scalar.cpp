#include <bit>
#include <vector>

#include "lcs_kernels.hpp"

namespace orcidlink::similarity::detail {

namespace {

std::uint64_t tail_mask(std::size_t length) {
  std::size_t r = length % 64;
  return r == 0 ? ~0ull : (1ull << r) - 1;
}

std::uint32_t lcs_one_word(const EncodedQuery& q, Encoded cand) {
  std::uint64_t s = ~0ull;
  for (std::uint32_t c : cand) {
    std::uint64_t u = s & q.masks[c];
    s = (s + u) | (s - u);
  }
  return static_cast<std::uint32_t>(std::popcount(~s & tail_mask(q.length)));
}

}  // namespace

std::uint32_t lcs_scalar(const EncodedQuery& q, Encoded cand) {
  if (q.length == 0 || cand.empty()) return 0;
  if (q.words == 1) return lcs_one_word(q, cand);

  std::vector<std::uint64_t> s(q.words, ~0ull);
  for (std::uint32_t c : cand) {
    const std::uint64_t* m = q.masks + static_cast<std::size_t>(c) * q.words;
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < q.words; ++w) {
      std::uint64_t u = s[w] & m[w];
      std::uint64_t t = s[w] + carry;
      std::uint64_t c1 = t < carry;
      std::uint64_t x = t + u;
      std::uint64_t c2 = x < u;
      carry = c1 | c2;
      s[w] = x | (s[w] - u);
    }
  }
  std::uint32_t lcs = 0;
  for (std::size_t w = 0; w + 1 < q.words; ++w) lcs += static_cast<std::uint32_t>(std::popcount(~s[w]));
  lcs += static_cast<std::uint32_t>(std::popcount(~s[q.words - 1] & tail_mask(q.length)));
  return lcs;
}

void lcs_batch_scalar(const EncodedQuery& q, std::span<const Encoded> candidates,
                      std::span<std::uint32_t> out) {
  for (std::size_t i = 0; i < candidates.size(); ++i) out[i] = lcs_scalar(q, candidates[i]);
}

}  // namespace orcidlink::similarity::detail
