// Compiled with -mavx2. Four candidates are advanced in lockstep, one per
// 64-bit lane; lanes whose candidate is exhausted read symbol 0 (mask 0),
// which leaves their state unchanged.

#include <immintrin.h>

#include <algorithm>
#include <bit>

#include "lcs_kernels.hpp"

namespace orcidlink::similarity::detail {

bool avx2_kernel_compiled() noexcept { return true; }

void lcs_batch_avx2(const EncodedQuery& q, std::span<const Encoded> candidates,
                    std::span<std::uint32_t> out) {
  const std::uint64_t tail =
      q.length % 64 == 0 ? ~0ull : (1ull << (q.length % 64)) - 1;
  const auto* table = reinterpret_cast<const long long*>(q.masks);
  const std::size_t n = candidates.size();

  for (std::size_t base = 0; base < n; base += 4) {
    Encoded lane[4];
    std::size_t longest = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      lane[k] = base + k < n ? candidates[base + k] : Encoded{};
      longest = std::max(longest, lane[k].size());
    }

    __m256i s = _mm256_set1_epi64x(-1);
    for (std::size_t j = 0; j < longest; ++j) {
      alignas(16) std::int32_t idx[4];
      for (std::size_t k = 0; k < 4; ++k)
        idx[k] = j < lane[k].size() ? static_cast<std::int32_t>(lane[k][j]) : 0;
      __m128i vidx = _mm_load_si128(reinterpret_cast<const __m128i*>(idx));
      __m256i m = _mm256_i32gather_epi64(table, vidx, 8);
      __m256i u = _mm256_and_si256(s, m);
      s = _mm256_or_si256(_mm256_add_epi64(s, u), _mm256_sub_epi64(s, u));
    }

    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), s);
    for (std::size_t k = 0; k < 4 && base + k < n; ++k)
      out[base + k] = q.length == 0 ? 0u : static_cast<std::uint32_t>(std::popcount(~lanes[k] & tail));
  }
}

}  // namespace orcidlink::similarity::detail
