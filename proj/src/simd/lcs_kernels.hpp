#pragma once

// Internal batch kernels for bit-parallel LCS length. A query is described
// by a table of match masks, one row of `words` 64-bit words per symbol;
// symbol 0 is reserved for "not in the query" and its row is all zero.
// Candidates are sequences of symbol indices.

#include <cstddef>
#include <cstdint>
#include <span>

namespace orcidlink::similarity::detail {

struct EncodedQuery {
  const std::uint64_t* masks = nullptr;
  std::size_t words = 0;
  std::size_t length = 0;
};

using Encoded = std::span<const std::uint32_t>;

std::uint32_t lcs_scalar(const EncodedQuery& q, Encoded candidate);

void lcs_batch_scalar(const EncodedQuery& q, std::span<const Encoded> candidates,
                      std::span<std::uint32_t> out);

// Requires q.words == 1. Only defined when built with the AVX2 kernel.
void lcs_batch_avx2(const EncodedQuery& q, std::span<const Encoded> candidates,
                    std::span<std::uint32_t> out);

bool avx2_kernel_compiled() noexcept;

}  // namespace orcidlink::similarity::detail
