#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "../oracles/levenshtein_oracle.hpp"
#include "orcidlink/names.hpp"
#include "orcidlink/similarity.hpp"

using namespace orcidlink;
using similarity::Kernel;

namespace {

// Alphabet mixing ASCII, Latin-1, Cyrillic and astral code points so the
// query alphabet encoding is exercised.
const std::u32string kAlphabet = U"abcdeaéöжяд𝔸 ";

std::u32string random_string(std::mt19937_64& rng, std::size_t max_len, std::size_t alphabet) {
  std::size_t len = rng() % (max_len + 1);
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kAlphabet[rng() % alphabet]);
  return s;
}

class KernelGuard {
 public:
  explicit KernelGuard(Kernel k) : saved_(similarity::active_kernel()) { similarity::set_kernel(k); }
  ~KernelGuard() { similarity::set_kernel(saved_); }

 private:
  Kernel saved_;
};

}  // namespace

TEST(LevenshteinRatio, KittenSitting) {
  EXPECT_EQ(similarity::indel_distance(U"kitten", U"sitting"), 5u);
  EXPECT_DOUBLE_EQ(similarity::levenshtein_ratio(U"kitten", U"sitting"), 8.0 / 13.0);
  EXPECT_DOUBLE_EQ(similarity::levenshtein_ratio("kitten", "sitting"), 8.0 / 13.0);
}

TEST(LevenshteinRatio, EdgeCases) {
  EXPECT_EQ(similarity::levenshtein_ratio(U"", U""), 1.0);
  EXPECT_EQ(similarity::levenshtein_ratio(U"abc", U""), 0.0);
  EXPECT_EQ(similarity::levenshtein_ratio(U"abc", U"abc"), 1.0);
  EXPECT_EQ(similarity::levenshtein_ratio(U"abc", U"xyz"), 0.0);
  // Code points, not bytes.
  EXPECT_EQ(similarity::levenshtein_ratio("é", "e"), 0.0);
  EXPECT_EQ(similarity::levenshtein_ratio("жж", "жж"), 1.0);
}

TEST(LevenshteinRatio, MatchesDynamicProgrammingOracle) {
  std::mt19937_64 rng(20240601);
  for (int i = 0; i < 10000; ++i) {
    std::size_t alphabet = 2 + rng() % (kAlphabet.size() - 1);
    auto a = random_string(rng, 30, alphabet);
    auto b = random_string(rng, 30, alphabet);
    ASSERT_EQ(similarity::indel_distance(a, b), oracle::indel_sub2_distance(a, b))
        << names::to_utf8(a) << " / " << names::to_utf8(b);
    ASSERT_EQ(similarity::levenshtein_ratio(a, b), oracle::ratio(a, b));
  }
}

TEST(LevenshteinRatio, LongStringsSpanMultipleWords) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    auto a = random_string(rng, 300, 4);
    auto b = random_string(rng, 300, 4);
    ASSERT_EQ(similarity::indel_distance(a, b), oracle::indel_sub2_distance(a, b));
  }
}

TEST(LevenshteinRatio, Symmetric) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto a = random_string(rng, 20, 5), b = random_string(rng, 20, 5);
    EXPECT_EQ(similarity::levenshtein_ratio(a, b), similarity::levenshtein_ratio(b, a));
  }
}

TEST(RatioScorer, ScalarMatchesOracle) {
  KernelGuard guard(Kernel::Scalar);
  std::mt19937_64 rng(11);
  for (int q = 0; q < 200; ++q) {
    auto query = random_string(rng, 90, 6);
    similarity::RatioScorer scorer(query);
    std::vector<std::u32string> cands;
    for (int i = 0; i < 37; ++i) cands.push_back(random_string(rng, 90, 8));
    std::vector<std::u32string_view> views(cands.begin(), cands.end());
    std::vector<double> out(views.size());
    scorer.ratios(views, out);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      ASSERT_EQ(out[i], oracle::ratio(query, cands[i]));
      ASSERT_EQ(scorer.ratio(cands[i]), oracle::ratio(query, cands[i]));
    }
  }
}

TEST(RatioScorer, Avx2KernelEquivalentToScalar) {
  if (!similarity::avx2_available()) GTEST_SKIP() << "CPU lacks AVX2";
  std::mt19937_64 rng(12);
  // Batch sizes around the vector width, queries around the 64-bit word
  // boundary.
  for (std::size_t qlen : {0u, 1u, 7u, 63u, 64u, 65u, 127u, 128u, 200u}) {
    for (std::size_t batch : {0u, 1u, 3u, 4u, 5u, 8u, 9u, 33u}) {
      std::u32string query;
      for (std::size_t i = 0; i < qlen; ++i) query.push_back(kAlphabet[rng() % 6]);
      similarity::RatioScorer scorer(query);
      std::vector<std::u32string> cands;
      for (std::size_t i = 0; i < batch; ++i) cands.push_back(random_string(rng, 220, 9));
      std::vector<std::u32string_view> views(cands.begin(), cands.end());
      std::vector<std::uint32_t> scalar(batch), avx2(batch);
      scorer.lcs_with(Kernel::Scalar, views, scalar);
      scorer.lcs_with(Kernel::Avx2, views, avx2);
      ASSERT_EQ(scalar, avx2) << "query length " << qlen << ", batch " << batch;
    }
  }
}

TEST(RatioScorer, RuntimeSelection) {
  {
    KernelGuard guard(Kernel::Scalar);
    EXPECT_EQ(similarity::active_kernel(), Kernel::Scalar);
  }
  {
    KernelGuard guard(Kernel::Avx2);
    EXPECT_EQ(similarity::active_kernel(), similarity::avx2_available() ? Kernel::Avx2 : Kernel::Scalar);
  }
  EXPECT_STREQ(similarity::kernel_name(Kernel::Scalar), "scalar");
  EXPECT_STREQ(similarity::kernel_name(Kernel::Avx2), "avx2");
}
