#include <algorithm>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "orcidlink/ingest.hpp"
#include "orcidlink/quality.hpp"

using namespace orcidlink;
using namespace fixtures;
using quality::Reason;
using quality::Verdict;

namespace {

// Ann (R1, orcid 1) and Bo (R2, orcid 2) co-author two papers. On 10.1/b
// Ann's iD was attached to Bo's byline position.
struct ShuffledPair {
  Corpus corpus{
      {pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Bo", "Li"}}),
       pub("10.1/b", 2016, {{"Ann", "Ng"}, {"Bo", "Li"}, {"Cyd", "Holmes"}})},
      {profile(orcid(1), "Ann", "Ng"), profile(orcid(2), "Bo", "Li")},
      {researcher("R1", "Ann", "Ng", {"10.1/a", "10.1/b"}, orcid(1)),
       researcher("R2", "Bo", "Li", {"10.1/a", "10.1/b"}, orcid(2))}};
  linkage::AuthorLinkage linkage = linkage::AuthorLinkage::build(corpus);
  std::vector<CrossrefAssertion> crossref = {assertion("10.1/a", 0, orcid(1)), assertion("10.1/a", 1, orcid(2)),
                                             assertion("10.1/b", 1, orcid(1))};
};

}  // namespace

TEST(Criteria, RenderAndParse) {
  std::uint8_t all = quality::kSelfCollab | quality::kMultiOrcidPerResearcher | quality::kRegistryDisagrees |
                     quality::kNoResearcherForOrcid;
  EXPECT_EQ(quality::criteria_string(all),
            "SELF_COLLAB|MULTI_ORCID_PER_RESEARCHER|REGISTRY_DISAGREES|NO_RESEARCHER_FOR_ORCID");
  EXPECT_EQ(quality::parse_criteria(quality::criteria_string(all)), all);
  EXPECT_EQ(quality::criteria_string(0), "");
}

TEST(FlagSuspects, ShuffledAssertionRaisesSelfCollabAndDisagreement) {
  ShuffledPair f;
  quality::AssertionContext ctx(f.corpus, f.linkage, f.crossref);
  auto self = quality::detect_self_collaboration(ctx);
  ASSERT_EQ(self.size(), 2u);  // orcid 1 is linked to R1 and R2, both on 10.1/a and 10.1/b
  auto flags = quality::flag_suspects(ctx);
  ASSERT_EQ(flags.size(), 3u);
  const auto& shuffled = flags.back();
  EXPECT_EQ(shuffled.doi.str(), "10.1/b");
  EXPECT_EQ(shuffled.position, 1u);
  EXPECT_TRUE(shuffled.criteria & quality::kSelfCollab);
  EXPECT_TRUE(shuffled.criteria & quality::kRegistryDisagrees);
  // R2 is linked to orcid 2 on 10.1/a and orcid 1 on 10.1/b.
  EXPECT_TRUE(shuffled.criteria & quality::kMultiOrcidPerResearcher);
  EXPECT_FALSE(shuffled.criteria & quality::kNoResearcherForOrcid);
}

TEST(Repair, MovesShuffledAssertionBack) {
  ShuffledPair f;
  auto result = quality::repair(f.corpus, f.linkage, f.crossref, {});
  std::vector<CrossrefAssertion> expected = {assertion("10.1/a", 0, orcid(1)), assertion("10.1/a", 1, orcid(2)),
                                             assertion("10.1/b", 0, orcid(1))};
  EXPECT_EQ(result.repaired, expected);
  EXPECT_EQ(result.stats.reassigned, 1u);
  EXPECT_EQ(result.stats.dropped, 0u);
  EXPECT_EQ(result.stats.kept, 2u);
  EXPECT_EQ(result.stats.total_assertions, 3u);
  auto it = std::find_if(result.outcomes.begin(), result.outcomes.end(),
                         [](const auto& o) { return o.verdict == Verdict::Reassign; });
  ASSERT_NE(it, result.outcomes.end());
  EXPECT_EQ(quality::verdict_string(*it), "REASSIGN(0)");
  EXPECT_EQ(it->reason, Reason::ScoreReassign);
}

TEST(ResolveSuspect, RuleOrder) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Ann", "Ng"}, {"Bo", "Li"}, {"J", "Smith"}, {"Jo", "Smith"}})},
           {profile(orcid(1), "Ann", "Ng"), profile(orcid(2), "Jon", "Smith"), profile(orcid(3), "Zed", "Quux")},
           {});
  quality::PublisherHistory history;
  quality::QualityConfig cfg;
  auto resolve = [&](std::uint32_t pos, OrcidId o) {
    quality::SuspectFlag flag{doi("10.1/a"), pos, o, quality::kNoResearcherForOrcid};
    return quality::resolve_suspect(flag, c, 0, c.find_profile(o), history, cfg);
  };
  // (a) the asserted author matches the profile.
  auto keep = resolve(0, orcid(1));
  EXPECT_EQ(keep.verdict, Verdict::Keep);
  EXPECT_EQ(keep.reason, Reason::ScoreKeep);
  EXPECT_EQ(keep.best_score, 1.0);
  // (b) two equally good targets: DROP rather than guess.
  auto tie = resolve(2, orcid(1));
  EXPECT_EQ(tie.verdict, Verdict::Drop);
  EXPECT_EQ(tie.reason, Reason::Unrecoverable);
  // (b) single-letter given names are not targets: "j smith" is skipped
  // and "jo smith" (ratio 16/17 against "jon smith") wins.
  auto moved = resolve(2, orcid(2));
  EXPECT_EQ(moved.verdict, Verdict::Reassign);
  EXPECT_EQ(moved.new_position, 4u);
  // (d) nothing resembles the profile.
  auto drop = resolve(2, orcid(3));
  EXPECT_EQ(drop.verdict, Verdict::Drop);
  // (c) the same (iD, byline name) pair seen at two publishers.
  history.add(orcid(3), "bo li", "P01");
  history.add(orcid(3), "bo li", "P01");
  EXPECT_EQ(resolve(2, orcid(3)).verdict, Verdict::Drop);
  history.add(orcid(3), "bo li", "P02");
  auto rescued = resolve(2, orcid(3));
  EXPECT_EQ(rescued.verdict, Verdict::Keep);
  EXPECT_EQ(rescued.reason, Reason::MultiPublisherRescue);
  cfg.multi_publisher_rescue = false;
  EXPECT_EQ(resolve(2, orcid(3)).verdict, Verdict::Drop);
  // No profile at all.
  auto orphan = resolve(0, orcid(4));
  EXPECT_EQ(orphan.verdict, Verdict::Drop);
  EXPECT_FALSE(orphan.best_score);
}

TEST(ResolveSuspect, ThresholdsAreInclusive) {
  // ratio("ann ng", "ann ngo") = 12/13; keep at exactly that threshold.
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ngo"}, {"Bo", "Li"}})}, {profile(orcid(1), "Ann", "Ng")}, {});
  quality::PublisherHistory history;
  quality::QualityConfig cfg;
  cfg.keep_threshold = 12.0 / 13.0;
  quality::SuspectFlag flag{doi("10.1/a"), 0, orcid(1), quality::kNoResearcherForOrcid};
  EXPECT_EQ(quality::resolve_suspect(flag, c, 0, c.find_profile(orcid(1)), history, cfg).verdict, Verdict::Keep);
  cfg.keep_threshold = std::nextafter(12.0 / 13.0, 1.0);
  EXPECT_EQ(quality::resolve_suspect(flag, c, 0, c.find_profile(orcid(1)), history, cfg).verdict, Verdict::Drop);
  // Reassign from position 1 at exactly the reassign threshold.
  cfg.keep_threshold = 0.7;
  cfg.reassign_threshold = 12.0 / 13.0;
  flag.position = 1;
  auto o = quality::resolve_suspect(flag, c, 0, c.find_profile(orcid(1)), history, cfg);
  EXPECT_EQ(o.verdict, Verdict::Reassign);
  EXPECT_EQ(o.new_position, 0u);
}

TEST(ApplyRepairs, ConflictingTargetsBecomeDrops) {
  Corpus c({pub("10.1/a", 2015, {{"A", "A"}, {"B", "B"}, {"C", "C"}, {"D", "D"}})}, {}, {});
  auto l = linkage::AuthorLinkage::build(c);
  std::vector<CrossrefAssertion> cr = {assertion("10.1/a", 0, orcid(1)), assertion("10.1/a", 1, orcid(2)),
                                       assertion("10.1/a", 2, orcid(3))};
  quality::AssertionContext ctx(c, l, cr);
  auto outcome = [](std::uint32_t pos, OrcidId o, std::uint32_t to) {
    quality::RepairOutcome r;
    r.doi = doi("10.1/a");
    r.position = pos;
    r.orcid = o;
    r.verdict = Verdict::Reassign;
    r.new_position = to;
    r.reason = Reason::ScoreReassign;
    return r;
  };
  // 0 and 1 both target the empty position 3; 2 targets the occupied 0.
  auto result = quality::apply_repairs(ctx, {outcome(0, orcid(1), 3), outcome(1, orcid(2), 3), outcome(2, orcid(3), 0)});
  EXPECT_TRUE(result.repaired.empty());
  EXPECT_EQ(result.stats.dropped, 3u);
  for (const auto& o : result.outcomes) EXPECT_EQ(o.reason, Reason::Unrecoverable);
  // A lone move to a free position is applied.
  auto ok = quality::apply_repairs(ctx, {outcome(2, orcid(3), 3)});
  ASSERT_EQ(ok.repaired.size(), 3u);
  EXPECT_EQ(ok.repaired.back(), assertion("10.1/a", 3, orcid(3)));
}

TEST(RepairReport, RoundTrip) {
  auto w = process([] {
    synth::SynthConfig cfg;
    cfg.n_researchers = 200;
    cfg.n_papers = 800;
    cfg.shuffle_rate = 0.05;
    cfg.perturbation = {0.05, 0.05, 0.05};
    return cfg;
  }());
  const auto& outcomes = w->repair.outcomes;
  ASSERT_FALSE(outcomes.empty());
  std::istringstream in(csv::render(quality::repair_report_table(outcomes)));
  auto parsed = quality::parse_repair_report(in);
  ASSERT_EQ(parsed.size(), outcomes.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    auto a = parsed[i], b = outcomes[i];
    ASSERT_EQ(a.best_score.has_value(), b.best_score.has_value());
    if (b.best_score) {
      EXPECT_NEAR(*a.best_score, *b.best_score, 5e-7);
    }
    a.best_score = b.best_score = std::nullopt;
    EXPECT_EQ(a, b);
  }
}

TEST(RepairReport, RejectsMalformed) {
  std::istringstream bad_header("doi,position\n");
  EXPECT_THROW(quality::parse_repair_report(bad_header), InputError);
  std::istringstream bad_verdict(
      "doi,position,orcid,criteria,verdict,score,reason\n10.1/a,0,0000-0002-6151-8423,SELF_COLLAB,MOVE,,UNRECOVERABLE\n");
  EXPECT_THROW(quality::parse_repair_report(bad_verdict), InputError);
}

TEST(Repair, InvariantUnderInputOrder) {
  synth::SynthConfig cfg;
  cfg.n_researchers = 200;
  cfg.n_papers = 800;
  cfg.shuffle_rate = 0.05;
  cfg.perturbation = {0.05, 0.05, 0.05};
  auto w = process(cfg);
  auto shuffled = w->world.crossref;
  std::mt19937_64 rng(17);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto again = quality::repair(*w->corpus, w->linkage, shuffled, {});
  EXPECT_EQ(again.repaired, w->repair.repaired);
  EXPECT_EQ(again.outcomes, w->repair.outcomes);
}

TEST(Repair, SecondPassChangesNothing) {
  synth::SynthConfig cfg;
  cfg.n_researchers = 300;
  cfg.n_papers = 1200;
  cfg.shuffle_rate = 0.03;
  cfg.max_name_similarity = 0.6;
  auto w = process(cfg);
  ASSERT_GT(w->repair.stats.reassigned, 0u);
  auto again = quality::repair(*w->corpus, w->linkage, w->repair.repaired, {});
  EXPECT_EQ(again.stats.reassigned, 0u);
  EXPECT_EQ(again.stats.dropped, 0u);
  EXPECT_EQ(again.repaired, w->repair.repaired);
}

TEST(Repair, WorkerCountDoesNotChangeResults) {
  synth::SynthConfig cfg;
  cfg.n_researchers = 200;
  cfg.n_papers = 3000;
  cfg.shuffle_rate = 0.05;
  cfg.perturbation = {0.05, 0.05, 0.05};
  quality::QualityConfig one, four;
  four.workers = 4;
  auto a = process(cfg, one);
  auto b = quality::repair(*a->corpus, a->linkage, a->world.crossref, four);
  EXPECT_EQ(a->repair.outcomes, b.outcomes);
}

TEST(ShuffleRate, PooledIsRatioOfSums) {
  quality::ShuffleRateSeries s = {{2015, 1, 10, 0.1}, {2016, 3, 30, 0.1}, {2017, 0, 0, 0.0}};
  auto p = quality::pooled_rate(s);
  EXPECT_EQ(p.flagged, 4u);
  EXPECT_EQ(p.total, 40u);
  EXPECT_DOUBLE_EQ(p.rate, 0.1);
}

TEST(ShuffleRate, CountsSelfCollabPerYear) {
  ShuffledPair f;
  quality::AssertionContext ctx(f.corpus, f.linkage, f.crossref);
  auto s = quality::estimate_shuffle_rate(ctx);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].year, 2015);
  EXPECT_EQ(s[0].flagged, 1u);
  EXPECT_EQ(s[0].total, 2u);
  EXPECT_EQ(s[1].flagged, 1u);
  EXPECT_EQ(s[1].total, 1u);
}
