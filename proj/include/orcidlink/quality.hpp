#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "orcidlink/corpus.hpp"
#include "orcidlink/csv.hpp"
#include "orcidlink/linkage.hpp"

namespace orcidlink::quality {

// Suspect criteria, combinable as a bitmask.
enum Criterion : std::uint8_t {
  kSelfCollab = 1 << 0,                // ORCID's researchers co-author the same paper
  kMultiOrcidPerResearcher = 1 << 1,   // researcher linked to >= 2 asserted ORCIDs
  kRegistryDisagrees = 1 << 2,         // registry ORCID/researcher match contradicts the assertion
  kNoResearcherForOrcid = 1 << 3,      // no registry researcher carries the ORCID
};

// "SELF_COLLAB|REGISTRY_DISAGREES" style rendering, fixed bit order.
std::string criteria_string(std::uint8_t criteria);
std::uint8_t parse_criteria(std::string_view text);

struct SuspectFlag {
  Doi doi;
  std::uint32_t position = 0;
  OrcidId orcid;
  std::uint8_t criteria = 0;

  friend bool operator==(const SuspectFlag&, const SuspectFlag&) = default;
};

enum class Verdict { Keep, Reassign, Drop };
enum class Reason { ScoreKeep, ScoreReassign, MultiPublisherRescue, Unrecoverable };

const char* reason_name(Reason r) noexcept;

struct RepairOutcome {
  Doi doi;
  std::uint32_t position = 0;
  OrcidId orcid;
  std::uint8_t criteria = 0;
  Verdict verdict = Verdict::Keep;
  std::uint32_t new_position = 0;  // meaningful for Reassign
  std::optional<double> best_score;
  Reason reason = Reason::Unrecoverable;

  friend bool operator==(const RepairOutcome&, const RepairOutcome&) = default;
};

// "KEEP", "DROP", "REASSIGN(3)".
std::string verdict_string(const RepairOutcome& o);

struct QualityConfig {
  double keep_threshold = 0.70;
  double reassign_threshold = 0.90;
  // Authors whose normalized given or family name is shorter than this are
  // not eligible as reassignment targets (very short names score high by
  // chance). Empty name parts are exempt.
  unsigned min_name_part_length = 2;
  bool multi_publisher_rescue = true;
  unsigned rescue_min_publishers = 2;
  unsigned workers = 1;
};

struct RepairStats {
  std::size_t total_assertions = 0;
  std::size_t flagged = 0;
  std::size_t kept = 0;
  std::size_t reassigned = 0;
  std::size_t dropped = 0;
  double pct_removed = 0.0;
  double pct_reassigned = 0.0;
};

struct ShufflePoint {
  int year = 0;
  std::size_t flagged = 0;
  std::size_t total = 0;
  double rate = 0.0;
};
using ShuffleRateSeries = std::vector<ShufflePoint>;

// Global indexes over one Crossref assertion table (first phase of the
// two-phase detection: build once, then evaluate per assertion).
class AssertionContext {
 public:
  AssertionContext(const Corpus& corpus, const linkage::AuthorLinkage& linkage,
                   std::span<const CrossrefAssertion> assertions);

  const Corpus& corpus() const noexcept { return *corpus_; }
  const linkage::AuthorLinkage& linkage() const noexcept { return *linkage_; }
  const linkage::ResolvedAssertions& resolved() const noexcept { return resolved_; }
  std::span<const CrossrefAssertion> input() const noexcept { return input_; }

  // Distinct researchers each ORCID is linked to through assertions.
  std::span<const ResIdx> researchers_of(OrcidId o) const;
  // Distinct ORCIDs asserted at positions linked to researcher r.
  std::size_t orcid_count(ResIdx r) const;
  // Position on `p` holding an assertion, if any (index into resolved rows).
  std::optional<std::uint32_t> assertion_at(PubIdx p, std::uint32_t position) const;

 private:
  const Corpus* corpus_;
  const linkage::AuthorLinkage* linkage_;
  std::span<const CrossrefAssertion> input_;
  linkage::ResolvedAssertions resolved_;
  std::unordered_map<OrcidId, std::vector<ResIdx>> orcid_researchers_;
  std::vector<std::uint32_t> researcher_orcid_counts_;
  std::unordered_map<std::uint64_t, std::uint32_t> by_slot_;
};

// Flags assertions whose ORCID is linked to >= 2 researchers who are both
// authors (linked) on the assertion's paper. Sorted by (doi, position).
std::vector<SuspectFlag> detect_self_collaboration(const AssertionContext& ctx);

// Union of all criteria; sorted by (doi, position).
std::vector<SuspectFlag> flag_suspects(const AssertionContext& ctx);

// (orcid, normalized author full name) -> distinct publisher ids where the
// pair appears among assertions that stay at their position.
class PublisherHistory {
 public:
  void add(OrcidId orcid, const std::string& name, const std::string& publisher_id);
  std::size_t publishers(OrcidId orcid, const std::string& name) const;

 private:
  std::unordered_map<std::string, std::vector<std::string>> pairs_;
};

// Applies the rules in order: (a) asserted author's ratio >= keep -> KEEP;
// (b) unique best other author with ratio >= reassign -> REASSIGN (a tie
// -> DROP); (c) pair seen at >= rescue_min_publishers publishers -> KEEP;
// (d) DROP. A missing profile is DROP/UNRECOVERABLE.
RepairOutcome resolve_suspect(const SuspectFlag& flag, const Corpus& corpus, PubIdx pub,
                              const OrcidProfile* profile, const PublisherHistory& history,
                              const QualityConfig& config);

// Resolves every flag. The rescue history is built from unflagged
// assertions plus flagged ones not moved or dropped by rules (a)/(b).
std::vector<RepairOutcome> resolve_all(const AssertionContext& ctx, std::span<const SuspectFlag> flags,
                                       const QualityConfig& config);

struct RepairResult {
  std::vector<CrossrefAssertion> repaired;  // sorted by (doi, position)
  std::vector<RepairOutcome> outcomes;      // final verdicts, sorted by (doi, position)
  RepairStats stats;
};

// REASSIGN moves the ORCID to the new position only if that position holds
// no assertion in the input and no other outcome targets it; otherwise the
// outcome becomes DROP/UNRECOVERABLE. Unresolvable input rows are removed.
RepairResult apply_repairs(const AssertionContext& ctx, std::vector<RepairOutcome> outcomes);

// Per publication year: self-collaboration flags over resolved assertions.
ShuffleRateSeries estimate_shuffle_rate(const AssertionContext& ctx);
// Pooled over all years.
ShufflePoint pooled_rate(const ShuffleRateSeries& series);

// flag -> resolve -> apply on one assertion table.
RepairResult repair(const Corpus& corpus, const linkage::AuthorLinkage& linkage,
                    std::span<const CrossrefAssertion> assertions, const QualityConfig& config);

csv::Table repair_report_table(std::span<const RepairOutcome> outcomes);
// Inverse of repair_report_table. Throws InputError on malformed rows.
std::vector<RepairOutcome> parse_repair_report(std::istream& in);
csv::Table shuffle_rate_table(const ShuffleRateSeries& series);

}  // namespace orcidlink::quality
