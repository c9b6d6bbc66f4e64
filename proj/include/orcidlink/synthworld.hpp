#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "orcidlink/quality.hpp"
#include "orcidlink/records.hpp"

namespace orcidlink::synth {

// Portable random source: mt19937_64's output sequence is fixed by the
// standard, and the bounded draws below avoid library-specific
// distributions, so a seed yields the same world on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for one entity class, derived from the world seed
  // and a stream name.
  static Rng stream(std::uint64_t seed, std::string_view name);

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [lo, hi].
  int between(int lo, int hi);
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  // Index drawn proportionally to weights (at least one positive).
  std::size_t weighted(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

enum class NameClass { None, MarriedName, ShortName, Transliteration };
const char* class_name(NameClass c) noexcept;
std::optional<NameClass> parse_class(std::string_view text) noexcept;

struct PersonName {
  std::string given;
  std::string family;
  friend bool operator==(const PersonName&, const PersonName&) = default;
};

// How one person appears in bylines/registry (published) and in their
// ORCID profile.
struct NameVariant {
  PersonName published;
  PersonName profile;
};

// Syllable-built Latin names.
class NameGenerator {
 public:
  std::string given(Rng& rng) const;
  std::string family(Rng& rng) const;
  PersonName draw(Rng& rng) const { return {given(rng), family(rng)}; }
};

struct TransliterationPair {
  std::string_view latin;
  std::string_view lower;  // Cyrillic
  std::string_view upper;
};

// Latin grapheme -> Cyrillic; longest Latin graphemes first.
std::span<const TransliterationPair> transliteration_table() noexcept;
// Greedy longest-match rendering of lowercase/capitalized ASCII Latin;
// characters without an entry pass through unchanged.
std::string transliterate(std::string_view latin);

// MarriedName: the profile carries a different family name from the pool.
// ShortName: the published given name is truncated to 1-2 characters.
// Transliteration: the profile is rendered in Cyrillic.
// None: identity.
NameVariant perturb_name(const PersonName& name, NameClass kind, Rng& rng, const NameGenerator& pool);

struct AuthorCount {
  unsigned min = 1;
  unsigned max = 12;
  double mean = 4.0;
};

struct PerturbationRates {
  double married_name = 0.0;
  double short_name = 0.0;
  double transliteration = 0.0;
};

struct SynthConfig {
  std::uint64_t seed = 42;
  unsigned n_researchers = 1500;
  unsigned n_papers = 5000;
  AuthorCount authors_per_paper;
  std::vector<std::pair<std::string, double>> countries = {
      {"US", 0.22}, {"GB", 0.10}, {"DE", 0.10}, {"AU", 0.06}, {"CN", 0.16},
      {"BR", 0.08}, {"ZA", 0.06}, {"IN", 0.12}, {"NG", 0.05}, {"ET", 0.05}};
  // Country -> income band, emitted as income_bands.csv.
  std::map<std::string, std::string> income_bands = {
      {"AU", "High"},         {"DE", "High"},         {"GB", "High"},        {"US", "High"},
      {"BR", "Upper middle"}, {"CN", "Upper middle"}, {"ZA", "Upper middle"}, {"IN", "Lower middle"},
      {"NG", "Lower middle"}, {"ET", "Low"}};
  unsigned n_publishers = 12;
  unsigned journals_per_publisher = 6;
  std::vector<std::pair<std::string, double>> for_codes = {
      {"01", 1.0}, {"02", 1.0}, {"03", 1.5}, {"05", 0.8}, {"06", 2.0}, {"08", 1.2},
      {"09", 1.5}, {"10", 0.6}, {"11", 3.0}, {"14", 0.5}, {"16", 0.8}, {"17", 0.9}};
  int year_start = 2008;
  int year_end = 2020;
  double orcid_ownership_rate = 0.8;
  double crossref_assertion_rate = 0.8;  // per owned authorship
  double authenticated_rate = 0.3;
  double shuffle_rate = 0.0;             // per assertion with a free target
  double sync_probability = 0.7;         // Crossref assertion mirrored in the profile
  double manual_work_rate = 0.2;         // unasserted authorship added to the profile
  PerturbationRates perturbation;
  double registry_coverage = 1.0;
  // Every pair of base names has similarity ratio below this (>= 1 only
  // enforces distinct names).
  double max_name_similarity = 1.0;
  // Fraction of people named as a one-letter variant of an earlier person.
  double confusable_rate = 0.0;
  unsigned n_funders = 15;
};

// Throws std::invalid_argument describing the first problem.
void validate(const SynthConfig& config);

nlohmann::ordered_json to_json(const SynthConfig& config);

struct PersonTruth {
  std::string researcher_id;
  NameClass name_class = NameClass::None;
  bool covered = false;  // present in the researcher registry
  std::optional<OrcidId> orcid;
};

struct AuthorshipTruth {
  Doi doi;
  std::uint32_t position = 0;
  std::uint32_t person = 0;  // index into GroundTruth::people
};

struct ShuffleTruth {
  Doi doi;
  OrcidId orcid;
  std::uint32_t from = 0;  // true position of the owner
  std::uint32_t to = 0;    // position the assertion was moved to
};

struct SyncTruth {
  Doi doi;
  OrcidId orcid;
  bool synced = false;
};

struct GroundTruth {
  std::vector<PersonTruth> people;
  std::vector<AuthorshipTruth> authorships;  // sorted by (doi, position)
  std::vector<ShuffleTruth> shuffles;        // sorted by (doi, to)
  std::vector<SyncTruth> syncs;              // one per pre-shuffle assertion

  // Person at (doi, position), if any.
  std::optional<std::uint32_t> person_at(const Doi& doi, std::uint32_t position) const;
  std::optional<std::uint32_t> person_of(OrcidId orcid) const;
};

struct World {
  SynthConfig config;
  std::vector<PublicationRecord> publications;
  std::vector<CrossrefAssertion> crossref;
  std::vector<OrcidProfile> profiles;
  std::vector<ResearcherRecord> researchers;
  GroundTruth truth;
};

World generate_world(const SynthConfig& config);

// Moves each selected assertion to a uniformly chosen other position on the
// same paper that holds no assertion; the vacated position is not reused as
// a target. Assertions without a free target are never selected. Input
// sorted by (doi, position); output likewise sorted.
std::vector<CrossrefAssertion> inject_shuffles(std::vector<CrossrefAssertion> assertions,
                                               const std::vector<PublicationRecord>& publications,
                                               double rate, Rng& rng, std::vector<ShuffleTruth>& shuffles);

struct EmittedFiles {
  std::filesystem::path publications, crossref, profiles, researchers, income_bands, truth, config;
};

// Writes the four NDJSON dumps, income_bands.csv, truth.ndjson and a
// pipeline.toml pointing at them.
EmittedFiles emit_world(const World& world, const std::filesystem::path& dir);

void write_truth(const GroundTruth& truth, std::ostream& out);
GroundTruth read_truth(std::istream& in);

struct ClassScore {
  std::size_t injected = 0;
  std::size_t caught = 0;    // dropped, or reassigned to the true position
  std::size_t repaired = 0;  // reassigned to the true position
  double recall = 0.0;
  double repair_recall = 0.0;
};

struct RepairScore {
  double precision = 1.0;
  double recall = 0.0;
  double repair_recall = 0.0;
  std::size_t injected = 0;          // shuffles whose owner is registry-covered
  std::size_t non_keep = 0;
  std::size_t correct_non_keep = 0;
  std::map<std::string, ClassScore> by_class;  // keyed by owner name class
};

// recall: covered-owner shuffles that were dropped or moved back to the
// true position; precision: correct non-KEEP verdicts / all non-KEEP
// verdicts (1.0 when there are none).
RepairScore score_repair(const GroundTruth& truth, std::span<const quality::RepairOutcome> outcomes);

nlohmann::ordered_json to_json(const RepairScore& score);

}  // namespace orcidlink::synth
