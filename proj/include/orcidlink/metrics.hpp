#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orcidlink/corpus.hpp"
#include "orcidlink/csv.hpp"
#include "orcidlink/linkage.hpp"

namespace orcidlink::metrics {

struct CohortSpec {
  int window_start = 2015;
  int window_end = 2019;
  int min_history_years = 5;
  int min_papers = 5;
};

// Researchers with >= 1 publication in the window, (window_end - first
// publication year) > min_history_years and > min_papers publications.
// Ascending indices.
std::vector<ResIdx> build_cohort(const Corpus& corpus, const CohortSpec& spec);

// Which assertions belong to which researcher. A researcher's ORCID is the
// registry's own match when present; otherwise the ORCID most often
// asserted in Crossref rows linked to them (ties: lowest iD). A unified row
// is owned by R when its researcher_id is R and its ORCID is R's ORCID.
class OwnershipIndex {
 public:
  OwnershipIndex(const Corpus& corpus, std::span<const linkage::UnifiedAssertion> unified);

  std::optional<OrcidId> orcid(ResIdx r) const;
  // Publications with an owned row, ascending.
  std::span<const PubIdx> owned(ResIdx r) const;
  std::span<const PubIdx> owned_crossref(ResIdx r) const;
  // True if the registry holds (orcid, pub) as a work.
  bool in_registry(OrcidId orcid, PubIdx pub) const;
  // Distinct ORCIDs with a Crossref row on the publication set of `year`,
  // with the publications they appear on.
  std::map<OrcidId, std::vector<PubIdx>> crossref_orcids_in_year(int year) const;
  // Researcher whose ORCID is `orcid`, if exactly one.
  std::optional<ResIdx> researcher_of(OrcidId orcid) const;

 private:
  const Corpus* corpus_;
  std::vector<std::optional<OrcidId>> orcid_;
  std::vector<std::vector<PubIdx>> owned_;
  std::vector<std::vector<PubIdx>> owned_crossref_;
  std::vector<std::pair<std::uint64_t, PubIdx>> registry_works_;  // sorted
  std::vector<std::pair<std::uint64_t, PubIdx>> crossref_rows_;   // sorted
  std::map<OrcidId, std::vector<ResIdx>> by_orcid_;
};

struct Fraction {
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  double value() const noexcept {
    return denominator ? static_cast<double>(numerator) / static_cast<double>(denominator) : 0.0;
  }
};

// Cohort members with an owned row on a publication dated in the window.
Fraction adoption(const Corpus& corpus, std::span<const ResIdx> cohort, const OwnershipIndex& own,
                  const CohortSpec& window);

// |registry DOIs with an owned row| / |registry DOIs|; nullopt when the
// researcher has no registry DOIs or no ORCID.
std::optional<Fraction> completeness(const Corpus& corpus, ResIdx r, const OwnershipIndex& own);

// Modal 2-digit code over the researcher's publications (each paper counts
// each of its codes once). Ties: count over the five most recent years of
// the researcher's record, then lowest code. nullopt if no codes at all.
std::optional<std::string> assign_discipline(const Corpus& corpus, ResIdx r);

enum class EarlyUsageDenominator { CountryCohort, CreatedInYear };
enum class CrossrefOnlyPopulation { Researchers, Orcids };

struct MetricsConfig {
  CohortSpec cohort;
  int report_year_start = 2015;  // years reported in crossref_only
  int report_year_end = 2019;
  int publisher_year = 2019;     // year for the ORCID-count distribution
  unsigned min_authors = 4;
  unsigned top_n = 20;           // 0 keeps every publisher
  EarlyUsageDenominator early_usage_denominator = EarlyUsageDenominator::CountryCohort;
  CrossrefOnlyPopulation crossref_only_population = CrossrefOnlyPopulation::Researchers;
};

struct ResearcherIndicators {
  ResIdx index = kNoIndex;
  std::string researcher_id;
  std::string country;
  std::vector<std::string> funders;
  std::vector<std::string> publishers;  // of window-year publications
  bool adopted = false;
  std::optional<double> completeness;   // only when adopted
  std::size_t completeness_num = 0;
  std::size_t completeness_den = 0;
  std::optional<OrcidId> orcid;
  std::optional<Date> orcid_created;
  std::vector<int> crossref_only_years;
  std::optional<std::string> discipline;
};

std::vector<ResearcherIndicators> compute_indicators(const Corpus& corpus, std::span<const ResIdx> cohort,
                                                     const OwnershipIndex& own, const MetricsConfig& config);

struct EarlyUsageRow {
  std::string country;
  int creation_year = 0;
  std::size_t used = 0;
  std::size_t denominator = 0;
  double fraction = 0.0;
};

// Cohort members whose ORCID was created in year Y and has an owned row on a
// publication dated in [Y, Y + 1], per (country, Y). Not cumulative.
std::vector<EarlyUsageRow> early_usage_by_creation_year(const Corpus& corpus,
                                                        std::span<const ResIdx> cohort,
                                                        const OwnershipIndex& own,
                                                        EarlyUsageDenominator denominator);

struct CrossrefOnlyRow {
  std::string country;
  int year = 0;
  std::size_t population = 0;
  std::size_t crossref_only = 0;
  double share = 0.0;
};

// Among the population with >= 1 Crossref row on a year-Y publication, the
// share with none of those DOIs in their public ORCID record.
std::vector<CrossrefOnlyRow> crossref_only_share(const Corpus& corpus, std::span<const ResIdx> cohort,
                                                 const OwnershipIndex& own, int year,
                                                 CrossrefOnlyPopulation population);

enum class Dimension { Country, Funder, Discipline, Publisher };
const char* dimension_name(Dimension d) noexcept;

struct MetricsRow {
  Dimension dimension = Dimension::Country;
  std::string key;
  std::size_t cohort_size = 0;
  std::size_t adopted = 0;
  double adoption_pct = 0.0;
  std::size_t completeness_num = 0;
  std::size_t completeness_den = 0;
  double engagement_pct = 0.0;           // pooled: sum num / sum den
  double median_completeness_pct = 0.0;  // median over adopted members
};

// Group-by over researcher indicators. Funder and publisher membership is
// multi-valued (a researcher counts in every group they belong to);
// researchers without a discipline are left out of the discipline rows.
std::vector<MetricsRow> breakdown(std::span<const ResearcherIndicators> indicators, Dimension dimension);

struct IncomeBandRow {
  std::string band;
  std::size_t researchers = 0;
  double adoption_pct = 0.0;         // pooled
  double median_adoption_pct = 0.0;  // median of per-country adoption
  double completeness_pct = 0.0;     // pooled
};

std::vector<IncomeBandRow> income_band_rollup(std::span<const MetricsRow> country_rows,
                                              const std::map<std::string, std::string>& band_map);

struct AuthorsPerPaperRow {
  std::string for_code;
  std::size_t papers = 0;
  double mean_authors = 0.0;
};

// Optional inclusive year range restricts the publications considered.
std::vector<AuthorsPerPaperRow> avg_authors_per_paper(const Corpus& corpus,
                                                      std::optional<std::pair<int, int>> years = {});

struct JournalSupportRow {
  std::string publisher_id;
  int year = 0;
  std::size_t journals_with_orcid = 0;
  std::size_t journals_active = 0;
};

std::vector<JournalSupportRow> journal_orcid_support(const Corpus& corpus,
                                                     std::span<const CrossrefAssertion> crossref);

struct OrcidDistributionRow {
  std::size_t rank = 0;
  std::string publisher_id;
  std::size_t assertions = 0;  // all year-Y Crossref assertions of the publisher
  std::size_t papers = 0;      // year-Y papers with >= min_authors authors
  std::size_t zero = 0, one = 0, two_plus = 0;
  double share_zero = 0.0, share_one = 0.0, share_two_plus = 0.0;
};

// Ranked by assertion volume (descending, then publisher id); publishers
// with no qualifying papers are omitted; top_n = 0 keeps all.
std::vector<OrcidDistributionRow> orcid_count_distribution(const Corpus& corpus,
                                                           std::span<const CrossrefAssertion> crossref,
                                                           int year, unsigned min_authors, unsigned top_n);

struct MetricsTables {
  std::vector<ResIdx> cohort;
  std::vector<ResearcherIndicators> indicators;
  std::vector<MetricsRow> by_country, by_funder, by_discipline;
  std::vector<EarlyUsageRow> early_usage;
  std::vector<CrossrefOnlyRow> crossref_only;
  std::vector<IncomeBandRow> income_bands;
  std::vector<AuthorsPerPaperRow> authors_per_paper;
  std::vector<JournalSupportRow> journal_support;
  std::vector<OrcidDistributionRow> orcid_distribution;
};

MetricsTables compute_all(const Corpus& corpus, std::span<const CrossrefAssertion> repaired_crossref,
                          std::span<const linkage::UnifiedAssertion> unified,
                          const std::map<std::string, std::string>& band_map, const MetricsConfig& config);

// CSV {country, band} with a header row. Throws InputError if unreadable.
std::map<std::string, std::string> load_band_map(const std::filesystem::path& path);

csv::Table breakdown_table(std::span<const MetricsRow> rows, Dimension dimension);
csv::Table early_usage_table(std::span<const EarlyUsageRow> rows);
csv::Table crossref_only_table(std::span<const CrossrefOnlyRow> rows);
csv::Table income_band_table(std::span<const IncomeBandRow> rows);
csv::Table authors_per_paper_table(std::span<const AuthorsPerPaperRow> rows);
csv::Table journal_support_table(std::span<const JournalSupportRow> rows);
csv::Table orcid_distribution_table(std::span<const OrcidDistributionRow> rows);

}  // namespace orcidlink::metrics
