#include "orcidlink/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "orcidlink/ingest.hpp"

namespace orcidlink::metrics {

namespace {

int pub_year(const Corpus& corpus, PubIdx p) { return corpus.publications()[p].year; }

double pct(std::size_t num, std::size_t den) {
  return den ? 100.0 * static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

void sort_unique(std::vector<PubIdx>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Publication indices of Crossref rows that resolve to a known DOI and a
// valid author position.
std::vector<std::pair<PubIdx, const CrossrefAssertion*>> resolve_rows(
    const Corpus& corpus, std::span<const CrossrefAssertion> crossref) {
  std::vector<std::pair<PubIdx, const CrossrefAssertion*>> out;
  out.reserve(crossref.size());
  for (const auto& a : crossref) {
    auto p = corpus.find_publication(a.doi);
    if (!p || a.position >= corpus.publications()[*p].authors.size()) continue;
    out.emplace_back(*p, &a);
  }
  return out;
}

std::string fmt2(double v) { return csv::format_fixed(v, 2); }
std::string fmt6(double v) { return csv::format_fixed(v, 6); }

}  // namespace

std::vector<ResIdx> build_cohort(const Corpus& corpus, const CohortSpec& spec) {
  std::vector<ResIdx> out;
  const auto n = static_cast<ResIdx>(corpus.researchers().size());
  for (ResIdx r = 0; r < n; ++r) {
    auto pubs = corpus.researcher_publications(r);
    if (pubs.empty()) continue;
    int first = pub_year(corpus, pubs.front());
    bool in_window = false;
    for (PubIdx p : pubs) {
      int y = pub_year(corpus, p);
      first = std::min(first, y);
      in_window = in_window || (y >= spec.window_start && y <= spec.window_end);
    }
    if (in_window && spec.window_end - first > spec.min_history_years &&
        pubs.size() > static_cast<std::size_t>(std::max(spec.min_papers, 0)))
      out.push_back(r);
  }
  return out;
}

OwnershipIndex::OwnershipIndex(const Corpus& corpus, std::span<const linkage::UnifiedAssertion> unified)
    : corpus_(&corpus) {
  const auto n = corpus.researchers().size();
  orcid_.resize(n);
  owned_.resize(n);
  owned_crossref_.resize(n);

  struct Row {
    ResIdx researcher;
    PubIdx pub;
    OrcidId orcid;
  };
  std::vector<Row> crossref;
  for (const auto& u : unified) {
    auto p = corpus.find_publication(u.doi);
    if (!p) continue;
    if (u.source == linkage::Source::OrcidRegistry) {
      registry_works_.emplace_back(u.orcid.packed(), *p);
      continue;
    }
    crossref_rows_.emplace_back(u.orcid.packed(), *p);
    if (!u.researcher_id) continue;
    if (auto r = corpus.find_researcher(*u.researcher_id)) crossref.push_back({*r, *p, u.orcid});
  }
  std::sort(registry_works_.begin(), registry_works_.end());
  registry_works_.erase(std::unique(registry_works_.begin(), registry_works_.end()), registry_works_.end());
  std::sort(crossref_rows_.begin(), crossref_rows_.end());
  crossref_rows_.erase(std::unique(crossref_rows_.begin(), crossref_rows_.end()), crossref_rows_.end());

  // Researcher ORCID: registry field, else the most frequent linked Crossref
  // ORCID (ties: lowest).
  std::vector<std::map<OrcidId, std::size_t>> votes(n);
  for (const auto& row : crossref) ++votes[row.researcher][row.orcid];
  auto researchers = corpus.researchers();
  for (ResIdx r = 0; r < n; ++r) {
    if (researchers[r].orcid) {
      orcid_[r] = researchers[r].orcid;
    } else if (!votes[r].empty()) {
      auto best = votes[r].begin();
      for (auto it = votes[r].begin(); it != votes[r].end(); ++it)
        if (it->second > best->second) best = it;
      orcid_[r] = best->first;
    }
    if (orcid_[r]) by_orcid_[*orcid_[r]].push_back(r);
  }

  for (const auto& row : crossref) {
    if (orcid_[row.researcher] != row.orcid) continue;
    owned_crossref_[row.researcher].push_back(row.pub);
    owned_[row.researcher].push_back(row.pub);
  }
  for (ResIdx r = 0; r < n; ++r) {
    if (!orcid_[r]) continue;
    for (PubIdx p : corpus.researcher_publications(r))
      if (in_registry(*orcid_[r], p)) owned_[r].push_back(p);
    sort_unique(owned_[r]);
    sort_unique(owned_crossref_[r]);
  }
}

std::optional<OrcidId> OwnershipIndex::orcid(ResIdx r) const { return orcid_[r]; }
std::span<const PubIdx> OwnershipIndex::owned(ResIdx r) const { return owned_[r]; }
std::span<const PubIdx> OwnershipIndex::owned_crossref(ResIdx r) const { return owned_crossref_[r]; }

bool OwnershipIndex::in_registry(OrcidId orcid, PubIdx pub) const {
  return std::binary_search(registry_works_.begin(), registry_works_.end(), std::pair{orcid.packed(), pub});
}

std::map<OrcidId, std::vector<PubIdx>> OwnershipIndex::crossref_orcids_in_year(int year) const {
  std::map<OrcidId, std::vector<PubIdx>> out;
  for (auto [packed, p] : crossref_rows_) {
    if (pub_year(*corpus_, p) != year) continue;
    out[OrcidId::from_payload(packed / 11)].push_back(p);
  }
  return out;
}

std::optional<ResIdx> OwnershipIndex::researcher_of(OrcidId orcid) const {
  auto it = by_orcid_.find(orcid);
  if (it == by_orcid_.end() || it->second.size() != 1) return std::nullopt;
  return it->second.front();
}

Fraction adoption(const Corpus& corpus, std::span<const ResIdx> cohort, const OwnershipIndex& own,
                  const CohortSpec& window) {
  Fraction f;
  f.denominator = cohort.size();
  for (ResIdx r : cohort) {
    auto pubs = own.owned(r);
    if (std::any_of(pubs.begin(), pubs.end(), [&](PubIdx p) {
          int y = pub_year(corpus, p);
          return y >= window.window_start && y <= window.window_end;
        }))
      ++f.numerator;
  }
  return f;
}

std::optional<Fraction> completeness(const Corpus& corpus, ResIdx r, const OwnershipIndex& own) {
  auto listed = corpus.researcher_publications(r);
  if (listed.empty() || !own.orcid(r)) return std::nullopt;
  auto owned = own.owned(r);
  Fraction f;
  f.denominator = listed.size();
  for (PubIdx p : listed)
    if (std::binary_search(owned.begin(), owned.end(), p)) ++f.numerator;
  return f;
}

std::optional<std::string> assign_discipline(const Corpus& corpus, ResIdx r) {
  auto pubs = corpus.researcher_publications(r);
  if (pubs.empty()) return std::nullopt;
  int last = pub_year(corpus, pubs.front());
  for (PubIdx p : pubs) last = std::max(last, pub_year(corpus, p));

  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // code -> (all, recent)
  for (PubIdx p : pubs) {
    const auto& pub = corpus.publications()[p];
    bool recent = pub.year > last - 5;
    for (const auto& code : pub.for_codes) {
      auto& c = counts[code];
      ++c.first;
      if (recent) ++c.second;
    }
  }
  if (counts.empty()) return std::nullopt;
  // std::map iterates codes ascending, so strict '>' keeps the lowest code on ties.
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

std::vector<ResearcherIndicators> compute_indicators(const Corpus& corpus, std::span<const ResIdx> cohort,
                                                     const OwnershipIndex& own, const MetricsConfig& config) {
  std::vector<ResearcherIndicators> out;
  out.reserve(cohort.size());
  const auto& w = config.cohort;
  for (ResIdx r : cohort) {
    const auto& rec = corpus.researchers()[r];
    ResearcherIndicators ind;
    ind.index = r;
    ind.researcher_id = rec.researcher_id;
    ind.country = rec.country;
    ind.funders = rec.funder_ids;
    std::set<std::string> publishers;
    for (PubIdx p : corpus.researcher_publications(r)) {
      const auto& pub = corpus.publications()[p];
      if (pub.year >= w.window_start && pub.year <= w.window_end) publishers.insert(pub.publisher_id);
    }
    ind.publishers.assign(publishers.begin(), publishers.end());
    ResIdx one[] = {r};
    ind.adopted = adoption(corpus, one, own, w).numerator == 1;
    if (ind.adopted) {
      if (auto c = completeness(corpus, r, own)) {
        ind.completeness = c->value();
        ind.completeness_num = c->numerator;
        ind.completeness_den = c->denominator;
      }
    }
    ind.orcid = own.orcid(r);
    if (ind.orcid)
      if (const auto* prof = corpus.find_profile(*ind.orcid)) ind.orcid_created = prof->created;
    if (ind.orcid) {
      for (int y = config.report_year_start; y <= config.report_year_end; ++y) {
        bool any = false, synced = false;
        for (PubIdx p : own.owned_crossref(r)) {
          if (pub_year(corpus, p) != y) continue;
          any = true;
          synced = synced || own.in_registry(*ind.orcid, p);
        }
        if (any && !synced) ind.crossref_only_years.push_back(y);
      }
    }
    ind.discipline = assign_discipline(corpus, r);
    out.push_back(std::move(ind));
  }
  return out;
}

std::vector<EarlyUsageRow> early_usage_by_creation_year(const Corpus& corpus,
                                                        std::span<const ResIdx> cohort,
                                                        const OwnershipIndex& own,
                                                        EarlyUsageDenominator denominator) {
  std::map<std::string, std::size_t> country_size;
  std::map<std::pair<std::string, int>, std::pair<std::size_t, std::size_t>> cells;  // (used, created)
  for (ResIdx r : cohort) {
    const auto& country = corpus.researchers()[r].country;
    ++country_size[country];
    auto orcid = own.orcid(r);
    if (!orcid) continue;
    const auto* prof = corpus.find_profile(*orcid);
    if (!prof) continue;
    int y = static_cast<int>(prof->created.year());
    auto& cell = cells[{country, y}];
    ++cell.second;
    auto pubs = own.owned(r);
    if (std::any_of(pubs.begin(), pubs.end(), [&](PubIdx p) {
          int py = pub_year(corpus, p);
          return py >= y && py <= y + 1;
        }))
      ++cell.first;
  }
  std::vector<EarlyUsageRow> out;
  for (const auto& [key, cell] : cells) {
    EarlyUsageRow row;
    row.country = key.first;
    row.creation_year = key.second;
    row.used = cell.first;
    row.denominator =
        denominator == EarlyUsageDenominator::CountryCohort ? country_size[key.first] : cell.second;
    row.fraction = Fraction{row.used, row.denominator}.value();
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CrossrefOnlyRow> crossref_only_share(const Corpus& corpus, std::span<const ResIdx> cohort,
                                                 const OwnershipIndex& own, int year,
                                                 CrossrefOnlyPopulation population) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_country;  // (population, only)
  auto tally = [&](const std::string& country, OrcidId orcid, auto&& pubs) {
    bool any = false, synced = false;
    for (PubIdx p : pubs) {
      if (pub_year(corpus, p) != year) continue;
      any = true;
      synced = synced || own.in_registry(orcid, p);
    }
    if (!any) return;
    auto& c = by_country[country];
    ++c.first;
    if (!synced) ++c.second;
  };
  if (population == CrossrefOnlyPopulation::Researchers) {
    for (ResIdx r : cohort)
      if (auto o = own.orcid(r)) tally(corpus.researchers()[r].country, *o, own.owned_crossref(r));
  } else {
    for (const auto& [orcid, pubs] : own.crossref_orcids_in_year(year)) {
      auto r = own.researcher_of(orcid);
      tally(r ? corpus.researchers()[*r].country : std::string(), orcid, pubs);
    }
  }
  std::vector<CrossrefOnlyRow> out;
  for (const auto& [country, c] : by_country) {
    CrossrefOnlyRow row;
    row.country = country;
    row.year = year;
    row.population = c.first;
    row.crossref_only = c.second;
    row.share = Fraction{c.second, c.first}.value();
    out.push_back(std::move(row));
  }
  return out;
}

const char* dimension_name(Dimension d) noexcept {
  switch (d) {
    case Dimension::Country: return "country";
    case Dimension::Funder: return "funder_id";
    case Dimension::Discipline: return "for_code";
    case Dimension::Publisher: return "publisher_id";
  }
  return "";
}

std::vector<MetricsRow> breakdown(std::span<const ResearcherIndicators> indicators, Dimension dimension) {
  struct Acc {
    std::size_t size = 0, adopted = 0, num = 0, den = 0;
    std::vector<double> completeness;
  };
  std::map<std::string, Acc> groups;
  auto add = [&](const std::string& key, const ResearcherIndicators& ind) {
    auto& g = groups[key];
    ++g.size;
    if (ind.adopted) ++g.adopted;
    g.num += ind.completeness_num;
    g.den += ind.completeness_den;
    if (ind.completeness) g.completeness.push_back(*ind.completeness);
  };
  for (const auto& ind : indicators) {
    switch (dimension) {
      case Dimension::Country: add(ind.country, ind); break;
      case Dimension::Funder:
        for (const auto& f : ind.funders) add(f, ind);
        break;
      case Dimension::Discipline:
        if (ind.discipline) add(*ind.discipline, ind);
        break;
      case Dimension::Publisher:
        for (const auto& p : ind.publishers) add(p, ind);
        break;
    }
  }
  std::vector<MetricsRow> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) {
    MetricsRow row;
    row.dimension = dimension;
    row.key = key;
    row.cohort_size = g.size;
    row.adopted = g.adopted;
    row.adoption_pct = pct(g.adopted, g.size);
    row.completeness_num = g.num;
    row.completeness_den = g.den;
    row.engagement_pct = pct(g.num, g.den);
    row.median_completeness_pct = 100.0 * median(std::move(g.completeness));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<IncomeBandRow> income_band_rollup(std::span<const MetricsRow> country_rows,
                                              const std::map<std::string, std::string>& band_map) {
  struct Acc {
    std::size_t size = 0, adopted = 0, num = 0, den = 0;
    std::vector<double> adoption;
  };
  std::map<std::string, Acc> bands;
  for (const auto& row : country_rows) {
    auto it = band_map.find(row.key);
    if (it == band_map.end()) continue;
    auto& b = bands[it->second];
    b.size += row.cohort_size;
    b.adopted += row.adopted;
    b.num += row.completeness_num;
    b.den += row.completeness_den;
    b.adoption.push_back(row.adoption_pct);
  }
  std::vector<IncomeBandRow> out;
  for (auto& [band, b] : bands) {
    IncomeBandRow row;
    row.band = band;
    row.researchers = b.size;
    row.adoption_pct = pct(b.adopted, b.size);
    row.median_adoption_pct = median(std::move(b.adoption));
    row.completeness_pct = pct(b.num, b.den);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<AuthorsPerPaperRow> avg_authors_per_paper(const Corpus& corpus,
                                                      std::optional<std::pair<int, int>> years) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> acc;  // (papers, authors)
  for (const auto& pub : corpus.publications()) {
    if (years && (pub.year < years->first || pub.year > years->second)) continue;
    for (const auto& code : pub.for_codes) {
      auto& a = acc[code];
      ++a.first;
      a.second += pub.authors.size();
    }
  }
  std::vector<AuthorsPerPaperRow> out;
  for (const auto& [code, a] : acc)
    out.push_back({code, a.first, static_cast<double>(a.second) / static_cast<double>(a.first)});
  return out;
}

std::vector<JournalSupportRow> journal_orcid_support(const Corpus& corpus,
                                                     std::span<const CrossrefAssertion> crossref) {
  using Key = std::pair<std::string, int>;
  std::map<Key, std::pair<std::set<std::string>, std::set<std::string>>> acc;  // (with, active)
  for (const auto& pub : corpus.publications()) acc[{pub.publisher_id, pub.year}].second.insert(pub.journal_id);
  for (auto [p, a] : resolve_rows(corpus, crossref)) {
    const auto& pub = corpus.publications()[p];
    acc[{pub.publisher_id, pub.year}].first.insert(pub.journal_id);
  }
  std::vector<JournalSupportRow> out;
  for (const auto& [key, sets] : acc)
    out.push_back({key.first, key.second, sets.first.size(), sets.second.size()});
  return out;
}

std::vector<OrcidDistributionRow> orcid_count_distribution(const Corpus& corpus,
                                                           std::span<const CrossrefAssertion> crossref,
                                                           int year, unsigned min_authors, unsigned top_n) {
  std::unordered_map<PubIdx, std::set<OrcidId>> per_paper;
  std::map<std::string, OrcidDistributionRow> acc;
  for (auto [p, a] : resolve_rows(corpus, crossref)) {
    const auto& pub = corpus.publications()[p];
    if (pub.year != year) continue;
    ++acc[pub.publisher_id].assertions;
    per_paper[p].insert(a->orcid);
  }
  const auto n = static_cast<PubIdx>(corpus.publications().size());
  for (PubIdx p = 0; p < n; ++p) {
    const auto& pub = corpus.publications()[p];
    if (pub.year != year || pub.authors.size() < min_authors) continue;
    auto& row = acc[pub.publisher_id];
    ++row.papers;
    auto it = per_paper.find(p);
    std::size_t k = it == per_paper.end() ? 0 : it->second.size();
    if (k == 0) ++row.zero;
    else if (k == 1) ++row.one;
    else ++row.two_plus;
  }
  std::vector<OrcidDistributionRow> out;
  for (auto& [publisher, row] : acc) {
    if (row.papers == 0) continue;
    row.publisher_id = publisher;
    row.share_zero = Fraction{row.zero, row.papers}.value();
    row.share_one = Fraction{row.one, row.papers}.value();
    row.share_two_plus = Fraction{row.two_plus, row.papers}.value();
    out.push_back(std::move(row));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.assertions > b.assertions; });
  if (top_n && out.size() > top_n) out.resize(top_n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

MetricsTables compute_all(const Corpus& corpus, std::span<const CrossrefAssertion> repaired_crossref,
                          std::span<const linkage::UnifiedAssertion> unified,
                          const std::map<std::string, std::string>& band_map, const MetricsConfig& config) {
  MetricsTables t;
  OwnershipIndex own(corpus, unified);
  t.cohort = build_cohort(corpus, config.cohort);
  t.indicators = compute_indicators(corpus, t.cohort, own, config);
  t.by_country = breakdown(t.indicators, Dimension::Country);
  t.by_funder = breakdown(t.indicators, Dimension::Funder);
  t.by_discipline = breakdown(t.indicators, Dimension::Discipline);
  t.early_usage = early_usage_by_creation_year(corpus, t.cohort, own, config.early_usage_denominator);
  for (int y = config.report_year_start; y <= config.report_year_end; ++y) {
    auto rows = crossref_only_share(corpus, t.cohort, own, y, config.crossref_only_population);
    t.crossref_only.insert(t.crossref_only.end(), rows.begin(), rows.end());
  }
  std::stable_sort(t.crossref_only.begin(), t.crossref_only.end(),
                   [](const auto& a, const auto& b) { return a.country < b.country; });
  t.income_bands = income_band_rollup(t.by_country, band_map);
  t.authors_per_paper = avg_authors_per_paper(corpus);
  t.journal_support = journal_orcid_support(corpus, repaired_crossref);
  t.orcid_distribution =
      orcid_count_distribution(corpus, repaired_crossref, config.publisher_year, config.min_authors, config.top_n);
  return t;
}

std::map<std::string, std::string> load_band_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open income band map: " + path.string());
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(in);
  } catch (const std::runtime_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (rows.empty()) throw InputError(path.string() + ": missing header");
  const auto& header = rows.front();
  auto col = [&](const char* name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError(path.string() + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::size_t c = col("country"), b = col("band");
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() <= std::max(c, b))
      throw InputError(path.string() + ":" + std::to_string(i + 1) + ": short row");
    out[row[c]] = row[b];
  }
  return out;
}

csv::Table breakdown_table(std::span<const MetricsRow> rows, Dimension dimension) {
  csv::Table t;
  const char* key = dimension_name(dimension);
  t.header = {key,          "researchers",      "adopted",        "adoption_pct",
              "completeness_num", "completeness_den", "engagement_pct", "median_completeness_pct"};
  for (const auto& r : rows)
    t.rows.push_back({r.key, std::to_string(r.cohort_size), std::to_string(r.adopted), fmt2(r.adoption_pct),
                      std::to_string(r.completeness_num), std::to_string(r.completeness_den),
                      fmt2(r.engagement_pct), fmt2(r.median_completeness_pct)});
  return t;
}

csv::Table early_usage_table(std::span<const EarlyUsageRow> rows) {
  csv::Table t;
  t.header = {"country", "creation_year", "used", "denominator", "fraction"};
  for (const auto& r : rows)
    t.rows.push_back({r.country, std::to_string(r.creation_year), std::to_string(r.used),
                      std::to_string(r.denominator), fmt6(r.fraction)});
  return t;
}

csv::Table crossref_only_table(std::span<const CrossrefOnlyRow> rows) {
  csv::Table t;
  t.header = {"country", "year", "population", "crossref_only", "share"};
  for (const auto& r : rows)
    t.rows.push_back({r.country, std::to_string(r.year), std::to_string(r.population),
                      std::to_string(r.crossref_only), fmt6(r.share)});
  return t;
}

csv::Table income_band_table(std::span<const IncomeBandRow> rows) {
  csv::Table t;
  t.header = {"band", "researchers", "adoption_pct", "median_adoption_pct", "completeness_pct"};
  for (const auto& r : rows)
    t.rows.push_back({r.band, std::to_string(r.researchers), fmt2(r.adoption_pct), fmt2(r.median_adoption_pct),
                      fmt2(r.completeness_pct)});
  return t;
}

csv::Table authors_per_paper_table(std::span<const AuthorsPerPaperRow> rows) {
  csv::Table t;
  t.header = {"for_code", "papers", "mean_authors"};
  for (const auto& r : rows) t.rows.push_back({r.for_code, std::to_string(r.papers), fmt6(r.mean_authors)});
  return t;
}

csv::Table journal_support_table(std::span<const JournalSupportRow> rows) {
  csv::Table t;
  t.header = {"publisher_id", "year", "journals_with_orcid", "journals_active"};
  for (const auto& r : rows)
    t.rows.push_back({r.publisher_id, std::to_string(r.year), std::to_string(r.journals_with_orcid),
                      std::to_string(r.journals_active)});
  return t;
}

csv::Table orcid_distribution_table(std::span<const OrcidDistributionRow> rows) {
  csv::Table t;
  t.header = {"rank", "publisher_id", "assertions", "papers", "zero",
              "one",  "two_plus",     "share_zero", "share_one", "share_two_plus"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.rank), r.publisher_id, std::to_string(r.assertions),
                      std::to_string(r.papers), std::to_string(r.zero), std::to_string(r.one),
                      std::to_string(r.two_plus), fmt6(r.share_zero), fmt6(r.share_one),
                      fmt6(r.share_two_plus)});
  return t;
}

}  // namespace orcidlink::metrics
