#pragma once

// Small builders shared by the unit and acceptance tests.

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "orcidlink/corpus.hpp"
#include "orcidlink/linkage.hpp"
#include "orcidlink/quality.hpp"
#include "orcidlink/records.hpp"
#include "orcidlink/synthworld.hpp"

namespace fixtures {

using namespace orcidlink;

inline Doi doi(const std::string& s) { return *Doi::parse(s); }

// Deterministic valid ORCID iD from a small number.
inline OrcidId orcid(std::uint64_t n) { return OrcidId::from_payload(10000000ull + n); }

inline PublicationRecord pub(const std::string& d, int year, std::vector<std::pair<std::string, std::string>> names,
                             std::string publisher = "P01", std::string journal = "P01-J01",
                             std::vector<std::string> codes = {"11"}) {
  PublicationRecord p;
  p.doi = doi(d);
  p.year = year;
  p.publisher_id = std::move(publisher);
  p.journal_id = std::move(journal);
  p.for_codes = std::move(codes);
  for (std::uint32_t i = 0; i < names.size(); ++i) p.authors.push_back({i, names[i].first, names[i].second});
  return p;
}

inline ResearcherRecord researcher(const std::string& id, const std::string& given, const std::string& family,
                                   std::vector<std::string> dois, std::optional<OrcidId> o = std::nullopt,
                                   std::string country = "AU") {
  ResearcherRecord r;
  r.researcher_id = id;
  r.given = given;
  r.family = family;
  r.country = std::move(country);
  r.orcid = o;
  for (const auto& d : dois) r.publication_dois.push_back(doi(d));
  std::sort(r.publication_dois.begin(), r.publication_dois.end());
  return r;
}

inline OrcidProfile profile(OrcidId o, const std::string& given, const std::string& family,
                            std::vector<std::string> works = {}, int created_year = 2012) {
  OrcidProfile p;
  p.orcid = o;
  p.given = given;
  p.family = family;
  p.created = std::chrono::year{created_year} / 3 / 1;
  for (const auto& d : works) p.work_dois.push_back(doi(d));
  std::sort(p.work_dois.begin(), p.work_dois.end());
  return p;
}

inline CrossrefAssertion assertion(const std::string& d, std::uint32_t pos, OrcidId o, bool auth = false) {
  return CrossrefAssertion{doi(d), pos, o, auth};
}

// A synthetic world taken through linkage, repair and the union table.
struct Processed {
  synth::World world;
  std::unique_ptr<Corpus> corpus;
  linkage::AuthorLinkage linkage;
  quality::RepairResult repair;
  std::vector<linkage::UnifiedAssertion> unified;
};

inline std::unique_ptr<Processed> process(const synth::SynthConfig& config,
                                          const quality::QualityConfig& qc = {}) {
  auto out = std::make_unique<Processed>();
  out->world = synth::generate_world(config);
  out->corpus = std::make_unique<Corpus>(out->world.publications, out->world.profiles, out->world.researchers);
  out->linkage = linkage::AuthorLinkage::build(*out->corpus);
  out->repair = quality::repair(*out->corpus, out->linkage, out->world.crossref, qc);
  auto registry = linkage::link_orcid_works(*out->corpus);
  out->unified = linkage::build_assertion_table(*out->corpus, out->linkage, registry, out->repair.repaired);
  return out;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("orcidlink-test-" + name + "-" + std::to_string(std::random_device{}()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
