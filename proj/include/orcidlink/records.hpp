#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orcidlink/identifiers.hpp"

namespace orcidlink {

struct AuthorMention {
  std::uint32_t position = 0;
  std::string given;
  std::string family;

  friend bool operator==(const AuthorMention&, const AuthorMention&) = default;
};

// One paper. `authors` is sorted by position and positions form 0..n-1.
// `for_codes` is sorted and deduplicated.
struct PublicationRecord {
  Doi doi;
  int year = 0;
  std::string journal_id;
  std::string publisher_id;
  std::vector<std::string> for_codes;
  std::vector<AuthorMention> authors;

  friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

// A Crossref claim that the author at (doi, position) holds `orcid`.
struct CrossrefAssertion {
  Doi doi;
  std::uint32_t position = 0;
  OrcidId orcid;
  bool authenticated = false;

  friend bool operator==(const CrossrefAssertion&, const CrossrefAssertion&) = default;
};

// Registry-side identity. `work_dois` is sorted and deduplicated.
struct OrcidProfile {
  OrcidId orcid;
  std::string given;
  std::string family;
  Date created;
  std::vector<Doi> work_dois;

  friend bool operator==(const OrcidProfile&, const OrcidProfile&) = default;
};

// Background-registry researcher. `publication_dois` and `funder_ids` are
// sorted and deduplicated.
struct ResearcherRecord {
  std::string researcher_id;
  std::string given;
  std::string family;
  std::string country;
  std::optional<OrcidId> orcid;
  std::vector<Doi> publication_dois;
  std::vector<std::string> funder_ids;

  friend bool operator==(const ResearcherRecord&, const ResearcherRecord&) = default;
};

}  // namespace orcidlink
