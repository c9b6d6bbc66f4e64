#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orcidlink/corpus.hpp"
#include "orcidlink/csv.hpp"

namespace orcidlink::linkage {

// Author-level join of publication mentions to registry researchers. A
// mention is linked to researcher R iff R is the only researcher listing
// the DOI whose normalized (given, family) equals the mention's, and R
// matches no other mention on the same paper.
class AuthorLinkage {
 public:
  static AuthorLinkage build(const Corpus& corpus);

  std::optional<ResIdx> researcher_at(PubIdx p, std::uint32_t position) const;
  // Researchers linked somewhere on the paper, ascending.
  std::span<const ResIdx> linked_on(PubIdx p) const;
  // Position at which `r` is linked on `p`, if any.
  std::optional<std::uint32_t> position_of(PubIdx p, ResIdx r) const;

  std::size_t mentions() const noexcept { return mention_researcher_.size(); }
  std::size_t linked() const noexcept { return linked_; }
  std::size_t ambiguous() const noexcept { return ambiguous_; }

 private:
  std::vector<std::uint32_t> offsets_;            // per publication into mention_researcher_
  std::vector<ResIdx> mention_researcher_;        // kNoIndex when unlinked
  std::vector<std::uint32_t> linked_offsets_;
  std::vector<ResIdx> linked_sorted_;
  std::size_t linked_ = 0;
  std::size_t ambiguous_ = 0;
};

// A Crossref assertion resolved against the corpus.
struct ResolvedAssertion {
  PubIdx pub = kNoIndex;
  std::uint32_t position = 0;
  OrcidId orcid;
  bool authenticated = false;
  ResIdx researcher = kNoIndex;  // linked researcher at (pub, position)
};

struct ResolvedAssertions {
  std::vector<ResolvedAssertion> rows;
  std::vector<std::uint32_t> source_rows;  // index into the input span, per row
  std::size_t orphans = 0;                 // DOI not in publications or position out of range
};

// Drops assertions that do not refer to an existing author mention.
ResolvedAssertions resolve_assertions(const Corpus& corpus, const AuthorLinkage& linkage,
                                      std::span<const CrossrefAssertion> assertions);

struct LinkedAuthor {
  Doi doi;
  std::uint32_t position = 0;
  std::optional<std::string> researcher_id;
  std::optional<OrcidId> orcid_crossref;
  std::optional<bool> authenticated;

  friend bool operator==(const LinkedAuthor&, const LinkedAuthor&) = default;
};

// One row per author mention, in publication order then position.
std::vector<LinkedAuthor> link_crossref_authors(const Corpus& corpus, const AuthorLinkage& linkage,
                                                std::span<const CrossrefAssertion> assertions);

enum class Source { Crossref, OrcidRegistry };
const char* source_name(Source s) noexcept;

struct UnifiedAssertion {
  Doi doi;
  std::optional<std::uint32_t> position;  // absent for registry rows
  OrcidId orcid;
  Source source = Source::Crossref;
  bool authenticated = false;
  std::optional<std::string> researcher_id;

  friend bool operator==(const UnifiedAssertion&, const UnifiedAssertion&) = default;
};

// One row per (orcid, doi) with doi in the publication table. Registry rows
// are always treated as authenticated: they come from the holder's record.
std::vector<UnifiedAssertion> link_orcid_works(const Corpus& corpus);

// Union of repaired Crossref rows and registry rows, deduplicated on
// (doi, orcid, source) and sorted by (doi, source, orcid, position).
// Crossref rows take the researcher linked at their position. Registry rows
// take the registry owner of the ORCID, or else the single researcher the
// repaired Crossref rows link it to, provided that researcher lists the DOI.
std::vector<UnifiedAssertion> build_assertion_table(const Corpus& corpus,
                                                    const AuthorLinkage& linkage,
                                                    std::span<const UnifiedAssertion> registry_rows,
                                                    std::span<const CrossrefAssertion> repaired_crossref);

csv::Table linked_authors_table(std::span<const LinkedAuthor> rows);

}  // namespace orcidlink::linkage
