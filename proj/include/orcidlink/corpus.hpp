#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "orcidlink/records.hpp"

namespace orcidlink {

using PubIdx = std::uint32_t;
using ResIdx = std::uint32_t;
inline constexpr std::uint32_t kNoIndex = 0xFFFFFFFFu;

// Normalized name parts of a person (see names::normalize).
struct NormalizedName {
  std::string given;
  std::string family;

  // normalize(given + " " + family), derived from the parts.
  std::string full() const;
  friend bool operator==(const NormalizedName&, const NormalizedName&) = default;
};

// Immutable, indexed view of the publication, profile and researcher tables.
// On construction each researcher's publication_dois is restricted to DOIs
// present in the publication table (the rest are counted and dropped).
class Corpus {
 public:
  Corpus(std::vector<PublicationRecord> publications, std::vector<OrcidProfile> profiles,
         std::vector<ResearcherRecord> researchers);

  // Lookup maps hold views into the owned tables.
  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;
  Corpus(Corpus&&) noexcept = default;
  Corpus& operator=(Corpus&&) noexcept = default;

  std::span<const PublicationRecord> publications() const noexcept { return publications_; }
  std::span<const OrcidProfile> profiles() const noexcept { return profiles_; }
  std::span<const ResearcherRecord> researchers() const noexcept { return researchers_; }

  std::optional<PubIdx> find_publication(const Doi& doi) const;
  std::optional<ResIdx> find_researcher(std::string_view researcher_id) const;
  const OrcidProfile* find_profile(OrcidId orcid) const;

  // Researcher whose registry `orcid` field equals `orcid`; nullopt when no
  // researcher or more than one researcher carries it.
  std::optional<ResIdx> registry_owner(OrcidId orcid) const;
  // Number of registry researchers carrying `orcid`.
  std::size_t registry_claims(OrcidId orcid) const;

  // Resolved publications of a researcher, ascending by index.
  std::span<const PubIdx> researcher_publications(ResIdx r) const;
  // Researchers whose registry record lists the publication, ascending.
  std::span<const ResIdx> publication_listers(PubIdx p) const;

  const NormalizedName& mention_name(PubIdx p, std::uint32_t position) const;
  const NormalizedName& researcher_name(ResIdx r) const { return researcher_names_[r]; }

  std::size_t dropped_researcher_dois() const noexcept { return dropped_researcher_dois_; }

 private:
  std::vector<PublicationRecord> publications_;
  std::vector<OrcidProfile> profiles_;
  std::vector<ResearcherRecord> researchers_;

  std::unordered_map<std::string_view, PubIdx> pub_by_doi_;
  std::unordered_map<std::string_view, ResIdx> res_by_id_;
  std::unordered_map<OrcidId, std::uint32_t> profile_by_orcid_;
  std::unordered_map<OrcidId, std::pair<ResIdx, std::uint32_t>> registry_orcid_;  // owner, claims

  std::vector<std::uint32_t> res_pub_offsets_;
  std::vector<PubIdx> res_pubs_;
  std::vector<std::uint32_t> pub_lister_offsets_;
  std::vector<ResIdx> pub_listers_;

  std::vector<std::uint32_t> mention_offsets_;
  std::vector<NormalizedName> mention_names_;
  std::vector<NormalizedName> researcher_names_;

  std::size_t dropped_researcher_dois_ = 0;
};

}  // namespace orcidlink
