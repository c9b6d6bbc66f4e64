#include "orcidlink/corpus.hpp"

#include <algorithm>

#include "orcidlink/names.hpp"

namespace orcidlink {

std::string NormalizedName::full() const {
  if (given.empty()) return family;
  if (family.empty()) return given;
  std::string out;
  out.reserve(given.size() + family.size() + 1);
  out.append(given).push_back(' ');
  out.append(family);
  return out;
}

Corpus::Corpus(std::vector<PublicationRecord> publications, std::vector<OrcidProfile> profiles,
               std::vector<ResearcherRecord> researchers)
    : publications_(std::move(publications)),
      profiles_(std::move(profiles)),
      researchers_(std::move(researchers)) {
  pub_by_doi_.reserve(publications_.size());
  mention_offsets_.reserve(publications_.size() + 1);
  mention_offsets_.push_back(0);
  for (PubIdx p = 0; p < publications_.size(); ++p) {
    const auto& pub = publications_[p];
    pub_by_doi_.emplace(pub.doi.str(), p);
    for (const auto& a : pub.authors)
      mention_names_.push_back({names::normalize(a.given), names::normalize(a.family)});
    mention_offsets_.push_back(static_cast<std::uint32_t>(mention_names_.size()));
  }

  profile_by_orcid_.reserve(profiles_.size());
  for (std::uint32_t i = 0; i < profiles_.size(); ++i) profile_by_orcid_.emplace(profiles_[i].orcid, i);

  res_by_id_.reserve(researchers_.size());
  researcher_names_.reserve(researchers_.size());
  res_pub_offsets_.reserve(researchers_.size() + 1);
  res_pub_offsets_.push_back(0);
  std::vector<std::uint32_t> lister_counts(publications_.size(), 0);
  for (ResIdx r = 0; r < researchers_.size(); ++r) {
    auto& rec = researchers_[r];
    res_by_id_.emplace(rec.researcher_id, r);
    researcher_names_.push_back({names::normalize(rec.given), names::normalize(rec.family)});
    if (rec.orcid) {
      auto [it, inserted] = registry_orcid_.try_emplace(*rec.orcid, r, 0u);
      ++it->second.second;
    }
    std::vector<Doi> kept;
    kept.reserve(rec.publication_dois.size());
    for (auto& d : rec.publication_dois) {
      auto it = pub_by_doi_.find(d.str());
      if (it == pub_by_doi_.end()) {
        ++dropped_researcher_dois_;
        continue;
      }
      res_pubs_.push_back(it->second);
      ++lister_counts[it->second];
      kept.push_back(std::move(d));
    }
    rec.publication_dois = std::move(kept);
    std::sort(res_pubs_.begin() + res_pub_offsets_.back(), res_pubs_.end());
    res_pub_offsets_.push_back(static_cast<std::uint32_t>(res_pubs_.size()));
  }

  pub_lister_offsets_.assign(publications_.size() + 1, 0);
  for (PubIdx p = 0; p < publications_.size(); ++p)
    pub_lister_offsets_[p + 1] = pub_lister_offsets_[p] + lister_counts[p];
  pub_listers_.resize(res_pubs_.size());
  std::vector<std::uint32_t> fill(pub_lister_offsets_.begin(), pub_lister_offsets_.end() - 1);
  for (ResIdx r = 0; r < researchers_.size(); ++r)
    for (auto p : researcher_publications(r)) pub_listers_[fill[p]++] = r;
}

std::optional<PubIdx> Corpus::find_publication(const Doi& doi) const {
  auto it = pub_by_doi_.find(doi.str());
  if (it == pub_by_doi_.end()) return std::nullopt;
  return it->second;
}

std::optional<ResIdx> Corpus::find_researcher(std::string_view id) const {
  auto it = res_by_id_.find(id);
  if (it == res_by_id_.end()) return std::nullopt;
  return it->second;
}

const OrcidProfile* Corpus::find_profile(OrcidId orcid) const {
  auto it = profile_by_orcid_.find(orcid);
  return it == profile_by_orcid_.end() ? nullptr : &profiles_[it->second];
}

std::optional<ResIdx> Corpus::registry_owner(OrcidId orcid) const {
  auto it = registry_orcid_.find(orcid);
  if (it == registry_orcid_.end() || it->second.second != 1) return std::nullopt;
  return it->second.first;
}

std::size_t Corpus::registry_claims(OrcidId orcid) const {
  auto it = registry_orcid_.find(orcid);
  return it == registry_orcid_.end() ? 0 : it->second.second;
}

std::span<const PubIdx> Corpus::researcher_publications(ResIdx r) const {
  return std::span<const PubIdx>(res_pubs_).subspan(res_pub_offsets_[r],
                                                    res_pub_offsets_[r + 1] - res_pub_offsets_[r]);
}

std::span<const ResIdx> Corpus::publication_listers(PubIdx p) const {
  return std::span<const ResIdx>(pub_listers_)
      .subspan(pub_lister_offsets_[p], pub_lister_offsets_[p + 1] - pub_lister_offsets_[p]);
}

const NormalizedName& Corpus::mention_name(PubIdx p, std::uint32_t position) const {
  return mention_names_[mention_offsets_[p] + position];
}

}  // namespace orcidlink
