#include "orcidlink/linkage.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace orcidlink::linkage {

AuthorLinkage AuthorLinkage::build(const Corpus& corpus) {
  AuthorLinkage out;
  auto pubs = corpus.publications();
  out.offsets_.reserve(pubs.size() + 1);
  out.offsets_.push_back(0);
  out.linked_offsets_.reserve(pubs.size() + 1);
  out.linked_offsets_.push_back(0);

  std::vector<ResIdx> candidate;
  std::vector<std::uint32_t> candidate_count;
  for (PubIdx p = 0; p < pubs.size(); ++p) {
    const auto n = static_cast<std::uint32_t>(pubs[p].authors.size());
    auto listers = corpus.publication_listers(p);
    candidate.assign(n, kNoIndex);
    candidate_count.assign(n, 0);
    // How many mentions each lister's name matches on this paper.
    std::vector<std::uint32_t> lister_hits(listers.size(), 0);
    for (std::uint32_t pos = 0; pos < n; ++pos) {
      const auto& mention = corpus.mention_name(p, pos);
      for (std::size_t k = 0; k < listers.size(); ++k) {
        if (corpus.researcher_name(listers[k]) == mention) {
          ++candidate_count[pos];
          ++lister_hits[k];
          candidate[pos] = listers[k];
        }
      }
    }
    for (std::uint32_t pos = 0; pos < n; ++pos) {
      ResIdx r = kNoIndex;
      if (candidate_count[pos] == 1) {
        auto k = static_cast<std::size_t>(
            std::find(listers.begin(), listers.end(), candidate[pos]) - listers.begin());
        if (lister_hits[k] == 1) r = candidate[pos];
      }
      if (r != kNoIndex) {
        ++out.linked_;
        out.linked_sorted_.push_back(r);
      } else if (candidate_count[pos] > 0) {
        ++out.ambiguous_;
      }
      out.mention_researcher_.push_back(r);
    }
    std::sort(out.linked_sorted_.begin() + out.linked_offsets_.back(), out.linked_sorted_.end());
    out.offsets_.push_back(static_cast<std::uint32_t>(out.mention_researcher_.size()));
    out.linked_offsets_.push_back(static_cast<std::uint32_t>(out.linked_sorted_.size()));
  }
  return out;
}

std::optional<ResIdx> AuthorLinkage::researcher_at(PubIdx p, std::uint32_t position) const {
  if (p + 1 >= offsets_.size() || position >= offsets_[p + 1] - offsets_[p]) return std::nullopt;
  ResIdx r = mention_researcher_[offsets_[p] + position];
  if (r == kNoIndex) return std::nullopt;
  return r;
}

std::span<const ResIdx> AuthorLinkage::linked_on(PubIdx p) const {
  return std::span<const ResIdx>(linked_sorted_)
      .subspan(linked_offsets_[p], linked_offsets_[p + 1] - linked_offsets_[p]);
}

std::optional<std::uint32_t> AuthorLinkage::position_of(PubIdx p, ResIdx r) const {
  for (std::uint32_t i = offsets_[p]; i < offsets_[p + 1]; ++i)
    if (mention_researcher_[i] == r) return i - offsets_[p];
  return std::nullopt;
}

ResolvedAssertions resolve_assertions(const Corpus& corpus, const AuthorLinkage& linkage,
                                      std::span<const CrossrefAssertion> assertions) {
  ResolvedAssertions out;
  out.rows.reserve(assertions.size());
  out.source_rows.reserve(assertions.size());
  for (std::uint32_t i = 0; i < assertions.size(); ++i) {
    const auto& a = assertions[i];
    auto p = corpus.find_publication(a.doi);
    if (!p || a.position >= corpus.publications()[*p].authors.size()) {
      ++out.orphans;
      continue;
    }
    ResolvedAssertion r;
    r.pub = *p;
    r.position = a.position;
    r.orcid = a.orcid;
    r.authenticated = a.authenticated;
    r.researcher = linkage.researcher_at(*p, a.position).value_or(kNoIndex);
    out.rows.push_back(r);
    out.source_rows.push_back(i);
  }
  return out;
}

std::vector<LinkedAuthor> link_crossref_authors(const Corpus& corpus, const AuthorLinkage& linkage,
                                                std::span<const CrossrefAssertion> assertions) {
  auto resolved = resolve_assertions(corpus, linkage, assertions);
  std::unordered_map<std::uint64_t, const ResolvedAssertion*> at;
  at.reserve(resolved.rows.size());
  for (const auto& r : resolved.rows)
    at.emplace((static_cast<std::uint64_t>(r.pub) << 32) | r.position, &r);

  std::vector<LinkedAuthor> out;
  out.reserve(linkage.mentions());
  auto pubs = corpus.publications();
  auto researchers = corpus.researchers();
  for (PubIdx p = 0; p < pubs.size(); ++p) {
    for (const auto& m : pubs[p].authors) {
      LinkedAuthor row;
      row.doi = pubs[p].doi;
      row.position = m.position;
      if (auto r = linkage.researcher_at(p, m.position)) row.researcher_id = researchers[*r].researcher_id;
      if (auto it = at.find((static_cast<std::uint64_t>(p) << 32) | m.position); it != at.end()) {
        row.orcid_crossref = it->second->orcid;
        row.authenticated = it->second->authenticated;
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

const char* source_name(Source s) noexcept {
  return s == Source::Crossref ? "crossref" : "orcid-registry";
}

std::vector<UnifiedAssertion> link_orcid_works(const Corpus& corpus) {
  std::vector<UnifiedAssertion> out;
  for (const auto& prof : corpus.profiles()) {
    for (const auto& d : prof.work_dois) {
      if (!corpus.find_publication(d)) continue;
      UnifiedAssertion u;
      u.doi = d;
      u.orcid = prof.orcid;
      u.source = Source::OrcidRegistry;
      u.authenticated = true;
      out.push_back(std::move(u));
    }
  }
  return out;
}

namespace {

bool lists(const Corpus& corpus, ResIdx r, PubIdx p) {
  auto pubs = corpus.researcher_publications(r);
  return std::binary_search(pubs.begin(), pubs.end(), p);
}

}  // namespace

std::vector<UnifiedAssertion> build_assertion_table(const Corpus& corpus,
                                                    const AuthorLinkage& linkage,
                                                    std::span<const UnifiedAssertion> registry_rows,
                                                    std::span<const CrossrefAssertion> repaired_crossref) {
  auto researchers = corpus.researchers();
  std::vector<UnifiedAssertion> out;
  out.reserve(registry_rows.size() + repaired_crossref.size());

  // ORCID -> distinct researchers it is linked to through Crossref rows.
  std::unordered_map<OrcidId, std::vector<ResIdx>> crossref_links;
  auto resolved = resolve_assertions(corpus, linkage, repaired_crossref);
  for (const auto& r : resolved.rows) {
    UnifiedAssertion u;
    u.doi = corpus.publications()[r.pub].doi;
    u.position = r.position;
    u.orcid = r.orcid;
    u.source = Source::Crossref;
    u.authenticated = r.authenticated;
    if (r.researcher != kNoIndex) {
      u.researcher_id = researchers[r.researcher].researcher_id;
      auto& v = crossref_links[r.orcid];
      if (std::find(v.begin(), v.end(), r.researcher) == v.end()) v.push_back(r.researcher);
    }
    out.push_back(std::move(u));
  }

  for (const auto& reg : registry_rows) {
    auto p = corpus.find_publication(reg.doi);
    if (!p) continue;
    UnifiedAssertion u = reg;
    u.source = Source::OrcidRegistry;
    u.position.reset();
    u.researcher_id.reset();
    std::optional<ResIdx> owner = corpus.registry_owner(reg.orcid);
    if (!owner) {
      auto it = crossref_links.find(reg.orcid);
      if (it != crossref_links.end() && it->second.size() == 1) owner = it->second.front();
    }
    if (owner && lists(corpus, *owner, *p)) u.researcher_id = researchers[*owner].researcher_id;
    out.push_back(std::move(u));
  }

  std::sort(out.begin(), out.end(), [](const UnifiedAssertion& a, const UnifiedAssertion& b) {
    if (a.doi != b.doi) return a.doi < b.doi;
    return std::make_tuple(a.source, a.orcid.packed(), a.position.value_or(0)) <
           std::make_tuple(b.source, b.orcid.packed(), b.position.value_or(0));
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) {
                          return a.doi == b.doi && a.source == b.source && a.orcid == b.orcid;
                        }),
            out.end());
  return out;
}

csv::Table linked_authors_table(std::span<const LinkedAuthor> rows) {
  csv::Table t;
  t.header = {"doi", "position", "researcher_id", "orcid_crossref", "authenticated"};
  for (const auto& r : rows) {
    t.rows.push_back({r.doi.str(), std::to_string(r.position), r.researcher_id.value_or(""),
                      r.orcid_crossref ? r.orcid_crossref->str() : "",
                      r.authenticated ? (*r.authenticated ? "true" : "false") : ""});
  }
  return t;
}

}  // namespace orcidlink::linkage
