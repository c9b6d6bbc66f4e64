#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "orcidlink/linkage.hpp"

using namespace orcidlink;
using namespace fixtures;

TEST(Corpus, DropsUnknownResearcherDois) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}})}, {},
           {researcher("R1", "Ann", "Ng", {"10.1/a", "10.1/missing"})});
  EXPECT_EQ(c.dropped_researcher_dois(), 1u);
  EXPECT_EQ(c.researcher_publications(0).size(), 1u);
  EXPECT_EQ(c.publication_listers(0).size(), 1u);
}

TEST(Corpus, RegistryOwnerRequiresSingleClaim) {
  Corpus c({}, {},
           {researcher("R1", "A", "B", {}, orcid(1)), researcher("R2", "C", "D", {}, orcid(2)),
            researcher("R3", "E", "F", {}, orcid(2))});
  EXPECT_EQ(c.registry_owner(orcid(1)), 0u);
  EXPECT_FALSE(c.registry_owner(orcid(2)));
  EXPECT_EQ(c.registry_claims(orcid(2)), 2u);
  EXPECT_EQ(c.registry_claims(orcid(3)), 0u);
}

TEST(AuthorLinkage, LinksUniqueNameMatchAmongListers) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Bo", "Li"}, {"Cy", "Ho"}})}, {},
           {researcher("R1", "ANN", "ng", {"10.1/a"}), researcher("R2", "Bo", "Li", {"10.1/a"}),
            researcher("R3", "Cy", "Ho", {})});
  auto l = linkage::AuthorLinkage::build(c);
  EXPECT_EQ(l.researcher_at(0, 0), 0u);
  EXPECT_EQ(l.researcher_at(0, 1), 1u);
  EXPECT_FALSE(l.researcher_at(0, 2));  // R3 does not list the DOI
  EXPECT_EQ(l.linked(), 2u);
  EXPECT_EQ(l.ambiguous(), 0u);
  EXPECT_EQ(l.position_of(0, 1), 1u);
  auto on = l.linked_on(0);
  EXPECT_EQ(std::vector<ResIdx>(on.begin(), on.end()), (std::vector<ResIdx>{0, 1}));
}

TEST(AuthorLinkage, AmbiguityLeavesMentionsUnlinked) {
  // Two listers with the same name, and one lister matching two mentions.
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Bo", "Li"}}),
            pub("10.1/b", 2015, {{"Cy", "Ho"}, {"Cy", "Ho"}})},
           {},
           {researcher("R1", "Ann", "Ng", {"10.1/a"}), researcher("R2", "Ann", "Ng", {"10.1/a"}),
            researcher("R3", "Cy", "Ho", {"10.1/b"})});
  auto l = linkage::AuthorLinkage::build(c);
  EXPECT_FALSE(l.researcher_at(0, 0));
  EXPECT_FALSE(l.researcher_at(1, 0));
  EXPECT_FALSE(l.researcher_at(1, 1));
  EXPECT_EQ(l.linked(), 0u);
  EXPECT_EQ(l.ambiguous(), 3u);
}

TEST(ResolveAssertions, CountsOrphans) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}})}, {}, {researcher("R1", "Ann", "Ng", {"10.1/a"})});
  auto l = linkage::AuthorLinkage::build(c);
  std::vector<CrossrefAssertion> a = {assertion("10.1/a", 0, orcid(1)), assertion("10.1/a", 3, orcid(1)),
                                      assertion("10.1/zz", 0, orcid(1))};
  auto r = linkage::resolve_assertions(c, l, a);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.orphans, 2u);
  EXPECT_EQ(r.rows[0].researcher, 0u);
  EXPECT_EQ(r.source_rows[0], 0u);
}

TEST(LinkCrossrefAuthors, OneRowPerMention) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Bo", "Li"}})}, {}, {researcher("R1", "Ann", "Ng", {"10.1/a"})});
  auto l = linkage::AuthorLinkage::build(c);
  std::vector<CrossrefAssertion> a = {assertion("10.1/a", 1, orcid(5), true)};
  auto rows = linkage::link_crossref_authors(c, l, a);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].researcher_id, "R1");
  EXPECT_FALSE(rows[0].orcid_crossref);
  EXPECT_FALSE(rows[1].researcher_id);
  EXPECT_EQ(rows[1].orcid_crossref, orcid(5));
  EXPECT_EQ(rows[1].authenticated, true);
  auto t = linkage::linked_authors_table(rows);
  EXPECT_EQ(t.rows.size(), 2u);
}

TEST(AssertionTable, UnionDeduplicatesAndAttributes) {
  Corpus c({pub("10.1/a", 2015, {{"Ann", "Ng"}, {"Bo", "Li"}}), pub("10.1/b", 2016, {{"Bo", "Li"}})},
           {profile(orcid(1), "Ann", "Ng", {"10.1/a", "10.1/zz"}), profile(orcid(2), "Bo", "Li", {"10.1/a", "10.1/b"})},
           {researcher("R1", "Ann", "Ng", {"10.1/a"}, orcid(1)), researcher("R2", "Bo", "Li", {"10.1/a", "10.1/b"})});
  auto l = linkage::AuthorLinkage::build(c);
  auto registry = linkage::link_orcid_works(c);
  EXPECT_EQ(registry.size(), 3u);  // 10.1/zz is not a known publication
  for (const auto& u : registry) EXPECT_TRUE(u.authenticated);
  std::vector<CrossrefAssertion> cr = {assertion("10.1/a", 0, orcid(1)), assertion("10.1/a", 1, orcid(2))};
  auto table = linkage::build_assertion_table(c, l, registry, cr);
  ASSERT_EQ(table.size(), 5u);
  for (const auto& u : table) {
    ASSERT_TRUE(u.researcher_id) << u.doi.str();
    if (u.orcid == orcid(1)) {
      EXPECT_EQ(*u.researcher_id, "R1");
    }
    // R2 has no registry ORCID; their registry rows are attributed through
    // the Crossref link.
    if (u.orcid == orcid(2)) {
      EXPECT_EQ(*u.researcher_id, "R2");
    }
  }
  EXPECT_TRUE(std::is_sorted(table.begin(), table.end(), [](const auto& x, const auto& y) {
    return std::tie(x.doi, x.source, x.orcid) < std::tie(y.doi, y.source, y.orcid);
  }));
  // Duplicated inputs do not create duplicate rows.
  auto doubled = registry;
  doubled.insert(doubled.end(), registry.begin(), registry.end());
  EXPECT_EQ(linkage::build_assertion_table(c, l, doubled, cr), table);
}

TEST(AuthorLinkage, InvariantUnderRegistryOrder) {
  synth::SynthConfig cfg;
  cfg.n_researchers = 120;
  cfg.n_papers = 300;
  auto w = synth::generate_world(cfg);
  Corpus a(w.publications, w.profiles, w.researchers);
  auto shuffled = w.researchers;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  Corpus b(w.publications, w.profiles, shuffled);
  auto la = linkage::AuthorLinkage::build(a);
  auto lb = linkage::AuthorLinkage::build(b);
  EXPECT_EQ(la.linked(), lb.linked());
  for (PubIdx p = 0; p < w.publications.size(); ++p) {
    for (std::uint32_t pos = 0; pos < w.publications[p].authors.size(); ++pos) {
      auto ra = la.researcher_at(p, pos), rb = lb.researcher_at(p, pos);
      ASSERT_EQ(ra.has_value(), rb.has_value());
      if (ra) {
        EXPECT_EQ(a.researchers()[*ra].researcher_id, b.researchers()[*rb].researcher_id);
      }
    }
  }
}
