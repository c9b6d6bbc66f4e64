#include "orcidlink/quality.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "orcidlink/ingest.hpp"
#include "orcidlink/names.hpp"
#include "orcidlink/parallel.hpp"
#include "orcidlink/similarity.hpp"

namespace orcidlink::quality {

namespace {

constexpr std::pair<std::uint8_t, const char*> kCriterionNames[] = {
    {kSelfCollab, "SELF_COLLAB"},
    {kMultiOrcidPerResearcher, "MULTI_ORCID_PER_RESEARCHER"},
    {kRegistryDisagrees, "REGISTRY_DISAGREES"},
    {kNoResearcherForOrcid, "NO_RESEARCHER_FOR_ORCID"},
};

std::uint64_t slot(PubIdx p, std::uint32_t position) {
  return (static_cast<std::uint64_t>(p) << 32) | position;
}

std::size_t sorted_intersection_size(std::span<const ResIdx> a, std::span<const ResIdx> b) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

template <class T>
void sort_by_key(std::vector<T>& v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
    if (a.doi != b.doi) return a.doi < b.doi;
    return a.position < b.position;
  });
}

std::string history_key(OrcidId orcid, const std::string& name) {
  std::string key = std::to_string(orcid.packed());
  key.push_back('\x1f');
  key += name;
  return key;
}

std::size_t code_point_count(const std::string& utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) n += (c & 0xC0) != 0x80;
  return n;
}

bool eligible_target(const NormalizedName& n, unsigned min_len) {
  auto ok = [min_len](const std::string& part) {
    return part.empty() || code_point_count(part) >= min_len;
  };
  return ok(n.given) && ok(n.family);
}

// Rules (a) and (b), plus the no-profile case. Returns nullopt when the
// assertion falls through to the rescue/drop rules.
std::optional<RepairOutcome> score_rules(const SuspectFlag& flag, const Corpus& corpus, PubIdx pub,
                                         const OrcidProfile* profile, const QualityConfig& config,
                                         double& best_out) {
  RepairOutcome out;
  out.doi = flag.doi;
  out.position = flag.position;
  out.orcid = flag.orcid;
  out.criteria = flag.criteria;
  if (!profile) {
    out.verdict = Verdict::Drop;
    out.reason = Reason::Unrecoverable;
    return out;
  }

  const auto& authors = corpus.publications()[pub].authors;
  std::vector<std::u32string> author_names;
  author_names.reserve(authors.size());
  for (std::uint32_t pos = 0; pos < authors.size(); ++pos)
    author_names.push_back(names::to_code_points(corpus.mention_name(pub, pos).full()));
  std::vector<std::u32string_view> views(author_names.begin(), author_names.end());
  std::vector<double> ratios(views.size());
  similarity::RatioScorer scorer(names::to_code_points(names::full_name(profile->given, profile->family)));
  scorer.ratios(views, ratios);

  const double asserted = ratios[flag.position];
  double best_other = -1.0;
  std::uint32_t best_pos = 0;
  std::size_t ties = 0;
  for (std::uint32_t pos = 0; pos < ratios.size(); ++pos) {
    if (pos == flag.position) continue;
    if (!eligible_target(corpus.mention_name(pub, pos), config.min_name_part_length)) continue;
    if (ratios[pos] > best_other) {
      best_other = ratios[pos];
      best_pos = pos;
      ties = 1;
    } else if (ratios[pos] == best_other) {
      ++ties;
    }
  }
  best_out = std::max(asserted, best_other);
  out.best_score = best_out;

  if (asserted >= config.keep_threshold) {
    out.verdict = Verdict::Keep;
    out.reason = Reason::ScoreKeep;
    return out;
  }
  if (best_other >= config.reassign_threshold) {
    if (ties == 1) {
      out.verdict = Verdict::Reassign;
      out.new_position = best_pos;
      out.reason = Reason::ScoreReassign;
    } else {
      out.verdict = Verdict::Drop;
      out.reason = Reason::Unrecoverable;
    }
    return out;
  }
  return std::nullopt;
}

RepairOutcome rescue_or_drop(const SuspectFlag& flag, const Corpus& corpus, PubIdx pub, double best,
                             const PublisherHistory& history, const QualityConfig& config) {
  RepairOutcome out;
  out.doi = flag.doi;
  out.position = flag.position;
  out.orcid = flag.orcid;
  out.criteria = flag.criteria;
  out.best_score = best;
  out.verdict = Verdict::Drop;
  out.reason = Reason::Unrecoverable;
  if (config.multi_publisher_rescue &&
      history.publishers(flag.orcid, corpus.mention_name(pub, flag.position).full()) >=
          config.rescue_min_publishers) {
    out.verdict = Verdict::Keep;
    out.reason = Reason::MultiPublisherRescue;
  }
  return out;
}

}  // namespace

std::string criteria_string(std::uint8_t criteria) {
  std::string out;
  for (auto [bit, name] : kCriterionNames) {
    if (!(criteria & bit)) continue;
    if (!out.empty()) out.push_back('|');
    out += name;
  }
  return out;
}

std::uint8_t parse_criteria(std::string_view text) {
  std::uint8_t out = 0;
  for (auto [bit, name] : kCriterionNames)
    if (text.find(name) != std::string_view::npos) out |= bit;
  return out;
}

const char* reason_name(Reason r) noexcept {
  switch (r) {
    case Reason::ScoreKeep: return "SCORE_KEEP";
    case Reason::ScoreReassign: return "SCORE_REASSIGN";
    case Reason::MultiPublisherRescue: return "MULTI_PUBLISHER_RESCUE";
    case Reason::Unrecoverable: return "UNRECOVERABLE";
  }
  return "?";
}

std::string verdict_string(const RepairOutcome& o) {
  switch (o.verdict) {
    case Verdict::Keep: return "KEEP";
    case Verdict::Drop: return "DROP";
    case Verdict::Reassign: return "REASSIGN(" + std::to_string(o.new_position) + ")";
  }
  return "?";
}

AssertionContext::AssertionContext(const Corpus& corpus, const linkage::AuthorLinkage& linkage,
                                   std::span<const CrossrefAssertion> assertions)
    : corpus_(&corpus),
      linkage_(&linkage),
      input_(assertions),
      resolved_(linkage::resolve_assertions(corpus, linkage, assertions)) {
  std::vector<std::pair<ResIdx, OrcidId>> pairs;
  by_slot_.reserve(resolved_.rows.size());
  for (std::uint32_t i = 0; i < resolved_.rows.size(); ++i) {
    const auto& r = resolved_.rows[i];
    by_slot_.emplace(slot(r.pub, r.position), i);
    if (r.researcher == kNoIndex) continue;
    auto& v = orcid_researchers_[r.orcid];
    if (std::find(v.begin(), v.end(), r.researcher) == v.end()) v.push_back(r.researcher);
    pairs.emplace_back(r.researcher, r.orcid);
  }
  for (auto& [o, v] : orcid_researchers_) std::sort(v.begin(), v.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  researcher_orcid_counts_.assign(corpus.researchers().size(), 0);
  for (const auto& [r, o] : pairs) ++researcher_orcid_counts_[r];
}

std::span<const ResIdx> AssertionContext::researchers_of(OrcidId o) const {
  auto it = orcid_researchers_.find(o);
  if (it == orcid_researchers_.end()) return {};
  return it->second;
}

std::size_t AssertionContext::orcid_count(ResIdx r) const { return researcher_orcid_counts_[r]; }

std::optional<std::uint32_t> AssertionContext::assertion_at(PubIdx p, std::uint32_t position) const {
  auto it = by_slot_.find(slot(p, position));
  if (it == by_slot_.end()) return std::nullopt;
  return it->second;
}

namespace {

bool is_self_collab(const AssertionContext& ctx, const linkage::ResolvedAssertion& r) {
  return sorted_intersection_size(ctx.researchers_of(r.orcid), ctx.linkage().linked_on(r.pub)) >= 2;
}

SuspectFlag make_flag(const AssertionContext& ctx, const linkage::ResolvedAssertion& r,
                      std::uint8_t criteria) {
  return SuspectFlag{ctx.corpus().publications()[r.pub].doi, r.position, r.orcid, criteria};
}

}  // namespace

std::vector<SuspectFlag> detect_self_collaboration(const AssertionContext& ctx) {
  std::vector<SuspectFlag> out;
  for (const auto& r : ctx.resolved().rows)
    if (is_self_collab(ctx, r)) out.push_back(make_flag(ctx, r, kSelfCollab));
  sort_by_key(out);
  return out;
}

std::vector<SuspectFlag> flag_suspects(const AssertionContext& ctx) {
  const Corpus& corpus = ctx.corpus();
  auto researchers = corpus.researchers();
  std::vector<SuspectFlag> out;
  for (const auto& r : ctx.resolved().rows) {
    std::uint8_t c = 0;
    if (is_self_collab(ctx, r)) c |= kSelfCollab;
    if (r.researcher != kNoIndex && ctx.orcid_count(r.researcher) >= 2) c |= kMultiOrcidPerResearcher;

    auto owner = corpus.registry_owner(r.orcid);
    bool disagrees = false;
    if (r.researcher != kNoIndex) {
      const auto& reg = researchers[r.researcher].orcid;
      disagrees = (reg && *reg != r.orcid) || (owner && *owner != r.researcher);
    } else if (owner) {
      disagrees = ctx.linkage().position_of(r.pub, *owner).has_value();
    }
    if (disagrees) c |= kRegistryDisagrees;
    if (corpus.registry_claims(r.orcid) == 0) c |= kNoResearcherForOrcid;

    if (c) out.push_back(make_flag(ctx, r, c));
  }
  sort_by_key(out);
  return out;
}

void PublisherHistory::add(OrcidId orcid, const std::string& name, const std::string& publisher_id) {
  auto& v = pairs_[history_key(orcid, name)];
  if (std::find(v.begin(), v.end(), publisher_id) == v.end()) v.push_back(publisher_id);
}

std::size_t PublisherHistory::publishers(OrcidId orcid, const std::string& name) const {
  auto it = pairs_.find(history_key(orcid, name));
  return it == pairs_.end() ? 0 : it->second.size();
}

RepairOutcome resolve_suspect(const SuspectFlag& flag, const Corpus& corpus, PubIdx pub,
                              const OrcidProfile* profile, const PublisherHistory& history,
                              const QualityConfig& config) {
  double best = 0.0;
  if (auto decided = score_rules(flag, corpus, pub, profile, config, best)) return *decided;
  return rescue_or_drop(flag, corpus, pub, best, history, config);
}

std::vector<RepairOutcome> resolve_all(const AssertionContext& ctx, std::span<const SuspectFlag> flags,
                                       const QualityConfig& config) {
  const Corpus& corpus = ctx.corpus();
  const auto& rows = ctx.resolved().rows;

  struct Pending {
    std::optional<RepairOutcome> decided;
    double best = 0.0;
    PubIdx pub = kNoIndex;
    std::uint32_t row = 0;
  };
  std::vector<Pending> pending(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    auto p = corpus.find_publication(flags[i].doi);
    if (!p) throw std::invalid_argument("flag refers to unknown doi " + flags[i].doi.str());
    auto row = ctx.assertion_at(*p, flags[i].position);
    if (!row) throw std::invalid_argument("flag refers to no assertion at " + flags[i].doi.str());
    pending[i].pub = *p;
    pending[i].row = *row;
  }
  parallel_for(flags.size(), config.workers, [&](std::size_t i) {
    auto& pd = pending[i];
    pd.decided = score_rules(flags[i], corpus, pd.pub, corpus.find_profile(flags[i].orcid), config, pd.best);
  });

  // Rows that leave their position under rules (a)/(b) do not count as
  // evidence for the rescue rule.
  std::vector<char> leaving(rows.size(), 0);
  for (const auto& pd : pending)
    if (pd.decided && pd.decided->verdict != Verdict::Keep) leaving[pd.row] = 1;

  PublisherHistory history;
  if (config.multi_publisher_rescue) {
    for (std::uint32_t i = 0; i < rows.size(); ++i) {
      if (leaving[i]) continue;
      const auto& r = rows[i];
      history.add(r.orcid, corpus.mention_name(r.pub, r.position).full(),
                  corpus.publications()[r.pub].publisher_id);
    }
  }

  std::vector<RepairOutcome> out;
  out.reserve(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const auto& pd = pending[i];
    out.push_back(pd.decided ? *pd.decided
                             : rescue_or_drop(flags[i], corpus, pd.pub, pd.best, history, config));
  }
  sort_by_key(out);
  return out;
}

RepairResult apply_repairs(const AssertionContext& ctx, std::vector<RepairOutcome> outcomes) {
  const Corpus& corpus = ctx.corpus();
  const auto& rows = ctx.resolved().rows;

  std::unordered_map<std::uint64_t, std::uint32_t> target_counts;
  std::vector<PubIdx> outcome_pub(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto p = corpus.find_publication(outcomes[i].doi);
    if (!p) throw std::invalid_argument("outcome refers to unknown doi " + outcomes[i].doi.str());
    outcome_pub[i] = *p;
    if (outcomes[i].verdict == Verdict::Reassign) ++target_counts[slot(*p, outcomes[i].new_position)];
  }
  std::unordered_map<std::uint64_t, std::size_t> outcome_at;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    outcome_at.emplace(slot(outcome_pub[i], o.position), i);
    if (o.verdict != Verdict::Reassign) continue;
    auto target = slot(outcome_pub[i], o.new_position);
    if (ctx.assertion_at(outcome_pub[i], o.new_position) || target_counts[target] > 1) {
      o.verdict = Verdict::Drop;
      o.reason = Reason::Unrecoverable;
      o.new_position = 0;
    }
  }

  RepairResult result;
  result.repaired.reserve(rows.size());
  for (std::uint32_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CrossrefAssertion a = ctx.input()[ctx.resolved().source_rows[i]];
    if (auto it = outcome_at.find(slot(r.pub, r.position)); it != outcome_at.end()) {
      const auto& o = outcomes[it->second];
      if (o.verdict == Verdict::Drop) continue;
      if (o.verdict == Verdict::Reassign) a.position = o.new_position;
    }
    result.repaired.push_back(std::move(a));
  }
  sort_by_key(result.repaired);

  auto& s = result.stats;
  s.total_assertions = rows.size();
  s.flagged = outcomes.size();
  for (const auto& o : outcomes) {
    switch (o.verdict) {
      case Verdict::Keep: ++s.kept; break;
      case Verdict::Reassign: ++s.reassigned; break;
      case Verdict::Drop: ++s.dropped; break;
    }
  }
  if (s.total_assertions) {
    s.pct_removed = 100.0 * static_cast<double>(s.dropped) / static_cast<double>(s.total_assertions);
    s.pct_reassigned = 100.0 * static_cast<double>(s.reassigned) / static_cast<double>(s.total_assertions);
  }
  result.outcomes = std::move(outcomes);
  sort_by_key(result.outcomes);
  return result;
}

ShuffleRateSeries estimate_shuffle_rate(const AssertionContext& ctx) {
  std::map<int, ShufflePoint> by_year;
  auto pubs = ctx.corpus().publications();
  for (const auto& r : ctx.resolved().rows) {
    auto& pt = by_year[pubs[r.pub].year];
    pt.year = pubs[r.pub].year;
    ++pt.total;
    if (is_self_collab(ctx, r)) ++pt.flagged;
  }
  ShuffleRateSeries out;
  for (auto& [y, pt] : by_year) {
    pt.rate = static_cast<double>(pt.flagged) / static_cast<double>(pt.total);
    out.push_back(pt);
  }
  return out;
}

ShufflePoint pooled_rate(const ShuffleRateSeries& series) {
  ShufflePoint p;
  for (const auto& s : series) {
    p.flagged += s.flagged;
    p.total += s.total;
  }
  p.rate = p.total ? static_cast<double>(p.flagged) / static_cast<double>(p.total) : 0.0;
  return p;
}

RepairResult repair(const Corpus& corpus, const linkage::AuthorLinkage& linkage,
                    std::span<const CrossrefAssertion> assertions, const QualityConfig& config) {
  AssertionContext ctx(corpus, linkage, assertions);
  auto flags = flag_suspects(ctx);
  return apply_repairs(ctx, resolve_all(ctx, flags, config));
}

csv::Table repair_report_table(std::span<const RepairOutcome> outcomes) {
  csv::Table t;
  t.header = {"doi", "position", "orcid", "criteria", "verdict", "score", "reason"};
  for (const auto& o : outcomes) {
    t.rows.push_back({o.doi.str(), std::to_string(o.position), o.orcid.str(), criteria_string(o.criteria),
                      verdict_string(o), o.best_score ? csv::format_fixed(*o.best_score, 6) : "",
                      reason_name(o.reason)});
  }
  return t;
}

std::vector<RepairOutcome> parse_repair_report(std::istream& in) {
  std::vector<csv::Row> rows;
  try {
    rows = csv::parse(in);
  } catch (const std::runtime_error& e) {
    throw InputError(std::string("repair report: ") + e.what());
  }
  const csv::Row header = {"doi", "position", "orcid", "criteria", "verdict", "score", "reason"};
  if (rows.empty() || rows.front() != header) throw InputError("repair report: unexpected header");
  std::vector<RepairOutcome> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    auto fail = [&](const std::string& why) {
      throw InputError("repair report line " + std::to_string(i + 1) + ": " + why);
    };
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != header.size()) fail("expected 7 fields");
    RepairOutcome o;
    auto doi = Doi::parse(r[0]);
    auto orcid = OrcidId::parse(r[2]);
    if (!doi) fail("invalid doi");
    if (!orcid) fail("invalid orcid");
    o.doi = *doi;
    o.orcid = *orcid;
    auto parse_uint = [&](std::string_view s) {
      std::uint32_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || s.empty()) fail("invalid position");
      return v;
    };
    o.position = parse_uint(r[1]);
    o.criteria = parse_criteria(r[3]);
    const std::string& v = r[4];
    if (v == "KEEP") {
      o.verdict = Verdict::Keep;
    } else if (v == "DROP") {
      o.verdict = Verdict::Drop;
    } else if (v.starts_with("REASSIGN(") && v.ends_with(")")) {
      o.verdict = Verdict::Reassign;
      o.new_position = parse_uint(std::string_view(v).substr(9, v.size() - 10));
    } else {
      fail("invalid verdict '" + v + "'");
    }
    if (!r[5].empty()) {
      char* end = nullptr;
      o.best_score = std::strtod(r[5].c_str(), &end);
      if (end != r[5].c_str() + r[5].size()) fail("invalid score");
    }
    bool known = false;
    for (auto reason : {Reason::ScoreKeep, Reason::ScoreReassign, Reason::MultiPublisherRescue, Reason::Unrecoverable})
      if (r[6] == reason_name(reason)) {
        o.reason = reason;
        known = true;
      }
    if (!known) fail("invalid reason '" + r[6] + "'");
    out.push_back(std::move(o));
  }
  return out;
}

csv::Table shuffle_rate_table(const ShuffleRateSeries& series) {
  csv::Table t;
  t.header = {"year", "flagged", "total", "rate"};
  for (const auto& p : series)
    t.rows.push_back({std::to_string(p.year), std::to_string(p.flagged), std::to_string(p.total),
                      csv::format_fixed(p.rate, 6)});
  return t;
}

}  // namespace orcidlink::quality
