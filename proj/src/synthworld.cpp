#include "orcidlink/synthworld.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "orcidlink/csv.hpp"
#include "orcidlink/ingest.hpp"
#include "orcidlink/names.hpp"
#include "orcidlink/similarity.hpp"

namespace orcidlink::synth {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- Rng

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001B3ull;
  return h;
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::string_view name) {
  std::uint64_t state = seed ^ fnv1a(name);
  splitmix64(state);
  return Rng(splitmix64(state));
}

std::uint64_t Rng::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection: exact and portable.
  std::uint64_t x = next();
  auto m = static_cast<unsigned __int128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      x = next();
      m = static_cast<unsigned __int128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

int Rng::between(int lo, int hi) {
  return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Rng::weighted(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += std::max(w, 0.0);
  double u = uniform() * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last = i;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return last;
}

// ---------------------------------------------------------------- names

const char* class_name(NameClass c) noexcept {
  switch (c) {
    case NameClass::None: return "none";
    case NameClass::MarriedName: return "married_name";
    case NameClass::ShortName: return "short_name";
    case NameClass::Transliteration: return "transliteration";
  }
  return "?";
}

std::optional<NameClass> parse_class(std::string_view text) noexcept {
  for (auto c : {NameClass::None, NameClass::MarriedName, NameClass::ShortName, NameClass::Transliteration})
    if (text == class_name(c)) return c;
  return std::nullopt;
}

namespace {

constexpr std::string_view kOnsets[] = {"b",  "c",  "d",  "f",  "g",  "h",  "j",  "k",  "l",  "m",
                                        "n",  "p",  "r",  "s",  "t",  "v",  "w",  "z",  "br", "ch",
                                        "dr", "gr", "kr", "pl", "sh", "st", "tr", "zh", "kh", "ts"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u", "ya", "yu", "ai", "ou", "ei"};
constexpr std::string_view kCodas[] = {"", "", "", "", "n", "r", "s", "l", "m", "t", "nd", "rk", "x", "q"};

std::string syllables(Rng& rng, int lo, int hi) {
  std::string out;
  int n = rng.between(lo, hi);
  for (int i = 0; i < n; ++i) {
    out += kOnsets[rng.below(std::size(kOnsets))];
    out += kVowels[rng.below(std::size(kVowels))];
    out += kCodas[rng.below(std::size(kCodas))];
  }
  out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

constexpr TransliterationPair kTranslit[] = {
    {"shch", "щ", "Щ"}, {"zh", "ж", "Ж"}, {"kh", "х", "Х"}, {"ts", "ц", "Ц"}, {"ch", "ч", "Ч"},
    {"sh", "ш", "Ш"},   {"yu", "ю", "Ю"}, {"ya", "я", "Я"}, {"a", "а", "А"},  {"b", "б", "Б"},
    {"c", "к", "К"},    {"d", "д", "Д"},  {"e", "е", "Е"},  {"f", "ф", "Ф"},  {"g", "г", "Г"},
    {"h", "г", "Г"},    {"i", "и", "И"},  {"j", "й", "Й"},  {"k", "к", "К"},  {"l", "л", "Л"},
    {"m", "м", "М"},    {"n", "н", "Н"},  {"o", "о", "О"},  {"p", "п", "П"},  {"q", "к", "К"},
    {"r", "р", "Р"},    {"s", "с", "С"},  {"t", "т", "Т"},  {"u", "у", "У"},  {"v", "в", "В"},
    {"w", "в", "В"},    {"x", "кс", "Кс"}, {"y", "ы", "Ы"}, {"z", "з", "З"},
};

char lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

std::string NameGenerator::given(Rng& rng) const { return syllables(rng, 2, 3); }
std::string NameGenerator::family(Rng& rng) const { return syllables(rng, 2, 4); }

std::span<const TransliterationPair> transliteration_table() noexcept { return kTranslit; }

std::string transliterate(std::string_view latin) {
  std::string out;
  std::size_t i = 0;
  while (i < latin.size()) {
    const TransliterationPair* hit = nullptr;
    for (const auto& pair : kTranslit) {
      if (i + pair.latin.size() > latin.size()) continue;
      bool match = true;
      for (std::size_t k = 0; k < pair.latin.size() && match; ++k)
        match = lower_ascii(latin[i + k]) == pair.latin[k];
      if (match) {
        hit = &pair;
        break;
      }
    }
    if (!hit) {
      out.push_back(latin[i++]);
      continue;
    }
    bool upper = latin[i] >= 'A' && latin[i] <= 'Z';
    out += upper ? hit->upper : hit->lower;
    i += hit->latin.size();
  }
  return out;
}

NameVariant perturb_name(const PersonName& name, NameClass kind, Rng& rng, const NameGenerator& pool) {
  NameVariant v{name, name};
  switch (kind) {
    case NameClass::None: break;
    case NameClass::MarriedName: {
      std::string family;
      do family = pool.family(rng);
      while (names::normalize(family) == names::normalize(name.family));
      v.profile.family = std::move(family);
      break;
    }
    case NameClass::ShortName: {
      std::size_t keep = 1 + rng.below(2);
      v.published.given = name.given.substr(0, std::min(keep, name.given.size()));
      break;
    }
    case NameClass::Transliteration:
      v.profile.given = transliterate(name.given);
      v.profile.family = transliterate(name.family);
      break;
  }
  return v;
}

// ---------------------------------------------------------------- config

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_rate(double r, const char* name) {
  require(r >= 0.0 && r <= 1.0, std::string(name) + " must be in [0, 1]");
}

}  // namespace

void validate(const SynthConfig& c) {
  require(c.n_researchers > 0, "n_researchers must be > 0");
  require(c.n_papers > 0, "n_papers must be > 0");
  const auto& a = c.authors_per_paper;
  require(a.min >= 1, "authors_per_paper.min must be >= 1");
  require(a.min <= a.max, "authors_per_paper.min must be <= max");
  require(a.mean >= a.min && a.mean <= a.max, "authors_per_paper.mean must lie in [min, max]");
  require(a.max <= c.n_researchers, "authors_per_paper.max (" + std::to_string(a.max) +
                                        ") exceeds n_researchers (" + std::to_string(c.n_researchers) + ")");
  require(!c.countries.empty(), "countries must not be empty");
  for (const auto& [code, w] : c.countries) {
    require(is_iso_country_code(code), "country '" + code + "' is not an ISO 3166-1 alpha-2 code");
    require(w > 0.0, "country weights must be > 0");
  }
  require(!c.for_codes.empty(), "for_codes must not be empty");
  for (const auto& [code, w] : c.for_codes) {
    require(is_for_code(code), "for code '" + code + "' is not two digits");
    require(w > 0.0, "for_code weights must be > 0");
  }
  require(c.n_publishers > 0, "n_publishers must be > 0");
  require(c.journals_per_publisher > 0, "journals_per_publisher must be > 0");
  require(c.n_funders > 0, "n_funders must be > 0");
  require(c.year_start <= c.year_end, "year_start must be <= year_end");
  require(c.year_start >= 1903 && c.year_end <= 2100, "years must lie in [1903, 2100]");
  require_rate(c.orcid_ownership_rate, "orcid_ownership_rate");
  require_rate(c.crossref_assertion_rate, "crossref_assertion_rate");
  require_rate(c.authenticated_rate, "authenticated_rate");
  require_rate(c.shuffle_rate, "shuffle_rate");
  require_rate(c.sync_probability, "sync_probability");
  require_rate(c.manual_work_rate, "manual_work_rate");
  require_rate(c.perturbation.married_name, "perturbation.married_name");
  require_rate(c.perturbation.short_name, "perturbation.short_name");
  require_rate(c.perturbation.transliteration, "perturbation.transliteration");
  require(c.perturbation.married_name + c.perturbation.short_name + c.perturbation.transliteration <= 1.0,
          "perturbation rates must sum to <= 1");
  require_rate(c.registry_coverage, "registry_coverage");
  require_rate(c.confusable_rate, "confusable_rate");
  require(c.max_name_similarity > 0.0, "max_name_similarity must be > 0");
}

ordered_json to_json(const SynthConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["n_researchers"] = c.n_researchers;
  j["n_papers"] = c.n_papers;
  j["authors_per_paper"] = {{"min", c.authors_per_paper.min},
                            {"max", c.authors_per_paper.max},
                            {"mean", c.authors_per_paper.mean}};
  ordered_json countries = ordered_json::object();
  for (const auto& [k, w] : c.countries) countries[k] = w;
  j["countries"] = countries;
  j["n_publishers"] = c.n_publishers;
  j["journals_per_publisher"] = c.journals_per_publisher;
  ordered_json codes = ordered_json::object();
  for (const auto& [k, w] : c.for_codes) codes[k] = w;
  j["for_codes"] = codes;
  j["year_start"] = c.year_start;
  j["year_end"] = c.year_end;
  j["orcid_ownership_rate"] = c.orcid_ownership_rate;
  j["crossref_assertion_rate"] = c.crossref_assertion_rate;
  j["authenticated_rate"] = c.authenticated_rate;
  j["shuffle_rate"] = c.shuffle_rate;
  j["sync_probability"] = c.sync_probability;
  j["manual_work_rate"] = c.manual_work_rate;
  j["perturbation"] = {{"married_name", c.perturbation.married_name},
                       {"short_name", c.perturbation.short_name},
                       {"transliteration", c.perturbation.transliteration}};
  j["registry_coverage"] = c.registry_coverage;
  j["max_name_similarity"] = c.max_name_similarity;
  j["confusable_rate"] = c.confusable_rate;
  j["n_funders"] = c.n_funders;
  return j;
}

// ---------------------------------------------------------------- truth

std::optional<std::uint32_t> GroundTruth::person_at(const Doi& doi, std::uint32_t position) const {
  auto it = std::lower_bound(authorships.begin(), authorships.end(), std::pair{&doi, position},
                             [](const AuthorshipTruth& a, const auto& key) {
                               if (a.doi != *key.first) return a.doi < *key.first;
                               return a.position < key.second;
                             });
  if (it == authorships.end() || it->doi != doi || it->position != position) return std::nullopt;
  return it->person;
}

std::optional<std::uint32_t> GroundTruth::person_of(OrcidId orcid) const {
  for (std::uint32_t i = 0; i < people.size(); ++i)
    if (people[i].orcid == orcid) return i;
  return std::nullopt;
}

// ---------------------------------------------------------------- generation

namespace {

struct Person {
  PersonName base;
  NameVariant names;
  NameClass cls = NameClass::None;
  std::string country;
  std::vector<std::string> funders;
  bool covered = false;
  std::optional<OrcidId> orcid;
};

std::string numbered(const char* prefix, unsigned value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*u", prefix, width, value);
  return buf;
}

// One-letter variant of an existing given name (never the first letter).
PersonName confusable_of(const PersonName& n, Rng& rng) {
  PersonName out = n;
  if (out.given.size() < 2) {
    out.given += static_cast<char>('a' + rng.below(26));
    return out;
  }
  std::size_t at = 1 + rng.below(out.given.size() - 1);
  char c;
  do c = static_cast<char>('a' + rng.below(26));
  while (c == out.given[at]);
  out.given[at] = c;
  return out;
}

std::vector<PersonName> draw_base_names(const SynthConfig& config, Rng& rng, const NameGenerator& gen) {
  std::vector<PersonName> out;
  out.reserve(config.n_researchers);
  std::unordered_set<std::string> seen;
  std::vector<std::u32string> dissimilar;  // names subject to the pairwise bound
  const bool bounded = config.max_name_similarity < 1.0;
  std::vector<double> ratios;
  constexpr int kMaxAttempts = 20000;

  for (unsigned i = 0; i < config.n_researchers; ++i) {
    if (!out.empty() && config.confusable_rate > 0.0 && rng.bernoulli(config.confusable_rate)) {
      PersonName n = confusable_of(out[rng.below(out.size())], rng);
      if (seen.insert(names::full_name(n.given, n.family)).second) {
        out.push_back(std::move(n));
        continue;
      }
    }
    for (int attempt = 0;; ++attempt) {
      if (attempt == kMaxAttempts)
        throw std::runtime_error("cannot draw " + std::to_string(config.n_researchers) +
                                 " names with pairwise similarity below " +
                                 std::to_string(config.max_name_similarity));
      PersonName n = gen.draw(rng);
      std::string key = names::full_name(n.given, n.family);
      if (seen.count(key)) continue;
      if (bounded) {
        auto code_points = names::to_code_points(key);
        similarity::RatioScorer scorer(code_points);
        std::vector<std::u32string_view> views(dissimilar.begin(), dissimilar.end());
        ratios.resize(views.size());
        scorer.ratios(views, ratios);
        if (std::any_of(ratios.begin(), ratios.end(), [&](double r) { return r >= config.max_name_similarity; }))
          continue;
        dissimilar.push_back(std::move(code_points));
      }
      seen.insert(std::move(key));
      out.push_back(std::move(n));
      break;
    }
  }
  return out;
}

unsigned draw_author_count(const AuthorCount& a, Rng& rng) {
  if (a.max == a.min) return a.min;
  double p = (a.mean - a.min) / static_cast<double>(a.max - a.min);
  unsigned k = a.min;
  for (unsigned i = 0; i < a.max - a.min; ++i) k += rng.bernoulli(p);
  return k;
}

std::vector<double> weights_of(const std::vector<std::pair<std::string, double>>& v) {
  std::vector<double> w;
  for (const auto& [k, x] : v) w.push_back(x);
  return w;
}

template <class T>
void sort_by_doi_position(std::vector<T>& v) {
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) {
    if (a.doi != b.doi) return a.doi < b.doi;
    return a.position < b.position;
  });
}

}  // namespace

std::vector<CrossrefAssertion> inject_shuffles(std::vector<CrossrefAssertion> assertions,
                                               const std::vector<PublicationRecord>& publications,
                                               double rate, Rng& rng, std::vector<ShuffleTruth>& shuffles) {
  std::unordered_map<std::string_view, std::size_t> width;
  width.reserve(publications.size());
  for (const auto& p : publications) width.emplace(p.doi.str(), p.authors.size());

  sort_by_doi_position(assertions);
  std::vector<std::uint32_t> free;
  std::vector<char> state;  // 0 free, 1 holds an assertion, 2 vacated
  for (std::size_t lo = 0; lo < assertions.size();) {
    std::size_t hi = lo;
    while (hi < assertions.size() && assertions[hi].doi == assertions[lo].doi) ++hi;
    auto it = width.find(assertions[lo].doi.str());
    if (it != width.end()) {
      state.assign(it->second, 0);
      for (std::size_t i = lo; i < hi; ++i)
        if (assertions[i].position < state.size()) state[assertions[i].position] = 1;
      for (std::size_t i = lo; i < hi; ++i) {
        auto& a = assertions[i];
        if (a.position >= state.size()) continue;
        free.clear();
        for (std::uint32_t pos = 0; pos < state.size(); ++pos)
          if (state[pos] == 0) free.push_back(pos);
        if (free.empty() || !rng.bernoulli(rate)) continue;
        std::uint32_t to = free[rng.below(free.size())];
        state[a.position] = 2;
        state[to] = 1;
        shuffles.push_back({a.doi, a.orcid, a.position, to});
        a.position = to;
      }
    }
    lo = hi;
  }
  sort_by_doi_position(assertions);
  std::sort(shuffles.begin(), shuffles.end(), [](const ShuffleTruth& a, const ShuffleTruth& b) {
    if (a.doi != b.doi) return a.doi < b.doi;
    return a.to < b.to;
  });
  return assertions;
}

World generate_world(const SynthConfig& config) {
  validate(config);
  World world;
  world.config = config;
  const NameGenerator gen;

  Rng name_rng = Rng::stream(config.seed, "names");
  Rng people_rng = Rng::stream(config.seed, "people");
  Rng paper_rng = Rng::stream(config.seed, "papers");
  Rng author_rng = Rng::stream(config.seed, "authors");
  Rng assertion_rng = Rng::stream(config.seed, "assertions");
  Rng work_rng = Rng::stream(config.seed, "works");
  Rng shuffle_rng = Rng::stream(config.seed, "shuffles");
  Rng profile_rng = Rng::stream(config.seed, "profiles");

  // People.
  auto base = draw_base_names(config, name_rng, gen);
  const auto country_w = weights_of(config.countries);
  const auto& pr = config.perturbation;
  std::vector<Person> people(config.n_researchers);
  std::unordered_set<std::uint64_t> payloads;
  for (unsigned i = 0; i < config.n_researchers; ++i) {
    Person& p = people[i];
    p.base = base[i];
    p.country = config.countries[people_rng.weighted(country_w)].first;
    double u = people_rng.uniform();
    p.cls = u < pr.married_name                                      ? NameClass::MarriedName
            : u < pr.married_name + pr.short_name                    ? NameClass::ShortName
            : u < pr.married_name + pr.short_name + pr.transliteration ? NameClass::Transliteration
                                                                     : NameClass::None;
    p.covered = people_rng.bernoulli(config.registry_coverage);
    if (people_rng.bernoulli(config.orcid_ownership_rate)) {
      std::uint64_t payload;
      do payload = 10'000'000 + people_rng.below(30'000'000);
      while (!payloads.insert(payload).second);
      p.orcid = OrcidId::from_payload(payload);
    }
    std::set<std::string> funders;
    for (auto k = people_rng.below(3); k > 0; --k)
      funders.insert(numbered("F", static_cast<unsigned>(1 + people_rng.below(config.n_funders)), 3));
    p.funders.assign(funders.begin(), funders.end());
    p.names = perturb_name(p.base, p.cls, name_rng, gen);
  }

  // Publications and authorships.
  const auto code_w = weights_of(config.for_codes);
  std::vector<std::vector<std::uint32_t>> person_papers(config.n_researchers);
  world.publications.reserve(config.n_papers);
  std::vector<std::uint32_t> chosen;
  for (unsigned i = 0; i < config.n_papers; ++i) {
    PublicationRecord pub;
    pub.doi = *Doi::parse(numbered("10.55555/sw.", i, 7));
    pub.year = paper_rng.between(config.year_start, config.year_end);
    unsigned publisher = static_cast<unsigned>(1 + paper_rng.below(config.n_publishers));
    unsigned journal = static_cast<unsigned>(1 + paper_rng.below(config.journals_per_publisher));
    pub.publisher_id = numbered("P", publisher, 2);
    pub.journal_id = pub.publisher_id + numbered("-J", journal, 2);
    std::set<std::string> codes{config.for_codes[paper_rng.weighted(code_w)].first};
    if (paper_rng.bernoulli(0.3)) codes.insert(config.for_codes[paper_rng.weighted(code_w)].first);
    pub.for_codes.assign(codes.begin(), codes.end());

    unsigned k = draw_author_count(config.authors_per_paper, author_rng);
    chosen.clear();
    while (chosen.size() < k) {
      auto who = static_cast<std::uint32_t>(author_rng.below(config.n_researchers));
      if (std::find(chosen.begin(), chosen.end(), who) == chosen.end()) chosen.push_back(who);
    }
    for (std::uint32_t pos = 0; pos < k; ++pos) {
      const auto& name = people[chosen[pos]].names.published;
      pub.authors.push_back({pos, name.given, name.family});
      world.truth.authorships.push_back({pub.doi, pos, chosen[pos]});
      person_papers[chosen[pos]].push_back(i);
    }
    world.publications.push_back(std::move(pub));
  }

  // Crossref assertions and ORCID works (before shuffling).
  std::vector<std::set<Doi>> works(config.n_researchers);
  std::vector<CrossrefAssertion> assertions;
  for (const auto& a : world.truth.authorships) {
    const Person& p = people[a.person];
    if (!p.orcid) continue;
    if (assertion_rng.bernoulli(config.crossref_assertion_rate)) {
      assertions.push_back({a.doi, a.position, *p.orcid, assertion_rng.bernoulli(config.authenticated_rate)});
      bool synced = work_rng.bernoulli(config.sync_probability);
      world.truth.syncs.push_back({a.doi, *p.orcid, synced});
      if (synced) works[a.person].insert(a.doi);
    } else if (work_rng.bernoulli(config.manual_work_rate)) {
      works[a.person].insert(a.doi);
    }
  }
  world.crossref =
      inject_shuffles(std::move(assertions), world.publications, config.shuffle_rate, shuffle_rng,
                      world.truth.shuffles);

  // Profiles and registry records.
  for (unsigned i = 0; i < config.n_researchers; ++i) {
    const Person& p = people[i];
    PersonTruth t;
    t.researcher_id = numbered("R", i, 6);
    t.name_class = p.cls;
    t.covered = p.covered;
    t.orcid = p.orcid;
    world.truth.people.push_back(t);

    if (p.orcid) {
      OrcidProfile prof;
      prof.orcid = *p.orcid;
      prof.given = p.names.profile.given;
      prof.family = p.names.profile.family;
      int y = profile_rng.between(config.year_start - 3, config.year_end);
      auto m = static_cast<unsigned>(profile_rng.between(1, 12));
      auto d = static_cast<unsigned>(profile_rng.between(1, 28));
      prof.created = std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d};
      prof.work_dois.assign(works[i].begin(), works[i].end());
      world.profiles.push_back(std::move(prof));
    }
    if (p.covered) {
      ResearcherRecord r;
      r.researcher_id = t.researcher_id;
      r.given = p.names.published.given;
      r.family = p.names.published.family;
      r.country = p.country;
      // The registry matches an ORCID to a researcher only when the names agree.
      if (p.orcid && p.cls == NameClass::None) r.orcid = p.orcid;
      for (auto paper : person_papers[i]) r.publication_dois.push_back(world.publications[paper].doi);
      std::sort(r.publication_dois.begin(), r.publication_dois.end());
      r.funder_ids = p.funders;
      world.researchers.push_back(std::move(r));
    }
  }
  std::sort(world.profiles.begin(), world.profiles.end(),
            [](const OrcidProfile& a, const OrcidProfile& b) { return a.orcid < b.orcid; });
  return world;
}

// ---------------------------------------------------------------- emit

void write_truth(const GroundTruth& truth, std::ostream& out) {
  for (const auto& p : truth.people) {
    ordered_json j;
    j["type"] = "person";
    j["researcher_id"] = p.researcher_id;
    j["class"] = class_name(p.name_class);
    j["covered"] = p.covered;
    j["orcid"] = p.orcid ? ordered_json(p.orcid->str()) : ordered_json(nullptr);
    out << j.dump() << '\n';
  }
  for (const auto& a : truth.authorships) {
    ordered_json j;
    j["type"] = "authorship";
    j["doi"] = a.doi.str();
    j["position"] = a.position;
    j["researcher_id"] = truth.people.at(a.person).researcher_id;
    out << j.dump() << '\n';
  }
  for (const auto& s : truth.shuffles) {
    ordered_json j;
    j["type"] = "shuffle";
    j["doi"] = s.doi.str();
    j["orcid"] = s.orcid.str();
    j["from"] = s.from;
    j["to"] = s.to;
    out << j.dump() << '\n';
  }
  for (const auto& s : truth.syncs) {
    ordered_json j;
    j["type"] = "sync";
    j["doi"] = s.doi.str();
    j["orcid"] = s.orcid.str();
    j["synced"] = s.synced;
    out << j.dump() << '\n';
  }
}

GroundTruth read_truth(std::istream& in) {
  GroundTruth t;
  std::unordered_map<std::string, std::uint32_t> person_index;
  std::string line;
  std::size_t n = 0;
  auto fail = [&](const std::string& why) {
    throw InputError("truth line " + std::to_string(n) + ": " + why);
  };
  auto doi_of = [&](const json& j) {
    auto d = Doi::parse(j.at("doi").get<std::string>());
    if (!d) fail("invalid doi");
    return *d;
  };
  auto orcid_of = [&](const json& v) {
    auto o = OrcidId::parse(v.get<std::string>());
    if (!o) fail("invalid orcid");
    return *o;
  };
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
    try {
      const auto type = j.at("type").get<std::string>();
      if (type == "person") {
        PersonTruth p;
        p.researcher_id = j.at("researcher_id").get<std::string>();
        auto cls = parse_class(j.at("class").get<std::string>());
        if (!cls) fail("unknown class");
        p.name_class = *cls;
        p.covered = j.at("covered").get<bool>();
        if (!j.at("orcid").is_null()) p.orcid = orcid_of(j.at("orcid"));
        person_index.emplace(p.researcher_id, static_cast<std::uint32_t>(t.people.size()));
        t.people.push_back(std::move(p));
      } else if (type == "authorship") {
        auto it = person_index.find(j.at("researcher_id").get<std::string>());
        if (it == person_index.end()) fail("authorship before its person");
        t.authorships.push_back({doi_of(j), j.at("position").get<std::uint32_t>(), it->second});
      } else if (type == "shuffle") {
        t.shuffles.push_back(
            {doi_of(j), orcid_of(j.at("orcid")), j.at("from").get<std::uint32_t>(), j.at("to").get<std::uint32_t>()});
      } else if (type == "sync") {
        t.syncs.push_back({doi_of(j), orcid_of(j.at("orcid")), j.at("synced").get<bool>()});
      } else {
        fail("unknown type '" + type + "'");
      }
    } catch (const json::exception& e) {
      fail(e.what());
    }
  }
  sort_by_doi_position(t.authorships);
  return t;
}

EmittedFiles emit_world(const World& world, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  EmittedFiles f{dir / "publications.ndjson", dir / "crossref.ndjson",    dir / "orcid_profiles.ndjson",
                 dir / "researchers.ndjson",  dir / "income_bands.csv",    dir / "truth.ndjson",
                 dir / "pipeline.toml"};
  auto dump = [](const auto& rows) {
    std::string s;
    for (const auto& r : rows) {
      s += ingest::to_ndjson(r);
      s.push_back('\n');
    }
    return s;
  };
  csv::write_atomic(f.publications, dump(world.publications));
  csv::write_atomic(f.crossref, dump(world.crossref));
  csv::write_atomic(f.profiles, dump(world.profiles));
  csv::write_atomic(f.researchers, dump(world.researchers));

  csv::Table bands;
  bands.header = {"country", "band"};
  for (const auto& [country, band] : world.config.income_bands) bands.rows.push_back({country, band});
  csv::emit_csv(bands, f.income_bands);

  std::ostringstream truth;
  write_truth(world.truth, truth);
  csv::write_atomic(f.truth, truth.str());

  const auto& c = world.config;
  std::ostringstream toml;
  toml << "# Generated by orcidlink synth (seed " << c.seed << ")\n"
       << "[inputs]\n"
       << "publications = \"publications.ndjson\"\n"
       << "crossref_assertions = \"crossref.ndjson\"\n"
       << "orcid_profiles = \"orcid_profiles.ndjson\"\n"
       << "researchers = \"researchers.ndjson\"\n"
       << "income_bands = \"income_bands.csv\"\n"
       << "as_of = \"" << c.year_end + 1 << "-06-30\"\n\n"
       << "[output]\n"
       << "dir = \"out\"\n\n"
       << "[metrics]\n"
       << "report_years = \"" << std::max(c.year_start, c.year_end - 4) << ':' << c.year_end << "\"\n"
       << "publisher_year = " << c.year_end << "\n";
  csv::write_atomic(f.config, toml.str());
  return f;
}

// ---------------------------------------------------------------- scoring

RepairScore score_repair(const GroundTruth& truth, std::span<const quality::RepairOutcome> outcomes) {
  auto key = [](const Doi& d, std::uint32_t pos) { return d.str() + '#' + std::to_string(pos); };
  std::unordered_map<std::string, const ShuffleTruth*> shuffled;
  for (const auto& s : truth.shuffles) shuffled.emplace(key(s.doi, s.to), &s);
  std::unordered_map<std::string, const quality::RepairOutcome*> by_slot;
  for (const auto& o : outcomes) by_slot.emplace(key(o.doi, o.position), &o);
  std::unordered_map<OrcidId, std::uint32_t> owner;
  for (std::uint32_t i = 0; i < truth.people.size(); ++i)
    if (truth.people[i].orcid) owner.emplace(*truth.people[i].orcid, i);

  auto fixes = [](const quality::RepairOutcome& o, const ShuffleTruth& s) {
    return o.orcid == s.orcid &&
           (o.verdict == quality::Verdict::Drop ||
            (o.verdict == quality::Verdict::Reassign && o.new_position == s.from));
  };

  RepairScore score;
  for (const auto& o : outcomes) {
    if (o.verdict == quality::Verdict::Keep) continue;
    ++score.non_keep;
    auto it = shuffled.find(key(o.doi, o.position));
    if (it != shuffled.end() && fixes(o, *it->second)) ++score.correct_non_keep;
  }
  score.precision = score.non_keep ? static_cast<double>(score.correct_non_keep) / score.non_keep : 1.0;

  std::size_t caught = 0, repaired = 0;
  for (const auto& s : truth.shuffles) {
    auto ow = owner.find(s.orcid);
    if (ow == owner.end() || !truth.people[ow->second].covered) continue;
    auto& cls = score.by_class[class_name(truth.people[ow->second].name_class)];
    ++score.injected;
    ++cls.injected;
    auto it = by_slot.find(key(s.doi, s.to));
    if (it == by_slot.end() || !fixes(*it->second, s)) continue;
    ++caught;
    ++cls.caught;
    if (it->second->verdict == quality::Verdict::Reassign) {
      ++repaired;
      ++cls.repaired;
    }
  }
  auto ratio = [](std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / b : 0.0; };
  score.recall = ratio(caught, score.injected);
  score.repair_recall = ratio(repaired, score.injected);
  for (auto& [name, c] : score.by_class) {
    c.recall = ratio(c.caught, c.injected);
    c.repair_recall = ratio(c.repaired, c.injected);
  }
  return score;
}

ordered_json to_json(const RepairScore& s) {
  ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["repair_recall"] = s.repair_recall;
  j["injected"] = s.injected;
  j["non_keep"] = s.non_keep;
  j["correct_non_keep"] = s.correct_non_keep;
  ordered_json by_class = ordered_json::object();
  for (const auto& [name, c] : s.by_class)
    by_class[name] = {{"injected", c.injected},
                      {"caught", c.caught},
                      {"repaired", c.repaired},
                      {"recall", c.recall},
                      {"repair_recall", c.repair_recall}};
  j["by_class"] = by_class;
  return j;
}

}  // namespace orcidlink::synth
