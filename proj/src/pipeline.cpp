#include "orcidlink/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>
#include <toml.hpp>

#include "orcidlink/csv.hpp"
#include "orcidlink/parallel.hpp"

namespace orcidlink::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

namespace {

std::string where(std::string_view section, std::string_view key) {
  return "[" + std::string(section) + "] " + std::string(key);
}

std::string string_value(const toml::node& n, const std::string& what) {
  auto v = n.value<std::string>();
  if (!v || !n.is_string()) throw ConfigError(what + " must be a string");
  return *v;
}

std::int64_t int_value(const toml::node& n, const std::string& what) {
  if (!n.is_integer()) throw ConfigError(what + " must be an integer");
  return *n.value<std::int64_t>();
}

double number_value(const toml::node& n, const std::string& what) {
  if (!n.is_number()) throw ConfigError(what + " must be a number");
  return *n.value<double>();
}

bool bool_value(const toml::node& n, const std::string& what) {
  if (!n.is_boolean()) throw ConfigError(what + " must be a boolean");
  return *n.value<bool>();
}

unsigned unsigned_value(const toml::node& n, const std::string& what, std::int64_t min) {
  auto v = int_value(n, what);
  if (v < min || v > 1'000'000'000) throw ConfigError(what + " must be >= " + std::to_string(min));
  return static_cast<unsigned>(v);
}

fs::path path_value(const toml::node& n, const std::string& what, const fs::path& base) {
  fs::path p = string_value(n, what);
  if (p.empty()) throw ConfigError(what + " must not be empty");
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

using Setter = std::function<void(const toml::node&, const std::string& what)>;

void apply_section(const toml::table& table, std::string_view section, const std::map<std::string, Setter>& keys) {
  for (auto&& [k, node] : table) {
    auto it = keys.find(std::string(k.str()));
    if (it == keys.end()) throw ConfigError("unknown key " + where(section, k.str()));
    it->second(node, where(section, k.str()));
  }
}

}  // namespace

std::pair<int, int> parse_year_range(std::string_view text) {
  auto colon = text.find(':');
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    if (s.empty() || s.size() > 4) throw ConfigError("invalid year range '" + std::string(text) + "'");
    for (char c : s) {
      if (c < '0' || c > '9') throw ConfigError("invalid year range '" + std::string(text) + "'");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (colon == std::string_view::npos) {
    int y = parse_int(text);
    return {y, y};
  }
  auto range = std::pair{parse_int(text.substr(0, colon)), parse_int(text.substr(colon + 1))};
  if (range.first > range.second) throw ConfigError("year range '" + std::string(text) + "' is reversed");
  return range;
}

PipelineConfig parse_config(std::string_view toml_text, const fs::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "invalid TOML at line " << e.source().begin.line << ": " << e.description();
    throw ConfigError(msg.str());
  }

  PipelineConfig c;
  c.workers = default_workers();
  auto& m = c.metrics;
  auto& q = c.quality;

  const std::map<std::string, std::map<std::string, Setter>> sections = {
      {"inputs",
       {{"publications", [&](auto& n, auto& w) { c.inputs.publications = path_value(n, w, base_dir); }},
        {"crossref_assertions",
         [&](auto& n, auto& w) { c.inputs.crossref_assertions = path_value(n, w, base_dir); }},
        {"orcid_profiles", [&](auto& n, auto& w) { c.inputs.orcid_profiles = path_value(n, w, base_dir); }},
        {"researchers", [&](auto& n, auto& w) { c.inputs.researchers = path_value(n, w, base_dir); }},
        {"income_bands", [&](auto& n, auto& w) { c.income_bands = path_value(n, w, base_dir); }},
        {"as_of",
         [&](auto& n, auto& w) {
           c.as_of = parse_date(string_value(n, w));
           if (!c.as_of) throw ConfigError(w + " must be a YYYY-MM-DD date");
         }}}},
      {"output",
       {{"dir", [&](auto& n, auto& w) { c.out_dir = path_value(n, w, base_dir); }},
        {"linked_authors", [&](auto& n, auto& w) { c.linked_authors = bool_value(n, w); }}}},
      {"cohort",
       {{"window",
         [&](auto& n, auto& w) {
           std::tie(m.cohort.window_start, m.cohort.window_end) = parse_year_range(string_value(n, w));
         }},
        {"min_history_years",
         [&](auto& n, auto& w) { m.cohort.min_history_years = static_cast<int>(unsigned_value(n, w, 0)); }},
        {"min_papers", [&](auto& n, auto& w) { m.cohort.min_papers = static_cast<int>(unsigned_value(n, w, 0)); }}}},
      {"quality",
       {{"keep_threshold", [&](auto& n, auto& w) { q.keep_threshold = number_value(n, w); }},
        {"reassign_threshold", [&](auto& n, auto& w) { q.reassign_threshold = number_value(n, w); }},
        {"min_name_part_length", [&](auto& n, auto& w) { q.min_name_part_length = unsigned_value(n, w, 0); }},
        {"multi_publisher_rescue", [&](auto& n, auto& w) { q.multi_publisher_rescue = bool_value(n, w); }},
        {"rescue_min_publishers", [&](auto& n, auto& w) { q.rescue_min_publishers = unsigned_value(n, w, 1); }}}},
      {"metrics",
       {{"report_years",
         [&](auto& n, auto& w) {
           std::tie(m.report_year_start, m.report_year_end) = parse_year_range(string_value(n, w));
         }},
        {"publisher_year", [&](auto& n, auto& w) { m.publisher_year = static_cast<int>(int_value(n, w)); }},
        {"min_authors", [&](auto& n, auto& w) { m.min_authors = unsigned_value(n, w, 1); }},
        {"top_n", [&](auto& n, auto& w) { m.top_n = unsigned_value(n, w, 0); }},
        {"early_usage_denominator",
         [&](auto& n, auto& w) {
           auto s = string_value(n, w);
           if (s == "country_cohort") m.early_usage_denominator = metrics::EarlyUsageDenominator::CountryCohort;
           else if (s == "created_in_year") m.early_usage_denominator = metrics::EarlyUsageDenominator::CreatedInYear;
           else throw ConfigError(w + " must be \"country_cohort\" or \"created_in_year\"");
         }},
        {"crossref_only_population",
         [&](auto& n, auto& w) {
           auto s = string_value(n, w);
           if (s == "researchers") m.crossref_only_population = metrics::CrossrefOnlyPopulation::Researchers;
           else if (s == "orcids") m.crossref_only_population = metrics::CrossrefOnlyPopulation::Orcids;
           else throw ConfigError(w + " must be \"researchers\" or \"orcids\"");
         }}}},
      {"run",
       {{"workers", [&](auto& n, auto& w) { c.workers = unsigned_value(n, w, 1); }},
        {"seed",
         [&](auto& n, auto& w) {
           auto v = int_value(n, w);
           if (v < 0) throw ConfigError(w + " must be >= 0");
           c.seed = static_cast<std::uint64_t>(v);
         }}}},
  };

  for (auto&& [k, node] : root) {
    auto it = sections.find(std::string(k.str()));
    if (it == sections.end()) throw ConfigError("unknown section [" + std::string(k.str()) + "]");
    const auto* table = node.as_table();
    if (!table) throw ConfigError("[" + std::string(k.str()) + "] must be a table");
    apply_section(*table, k.str(), it->second);
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str(), fs::absolute(path).parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void validate(const PipelineConfig& c, bool need_output) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  const auto& in = c.inputs;
  require(!in.publications.empty(), "missing input path: publications");
  require(!in.crossref_assertions.empty(), "missing input path: crossref_assertions");
  require(!in.orcid_profiles.empty(), "missing input path: orcid_profiles");
  require(!in.researchers.empty(), "missing input path: researchers");
  if (need_output) require(!c.out_dir.empty(), "missing output directory");
  const auto& q = c.quality;
  require(q.keep_threshold >= 0.0 && q.keep_threshold <= 1.0, "keep_threshold must be in [0, 1]");
  require(q.reassign_threshold >= 0.0 && q.reassign_threshold <= 1.0, "reassign_threshold must be in [0, 1]");
  require(q.rescue_min_publishers >= 1, "rescue_min_publishers must be >= 1");
  const auto& m = c.metrics;
  require(m.cohort.window_start <= m.cohort.window_end, "cohort window start must be <= end");
  require(m.cohort.min_history_years >= 0, "min_history_years must be >= 0");
  require(m.cohort.min_papers >= 0, "min_papers must be >= 0");
  require(m.report_year_start <= m.report_year_end, "report_years start must be <= end");
  require(m.min_authors >= 1, "min_authors must be >= 1");
  require(c.workers >= 1, "workers must be >= 1");
}

ordered_json config_echo(const PipelineConfig& c) {
  ordered_json j;
  j["inputs"] = {{"publications", c.inputs.publications.string()},
                 {"crossref_assertions", c.inputs.crossref_assertions.string()},
                 {"orcid_profiles", c.inputs.orcid_profiles.string()},
                 {"researchers", c.inputs.researchers.string()},
                 {"income_bands", c.income_bands.string()},
                 {"as_of", c.as_of ? format_date(*c.as_of) : std::string()}};
  j["output"] = {{"linked_authors", c.linked_authors}};
  const auto& m = c.metrics;
  j["cohort"] = {{"window", std::to_string(m.cohort.window_start) + ":" + std::to_string(m.cohort.window_end)},
                 {"min_history_years", m.cohort.min_history_years},
                 {"min_papers", m.cohort.min_papers}};
  const auto& q = c.quality;
  j["quality"] = {{"keep_threshold", q.keep_threshold},
                  {"reassign_threshold", q.reassign_threshold},
                  {"min_name_part_length", q.min_name_part_length},
                  {"multi_publisher_rescue", q.multi_publisher_rescue},
                  {"rescue_min_publishers", q.rescue_min_publishers}};
  j["metrics"] = {
      {"report_years", std::to_string(m.report_year_start) + ":" + std::to_string(m.report_year_end)},
      {"publisher_year", m.publisher_year},
      {"min_authors", m.min_authors},
      {"top_n", m.top_n},
      {"early_usage_denominator", m.early_usage_denominator == metrics::EarlyUsageDenominator::CountryCohort
                                      ? "country_cohort"
                                      : "created_in_year"},
      {"crossref_only_population",
       m.crossref_only_population == metrics::CrossrefOnlyPopulation::Researchers ? "researchers" : "orcids"}};
  j["run"] = {{"workers", c.workers}, {"seed", c.seed ? ordered_json(*c.seed) : ordered_json(nullptr)}};
  return j;
}

// ---------------------------------------------------------------- stages

Loaded load(const PipelineConfig& c) {
  const Date as_of = c.as_of.value_or(today_utc());
  auto raw = ingest::load_inputs(c.inputs, as_of, c.workers);
  for (const auto* t : {&raw.publications.rejects, &raw.crossref.rejects, &raw.profiles.rejects,
                        &raw.researchers.rejects})
    if (!t->empty()) spdlog::warn("{}: {} malformed line(s) skipped", t->front().file, t->size());
  spdlog::info("ingested {} publications, {} crossref assertions, {} profiles, {} researchers",
               raw.publications.rows.size(), raw.crossref.rows.size(), raw.profiles.rows.size(),
               raw.researchers.rows.size());

  std::vector<CrossrefAssertion> crossref = std::move(raw.crossref.rows);
  raw.crossref.rows.clear();
  Corpus corpus(std::move(raw.publications.rows), std::move(raw.profiles.rows), std::move(raw.researchers.rows));
  raw.publications.rows.clear();
  raw.profiles.rows.clear();
  raw.researchers.rows.clear();
  if (corpus.dropped_researcher_dois())
    spdlog::warn("{} researcher publication DOI(s) not in the publication table", corpus.dropped_researcher_dois());

  auto link = linkage::AuthorLinkage::build(corpus);
  spdlog::info("linked {} of {} author mentions ({} ambiguous)", link.linked(), link.mentions(), link.ambiguous());
  const auto n = crossref.size();
  return Loaded{std::move(raw), n, std::move(crossref), std::move(corpus), std::move(link)};
}

namespace {

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void table(const std::string& name, const csv::Table& t) { files_.push_back({name, csv::emit_csv(t, dir_ / name)}); }

  void text(const std::string& name, const std::string& content, std::size_t rows) {
    csv::write_atomic(dir_ / name, content);
    files_.push_back({name, rows});
  }

  std::vector<OutputFile> finish() {
    std::sort(files_.begin(), files_.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return std::move(files_);
  }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

ordered_json ingest_stats(const Loaded& l) {
  auto entry = [](const auto& t, std::size_t rows) {
    return ordered_json{{"lines", t.lines}, {"rows", rows}, {"rejects", t.rejects.size()}};
  };
  return {{"publications", entry(l.raw.publications, l.corpus.publications().size())},
          {"crossref_assertions", entry(l.raw.crossref, l.crossref_rows)},
          {"orcid_profiles", entry(l.raw.profiles, l.corpus.profiles().size())},
          {"researchers", entry(l.raw.researchers, l.corpus.researchers().size())},
          {"dropped_researcher_dois", l.corpus.dropped_researcher_dois()}};
}

ordered_json linkage_stats(const Loaded& l) {
  return {{"mentions", l.linkage.mentions()}, {"linked", l.linkage.linked()}, {"ambiguous", l.linkage.ambiguous()}};
}

ordered_json criterion_counts(std::span<const quality::RepairOutcome> outcomes) {
  std::map<std::string, std::size_t> counts;
  for (auto bit : {quality::kSelfCollab, quality::kMultiOrcidPerResearcher, quality::kRegistryDisagrees,
                   quality::kNoResearcherForOrcid})
    counts[quality::criteria_string(bit)] = 0;
  for (const auto& o : outcomes)
    for (auto& [name, n] : counts)
      if (o.criteria & quality::parse_criteria(name)) ++n;
  ordered_json j = ordered_json::object();
  for (const auto& [name, n] : counts) j[name] = n;
  return j;
}

ordered_json repair_stats(const quality::RepairResult& r, std::size_t orphans) {
  const auto& s = r.stats;
  return {{"total_assertions", s.total_assertions},
          {"unresolved_assertions", orphans},
          {"flagged", s.flagged},
          {"kept", s.kept},
          {"reassigned", s.reassigned},
          {"dropped", s.dropped},
          {"pct_removed", s.pct_removed},
          {"pct_reassigned", s.pct_reassigned},
          {"by_criterion", criterion_counts(r.outcomes)}};
}

ordered_json rate_stats(const quality::ShuffleRateSeries& series) {
  auto p = quality::pooled_rate(series);
  return {{"flagged", p.flagged}, {"total", p.total}, {"rate", p.rate}};
}

std::string ndjson(std::span<const CrossrefAssertion> rows) {
  std::string s;
  for (const auto& r : rows) {
    s += ingest::to_ndjson(r);
    s.push_back('\n');
  }
  return s;
}

csv::Table suspects_table(std::span<const quality::SuspectFlag> flags) {
  csv::Table t;
  t.header = {"doi", "position", "orcid", "criteria"};
  for (const auto& f : flags)
    t.rows.push_back({f.doi.str(), std::to_string(f.position), f.orcid.str(), quality::criteria_string(f.criteria)});
  return t;
}

void write_rejects(Writer& w, const Loaded& l) {
  csv::Table t;
  t.header = {"file", "line", "reason"};
  for (const auto& r : l.raw.all_rejects()) t.rows.push_back({r.file, std::to_string(r.line), r.reason});
  w.table("rejects.csv", t);
}

std::map<std::string, std::string> band_map(const PipelineConfig& c) {
  if (c.income_bands.empty()) {
    spdlog::warn("no income band map configured; income_bands.csv will be empty");
    return {};
  }
  return metrics::load_band_map(c.income_bands);
}

ordered_json write_metrics(Writer& w, const Loaded& l, std::span<const CrossrefAssertion> repaired,
                           const std::map<std::string, std::string>& bands, const PipelineConfig& c) {
  auto registry_rows = linkage::link_orcid_works(l.corpus);
  auto unified = linkage::build_assertion_table(l.corpus, l.linkage, registry_rows, repaired);
  auto t = metrics::compute_all(l.corpus, repaired, unified, bands, c.metrics);
  using metrics::Dimension;
  w.table("adoption_by_country.csv", metrics::breakdown_table(t.by_country, Dimension::Country));
  w.table("funder.csv", metrics::breakdown_table(t.by_funder, Dimension::Funder));
  w.table("discipline.csv", metrics::breakdown_table(t.by_discipline, Dimension::Discipline));
  w.table("early_usage.csv", metrics::early_usage_table(t.early_usage));
  w.table("crossref_only.csv", metrics::crossref_only_table(t.crossref_only));
  w.table("income_bands.csv", metrics::income_band_table(t.income_bands));
  w.table("authors_per_paper.csv", metrics::authors_per_paper_table(t.authors_per_paper));
  w.table("journal_support.csv", metrics::journal_support_table(t.journal_support));
  w.table("orcid_distribution.csv", metrics::orcid_distribution_table(t.orcid_distribution));

  std::size_t adopted = 0;
  for (const auto& ind : t.indicators) adopted += ind.adopted;
  std::size_t crossref_rows = 0;
  for (const auto& u : unified) crossref_rows += u.source == linkage::Source::Crossref;
  spdlog::info("cohort of {} researchers, {} adopted", t.cohort.size(), adopted);
  return {{"unified_assertions", {{"total", unified.size()},
                                  {"crossref", crossref_rows},
                                  {"orcid_registry", unified.size() - crossref_rows}}},
          {"cohort_size", t.cohort.size()},
          {"adopted", adopted}};
}

std::string utc_timestamp() {
  auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  auto day = std::chrono::floor<std::chrono::days>(now);
  std::chrono::hh_mm_ss hms{now - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(Date{day}).c_str(),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

PipelineConfig with_workers(PipelineConfig c) {
  c.quality.workers = c.workers;
  return c;
}

}  // namespace

RunResult run_ingest_check(const PipelineConfig& config) {
  auto l = load(config);
  Writer w(config.out_dir);
  write_rejects(w, l);
  return {w.finish(), {{"ingest", ingest_stats(l)}, {"linkage", linkage_stats(l)}}};
}

RunResult run_diagnose(const PipelineConfig& config0) {
  auto config = with_workers(config0);
  auto l = load(config);
  quality::AssertionContext ctx(l.corpus, l.linkage, l.crossref);
  auto flags = quality::flag_suspects(ctx);
  auto series = quality::estimate_shuffle_rate(ctx);
  spdlog::info("{} suspect assertions; pooled self-collaboration rate {:.4f}", flags.size(),
               quality::pooled_rate(series).rate);
  Writer w(config.out_dir);
  write_rejects(w, l);
  w.table("suspects.csv", suspects_table(flags));
  w.table("shuffle_rate.csv", quality::shuffle_rate_table(series));
  return {w.finish(),
          {{"ingest", ingest_stats(l)},
           {"linkage", linkage_stats(l)},
           {"suspects", flags.size()},
           {"shuffle_rate", rate_stats(series)}}};
}

RunResult run_repair(const PipelineConfig& config0) {
  auto config = with_workers(config0);
  auto l = load(config);
  quality::AssertionContext ctx(l.corpus, l.linkage, l.crossref);
  auto series = quality::estimate_shuffle_rate(ctx);
  auto result = quality::apply_repairs(ctx, quality::resolve_all(ctx, quality::flag_suspects(ctx), config.quality));
  spdlog::info("repair: {} flagged, {} kept, {} reassigned, {} dropped", result.stats.flagged, result.stats.kept,
               result.stats.reassigned, result.stats.dropped);
  Writer w(config.out_dir);
  write_rejects(w, l);
  w.table("repair_report.csv", quality::repair_report_table(result.outcomes));
  w.table("shuffle_rate.csv", quality::shuffle_rate_table(series));
  w.text("crossref_repaired.ndjson", ndjson(result.repaired), result.repaired.size());
  return {w.finish(),
          {{"ingest", ingest_stats(l)},
           {"linkage", linkage_stats(l)},
           {"repair", repair_stats(result, ctx.resolved().orphans)},
           {"shuffle_rate", rate_stats(series)}}};
}

RunResult run_metrics(const PipelineConfig& config) {
  auto bands = band_map(config);
  auto l = load(config);
  Writer w(config.out_dir);
  write_rejects(w, l);
  auto stats = write_metrics(w, l, l.crossref, bands, config);
  return {w.finish(), {{"ingest", ingest_stats(l)}, {"linkage", linkage_stats(l)}, {"metrics", stats}}};
}

RunResult run_pipeline(const PipelineConfig& config0) {
  auto config = with_workers(config0);
  auto bands = band_map(config);  // fail fast on a bad band map
  auto l = load(config);

  quality::AssertionContext ctx(l.corpus, l.linkage, l.crossref);
  auto series = quality::estimate_shuffle_rate(ctx);
  auto result = quality::apply_repairs(ctx, quality::resolve_all(ctx, quality::flag_suspects(ctx), config.quality));
  spdlog::info("repair: {} flagged, {} kept, {} reassigned, {} dropped", result.stats.flagged, result.stats.kept,
               result.stats.reassigned, result.stats.dropped);

  Writer w(config.out_dir);
  write_rejects(w, l);
  w.table("repair_report.csv", quality::repair_report_table(result.outcomes));
  w.table("shuffle_rate.csv", quality::shuffle_rate_table(series));
  w.text("crossref_repaired.ndjson", ndjson(result.repaired), result.repaired.size());
  if (config.linked_authors) {
    auto rows = linkage::link_crossref_authors(l.corpus, l.linkage, result.repaired);
    w.table("linked_authors.csv", linkage::linked_authors_table(rows));
  }
  auto metric_stats = write_metrics(w, l, result.repaired, bands, config);
  return {w.finish(),
          {{"ingest", ingest_stats(l)},
           {"linkage", linkage_stats(l)},
           {"repair", repair_stats(result, ctx.resolved().orphans)},
           {"shuffle_rate", rate_stats(series)},
           {"metrics", metric_stats}}};
}

void write_manifest(const PipelineConfig& config, const std::string& command, const RunResult& result) {
  ordered_json m;
  m["tool"] = "orcidlink";
  m["version"] = kVersion;
  m["command"] = command;
  m["generated_at"] = utc_timestamp();
  m["config"] = config_echo(config);
  ordered_json outputs = ordered_json::array();
  for (const auto& f : result.outputs) outputs.push_back({{"file", f.name}, {"rows", f.rows}});
  m["outputs"] = outputs;
  m["stats"] = result.stats;
  csv::write_atomic(config.out_dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace orcidlink::pipeline
