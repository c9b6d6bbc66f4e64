// Acceptance suite: one PASS/FAIL line per end-to-end requirement of the
// linkage, repair and metrics component. Exits non-zero if any check fails.

#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "../oracles/levenshtein_oracle.hpp"
#include "../oracles/metrics_oracle.hpp"
#include "../oracles/mod11_oracle.hpp"
#include "../support/fixtures.hpp"
#include "../support/metrics_compare.hpp"
#include "orcidlink/identifiers.hpp"
#include "orcidlink/metrics.hpp"
#include "orcidlink/quality.hpp"
#include "orcidlink/similarity.hpp"
#include "orcidlink/synthworld.hpp"

#ifndef ORCIDLINK_CLI_PATH
#error "ORCIDLINK_CLI_PATH must name the orcidlink executable"
#endif

using namespace orcidlink;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct ChildRun {
  int exit_code = -1;
  double seconds = 0.0;
  long max_rss_kib = 0;
};

// Runs the CLI in a child process and reports its own wall time and peak
// resident set size.
ChildRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), {ORCIDLINK_CLI_PATH, "--log-level", "warn"});
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  const auto t0 = Clock::now();
  pid_t pid = fork();
  if (pid == 0) {
    execv(argv[0], argv.data());
    _exit(127);
  }
  ChildRun r;
  if (pid < 0) return r;
  int status = 0;
  struct rusage usage {};
  wait4(pid, &status, 0, &usage);
  r.seconds = seconds_since(t0);
  r.max_rss_kib = usage.ru_maxrss;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

synth::SynthConfig easy_world() {
  synth::SynthConfig c;
  c.seed = 42;
  c.n_papers = 5000;
  c.registry_coverage = 1.0;
  c.max_name_similarity = 0.6;
  c.shuffle_rate = 0.02;
  return c;
}

synth::SynthConfig hard_world() {
  auto c = easy_world();
  c.perturbation = {0.05, 0.05, 0.05};
  return c;
}

// ------------------------------------------------------------- criteria

Outcome easy_regime() {
  const auto t0 = Clock::now();
  auto p = fixtures::process(easy_world());
  const double secs = seconds_since(t0);
  auto s = synth::score_repair(p->world.truth, p->repair.outcomes);
  Outcome o;
  o.pass = s.recall == 1.0 && s.precision == 1.0 && secs < 30.0 && s.injected > 0;
  o.detail = fmt::format("injected={} recall={:.4f} precision={:.4f} time={:.2f}s (limit 30s)", s.injected,
                         s.recall, s.precision, secs);
  return o;
}

Outcome hard_regime() {
  auto with = fixtures::process(hard_world());
  quality::QualityConfig no_rescue;
  no_rescue.multi_publisher_rescue = false;
  auto without = fixtures::process(hard_world(), no_rescue);
  auto s = synth::score_repair(with->world.truth, with->repair.outcomes);

  const auto& none = s.by_class["none"];
  bool degraded = true;
  std::string classes;
  for (const char* name : {"married_name", "short_name", "transliteration"}) {
    const auto& c = s.by_class[name];
    degraded = degraded && c.injected > 0 && c.repair_recall < none.repair_recall;
    classes += fmt::format(" {}:{}/{}", name, c.repaired, c.injected);
  }
  const auto drops_on = with->repair.stats.dropped, drops_off = without->repair.stats.dropped;
  Outcome o;
  o.pass = none.recall >= 0.90 && degraded && drops_on < drops_off;
  o.detail = fmt::format("unperturbed recall={:.4f} (>=0.90); repaired none:{}/{}{}; drops rescue={} no-rescue={}",
                         none.recall, none.repaired, none.injected, classes, drops_on, drops_off);
  return o;
}

struct Estimate {
  double estimate = 0.0;
  double injected = 0.0;
  double detectable = 0.0;
};

Estimate estimate_for(double coverage) {
  auto cfg = easy_world();
  cfg.registry_coverage = coverage;
  auto w = synth::generate_world(cfg);
  Corpus corpus(w.publications, w.profiles, w.researchers);
  auto link = linkage::AuthorLinkage::build(corpus);
  quality::AssertionContext ctx(corpus, link, w.crossref);
  Estimate e;
  e.estimate = quality::pooled_rate(quality::estimate_shuffle_rate(ctx)).rate;
  const auto total = static_cast<double>(w.crossref.size());
  std::size_t covered = 0;
  for (const auto& sh : w.truth.shuffles) {
    auto person = w.truth.person_of(sh.orcid);
    if (person && w.truth.people[*person].covered) ++covered;
  }
  e.injected = static_cast<double>(w.truth.shuffles.size()) / total;
  e.detectable = static_cast<double>(covered) / total;
  return e;
}

Outcome estimator() {
  auto partial = estimate_for(0.7);
  auto full = estimate_for(1.0);
  const bool partial_ok = partial.estimate <= 0.02 && partial.estimate >= 0.6 * partial.detectable;
  const bool full_ok = std::fabs(full.estimate - full.injected) <= 0.10 * full.injected;
  Outcome o;
  o.pass = partial_ok && full_ok;
  o.detail = fmt::format(
      "coverage 0.7: estimate={:.5f} detectable={:.5f} (need <=0.02 and >=0.6x); "
      "coverage 1.0: estimate={:.5f} injected={:.5f} (need within 10%)",
      partial.estimate, partial.detectable, full.estimate, full.injected);
  return o;
}

Outcome metric_oracle() {
  std::size_t seeds_ok = 0, mismatches = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 104729 + 17);
    synth::SynthConfig sc;
    sc.seed = seed;
    sc.n_researchers = 50 + static_cast<unsigned>(rng() % 151);
    sc.n_papers = sc.n_researchers * 3;
    sc.shuffle_rate = 0.03;
    sc.perturbation = {0.05, 0.05, 0.05};
    sc.registry_coverage = 0.8;
    sc.sync_probability = 0.5;
    auto p = fixtures::process(sc);

    metrics::MetricsConfig cfg;
    cfg.cohort.window_start = 2012 + static_cast<int>(rng() % 4);
    cfg.cohort.window_end = cfg.cohort.window_start + 2 + static_cast<int>(rng() % 3);
    cfg.cohort.min_history_years = static_cast<int>(rng() % 5);
    cfg.cohort.min_papers = static_cast<int>(rng() % 5);
    cfg.report_year_start = 2013 + static_cast<int>(rng() % 4);
    cfg.report_year_end = cfg.report_year_start + static_cast<int>(rng() % 4);
    cfg.publisher_year = 2010 + static_cast<int>(rng() % 11);
    cfg.min_authors = 1 + static_cast<unsigned>(rng() % 6);
    cfg.top_n = static_cast<unsigned>(rng() % 10);
    cfg.early_usage_denominator = rng() % 2 ? metrics::EarlyUsageDenominator::CountryCohort
                                            : metrics::EarlyUsageDenominator::CreatedInYear;
    cfg.crossref_only_population = rng() % 2 ? metrics::CrossrefOnlyPopulation::Researchers
                                             : metrics::CrossrefOnlyPopulation::Orcids;

    oracle::World ow{p->world.publications, p->world.profiles, p->world.researchers, p->repair.repaired,
                     p->unified};
    oracle::MetricsOracle oracle(ow, cfg);
    auto want = oracle.run(p->world.config.income_bands);
    auto got = metrics::compute_all(*p->corpus, p->repair.repaired, p->unified, p->world.config.income_bands, cfg);
    fixtures::MetricsComparison cmp(1e-12);
    cmp.all(*p->corpus, got, oracle, want, {cfg.cohort.window_start, cfg.cohort.window_end});
    if (cmp.ok() && !want.cohort.empty()) {
      ++seeds_ok;
    } else {
      mismatches += cmp.mismatches().size();
      if (first.empty())
        first = fmt::format(" first: seed {} {}", seed,
                            cmp.mismatches().empty() ? std::string("empty cohort") : cmp.mismatches().front());
    }
  }
  Outcome o;
  o.pass = seeds_ok == 20;
  o.detail = fmt::format("{}/20 seeds identical to brute force (counts exact, ratios within 1e-12); {} mismatches{}",
                         seeds_ok, mismatches, first);
  return o;
}

Outcome levenshtein() {
  std::mt19937_64 rng(20240601);
  const std::u32string alphabet = U"abcdefghij éöжяд";
  auto draw = [&] {
    std::u32string s(rng() % 31, U'a');
    for (auto& c : s) c = alphabet[rng() % alphabet.size()];
    return s;
  };
  std::size_t agree = 0;
  for (int i = 0; i < 10000; ++i) {
    auto a = draw(), b = draw();
    const bool distance_ok = similarity::indel_distance(a, b) == oracle::indel_sub2_distance(a, b);
    const bool ratio_ok = similarity::levenshtein_ratio(a, b) == oracle::ratio(a, b);
    similarity::RatioScorer scorer(a);
    const bool scorer_ok = scorer.ratio(b) == oracle::ratio(a, b);
    if (distance_ok && ratio_ok && scorer_ok) ++agree;
  }
  const double kitten = similarity::levenshtein_ratio(std::string_view("kitten"), std::string_view("sitting"));
  Outcome o;
  o.pass = agree == 10000 && kitten == 8.0 / 13.0;
  o.detail = fmt::format("{}/10000 random pairs (lengths 0-30) exact; ratio(kitten, sitting)={:.15f} (8/13={:.15f}); "
                         "kernel={}",
                         agree, kitten, 8.0 / 13.0, similarity::kernel_name(similarity::active_kernel()));
  return o;
}

Outcome determinism(const fs::path& scratch) {
  auto w = synth::generate_world(hard_world());
  auto files = synth::emit_world(w, scratch / "world");
  const fs::path a = scratch / "run-a", b = scratch / "run-b";
  auto ra = run_cli({"run", "-c", files.config.string(), "-o", a.string(), "--linked-authors"});
  auto rb = run_cli({"run", "-c", files.config.string(), "-o", b.string(), "--linked-authors"});
  Outcome o;
  if (ra.exit_code != 0 || rb.exit_code != 0) {
    o.detail = fmt::format("run exited {} / {}", ra.exit_code, rb.exit_code);
    return o;
  }
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename().string();
    std::string x = slurp(entry.path()), y = slurp(b / name);
    if (name == "manifest.json") {
      auto jx = nlohmann::json::parse(x), jy = nlohmann::json::parse(y);
      jx.erase("generated_at");
      jy.erase("generated_at");
      x = jx.dump();
      y = jy.dump();
    }
    ++compared;
    if (x != y) differing.push_back(name);
  }
  std::size_t in_b = std::distance(fs::directory_iterator(b), fs::directory_iterator{});
  o.pass = differing.empty() && compared == in_b && compared > 1;
  o.detail = fmt::format("{} files compared byte-for-byte (manifest generated_at excluded), {} differ", compared,
                         differing.size());
  for (const auto& d : differing) o.detail += " " + d;
  return o;
}

Outcome throughput(const fs::path& scratch) {
  synth::SynthConfig c;
  c.seed = 7;
  c.n_researchers = 60000;
  c.n_papers = 400000;
  c.shuffle_rate = 0.02;
  c.registry_coverage = 0.9;
  auto w = synth::generate_world(c);
  const auto assertions = w.crossref.size();
  auto files = synth::emit_world(w, scratch / "big");
  w = {};
  auto r = run_cli({"repair", "-c", files.config.string(), "-o", (scratch / "big-out").string()});
  const double gib = static_cast<double>(r.max_rss_kib) / (1024.0 * 1024.0);
  Outcome o;
  o.pass = r.exit_code == 0 && assertions >= 1'000'000 && r.seconds < 120.0 && gib < 4.0;
  o.detail = fmt::format("{} assertions; ingest+link+repair exit={} time={:.1f}s (limit 120s) peak RSS={:.2f} GiB "
                         "(limit 4 GiB)",
                         assertions, r.exit_code, r.seconds, gib);
  return o;
}

Outcome orcid_checksum() {
  const std::string valid = "0000-0002-6151-8423";
  std::size_t mutations = 0, rejected = 0, oracle_agrees = 0;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    if (valid[i] == '-') continue;
    const std::string alphabet = i + 1 == valid.size() ? "0123456789X" : "0123456789";
    for (char c : alphabet) {
      if (c == valid[i]) continue;
      auto m = valid;
      m[i] = c;
      ++mutations;
      if (!validate_orcid_checksum(m)) ++rejected;
      if (validate_orcid_checksum(m) == oracle::orcid_valid(m)) ++oracle_agrees;
    }
  }
  const bool accepts = validate_orcid_checksum(valid) && oracle::orcid_valid(valid);
  Outcome o;
  o.pass = accepts && mutations == 145 && rejected == mutations && oracle_agrees == mutations;
  o.detail = fmt::format("accepts {}: {}; rejected {}/{} single-character substitutions across all 16 characters",
                         valid, accepts ? "yes" : "no", rejected, mutations);
  return o;
}

}  // namespace

int main() {
  const auto scratch = fixtures::scratch_dir("acceptance");
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"easy-regime repair is exact", easy_regime},
      {"hard-regime recall, per-class degradation, rescue", hard_regime},
      {"shuffle-rate estimator bounds", estimator},
      {"metrics match brute-force oracle", metric_oracle},
      {"levenshtein matches DP oracle", levenshtein},
      {"run output is deterministic", [&] { return determinism(scratch); }},
      {"1M-assertion throughput and memory", [&] { return throughput(scratch); }},
      {"ORCID checksum", orcid_checksum},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(scratch);
  std::printf("%zu/%zu acceptance criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
