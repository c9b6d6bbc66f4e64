// orcidlink: command-line driver for the ORCID assertion linkage, repair and
// metrics pipeline.
//
//   orcidlink run --config pipeline.toml --out results/
//   orcidlink synth --out world/ --seed 42 --shuffle-rate 0.02
//   orcidlink score --truth world/truth.ndjson --report results/repair_report.csv
//
// Exit status: 0 success, 1 input error, 2 invalid configuration.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "orcidlink/csv.hpp"
#include "orcidlink/parallel.hpp"
#include "orcidlink/pipeline.hpp"
#include "orcidlink/similarity.hpp"
#include "orcidlink/synthworld.hpp"

namespace {

using namespace orcidlink;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

// Pipeline flags; each one overrides the config file only when given.
struct PipelineFlags {
  std::string config;
  std::string out;
  std::string publications, crossref, profiles, researchers, income_bands, as_of;
  double keep_threshold = 0, reassign_threshold = 0;
  std::string window, report_years;
  int min_history = 0, min_papers = 0, publisher_year = 0;
  unsigned min_authors = 0, top_n = 0, workers = 0, min_name_part_length = 0;
  std::uint64_t seed = 0;
  bool no_rescue = false, linked_authors = false;
  std::string early_usage_denominator, crossref_only_population;

  std::vector<std::function<void(pipeline::PipelineConfig&)>> apply;
};

template <class T, class Fn>
void flag(CLI::App* app, PipelineFlags& f, const std::string& name, T& target, const std::string& help, Fn set) {
  auto* opt = app->add_option(name, target, help);
  f.apply.push_back([opt, &target, set](pipeline::PipelineConfig& c) {
    if (opt->count()) set(c, target);
  });
}

void add_pipeline_flags(CLI::App* app, PipelineFlags& f, bool metrics_flags, bool quality_flags) {
  using C = pipeline::PipelineConfig;
  app->add_option("-c,--config", f.config, "TOML configuration file")->check(CLI::ExistingFile);
  flag(app, f, "-o,--out", f.out, "Output directory", [](C& c, auto& v) { c.out_dir = v; });
  flag(app, f, "--publications", f.publications, "Publications NDJSON",
       [](C& c, auto& v) { c.inputs.publications = v; });
  flag(app, f, "--crossref", f.crossref, "Crossref assertions NDJSON",
       [](C& c, auto& v) { c.inputs.crossref_assertions = v; });
  flag(app, f, "--profiles", f.profiles, "ORCID profiles NDJSON", [](C& c, auto& v) { c.inputs.orcid_profiles = v; });
  flag(app, f, "--researchers", f.researchers, "Researcher registry NDJSON",
       [](C& c, auto& v) { c.inputs.researchers = v; });
  flag(app, f, "--as-of", f.as_of, "Reference date (YYYY-MM-DD) for profile creation checks",
       [](C& c, auto& v) {
         c.as_of = parse_date(v);
         if (!c.as_of) throw pipeline::ConfigError("--as-of must be a YYYY-MM-DD date");
       });
  flag(app, f, "-j,--workers", f.workers, "Worker threads (default: number of processors)",
       [](C& c, auto& v) {
         if (v < 1) throw pipeline::ConfigError("--workers must be >= 1");
         c.workers = v;
       });
  flag(app, f, "--seed", f.seed, "Seed recorded in the manifest", [](C& c, auto& v) { c.seed = v; });
  if (quality_flags) {
    flag(app, f, "--keep-threshold", f.keep_threshold, "Similarity needed to keep a suspect assertion",
         [](C& c, auto& v) { c.quality.keep_threshold = v; });
    flag(app, f, "--reassign-threshold", f.reassign_threshold, "Similarity needed to move an assertion",
         [](C& c, auto& v) { c.quality.reassign_threshold = v; });
    flag(app, f, "--min-name-part", f.min_name_part_length, "Shortest name part eligible as a reassignment target",
         [](C& c, auto& v) { c.quality.min_name_part_length = v; });
    auto* rescue = app->add_flag("--no-rescue", f.no_rescue, "Disable the multi-publisher rescue rule");
    f.apply.push_back([rescue](C& c) {
      if (rescue->count()) c.quality.multi_publisher_rescue = false;
    });
  }
  if (metrics_flags) {
    flag(app, f, "--income-bands", f.income_bands, "Country to income band CSV",
         [](C& c, auto& v) { c.income_bands = v; });
    flag(app, f, "--window", f.window, "Cohort window START:END", [](C& c, auto& v) {
      std::tie(c.metrics.cohort.window_start, c.metrics.cohort.window_end) = pipeline::parse_year_range(v);
    });
    flag(app, f, "--min-history", f.min_history, "Cohort: publication history longer than N years",
         [](C& c, auto& v) { c.metrics.cohort.min_history_years = v; });
    flag(app, f, "--min-papers", f.min_papers, "Cohort: more than N publications",
         [](C& c, auto& v) { c.metrics.cohort.min_papers = v; });
    flag(app, f, "--report-years", f.report_years, "Years for crossref_only.csv START:END", [](C& c, auto& v) {
      std::tie(c.metrics.report_year_start, c.metrics.report_year_end) = pipeline::parse_year_range(v);
    });
    flag(app, f, "--publisher-year", f.publisher_year, "Year for orcid_distribution.csv",
         [](C& c, auto& v) { c.metrics.publisher_year = v; });
    flag(app, f, "--min-authors", f.min_authors, "Papers need at least N authors in orcid_distribution.csv",
         [](C& c, auto& v) { c.metrics.min_authors = v; });
    flag(app, f, "--top-n", f.top_n, "Publishers kept in orcid_distribution.csv (0 = all)",
         [](C& c, auto& v) { c.metrics.top_n = v; });
    flag(app, f, "--early-usage-denominator", f.early_usage_denominator, "country_cohort | created_in_year",
         [](C& c, auto& v) {
           if (v == "country_cohort") c.metrics.early_usage_denominator = metrics::EarlyUsageDenominator::CountryCohort;
           else if (v == "created_in_year") c.metrics.early_usage_denominator = metrics::EarlyUsageDenominator::CreatedInYear;
           else throw pipeline::ConfigError("--early-usage-denominator must be country_cohort or created_in_year");
         });
    flag(app, f, "--crossref-only-population", f.crossref_only_population, "researchers | orcids",
         [](C& c, auto& v) {
           if (v == "researchers") c.metrics.crossref_only_population = metrics::CrossrefOnlyPopulation::Researchers;
           else if (v == "orcids") c.metrics.crossref_only_population = metrics::CrossrefOnlyPopulation::Orcids;
           else throw pipeline::ConfigError("--crossref-only-population must be researchers or orcids");
         });
    auto* linked = app->add_flag("--linked-authors", f.linked_authors, "Also write linked_authors.csv");
    f.apply.push_back([linked](C& c) {
      if (linked->count()) c.linked_authors = true;
    });
  }
}

pipeline::PipelineConfig resolve_config(const PipelineFlags& f, bool need_output) {
  pipeline::PipelineConfig c;
  if (!f.config.empty()) {
    c = pipeline::load_config(f.config);
  } else {
    c.workers = default_workers();
  }
  for (const auto& a : f.apply) a(c);
  pipeline::validate(c, need_output);
  return c;
}

int run_stage(const PipelineFlags& f, const std::string& command,
              pipeline::RunResult (*stage)(const pipeline::PipelineConfig&)) {
  auto config = resolve_config(f, true);
  auto result = stage(config);
  pipeline::write_manifest(config, command, result);
  spdlog::info("wrote {} file(s) and manifest.json to {}", result.outputs.size(), config.out_dir.string());
  return kExitOk;
}

struct SynthFlags {
  std::string out;
  synth::SynthConfig config;
  std::string years;
};

void add_synth_flags(CLI::App* app, SynthFlags& s) {
  auto& c = s.config;
  app->add_option("-o,--out", s.out, "Directory for the generated files")->required();
  app->add_option("--seed", c.seed, "World seed")->capture_default_str();
  app->add_option("--researchers", c.n_researchers, "Number of people")->capture_default_str();
  app->add_option("--papers", c.n_papers, "Number of publications")->capture_default_str();
  app->add_option("--authors-min", c.authors_per_paper.min, "Minimum authors per paper")->capture_default_str();
  app->add_option("--authors-max", c.authors_per_paper.max, "Maximum authors per paper")->capture_default_str();
  app->add_option("--authors-mean", c.authors_per_paper.mean, "Mean authors per paper")->capture_default_str();
  app->add_option("--publishers", c.n_publishers, "Number of publishers")->capture_default_str();
  app->add_option("--journals", c.journals_per_publisher, "Journals per publisher")->capture_default_str();
  app->add_option("--funders", c.n_funders, "Number of funders")->capture_default_str();
  app->add_option("--years", s.years, "Publication years START:END (default 2008:2020)");
  app->add_option("--ownership", c.orcid_ownership_rate, "Share of people with an ORCID iD")->capture_default_str();
  app->add_option("--assertion-rate", c.crossref_assertion_rate, "Share of owned authorships asserted in Crossref")
      ->capture_default_str();
  app->add_option("--authenticated-rate", c.authenticated_rate, "Share of assertions marked authenticated")
      ->capture_default_str();
  app->add_option("--shuffle-rate", c.shuffle_rate, "Share of movable assertions shuffled")->capture_default_str();
  app->add_option("--sync", c.sync_probability, "Probability a Crossref assertion reaches the ORCID record")
      ->capture_default_str();
  app->add_option("--manual-work-rate", c.manual_work_rate, "Share of unasserted authorships added by hand")
      ->capture_default_str();
  app->add_option("--married", c.perturbation.married_name, "Married-name perturbation rate")->capture_default_str();
  app->add_option("--short", c.perturbation.short_name, "Short-name perturbation rate")->capture_default_str();
  app->add_option("--transliteration", c.perturbation.transliteration, "Transliteration perturbation rate")
      ->capture_default_str();
  app->add_option("--coverage", c.registry_coverage, "Share of people in the researcher registry")
      ->capture_default_str();
  app->add_option("--max-name-similarity", c.max_name_similarity, "Pairwise name similarity bound (1 = off)")
      ->capture_default_str();
  app->add_option("--confusable-rate", c.confusable_rate, "Share of people with a near-duplicate name")
      ->capture_default_str();
}

int run_synth(SynthFlags& s) {
  if (!s.years.empty())
    std::tie(s.config.year_start, s.config.year_end) = pipeline::parse_year_range(s.years);
  synth::validate(s.config);
  auto world = synth::generate_world(s.config);
  auto files = synth::emit_world(world, s.out);
  csv::write_atomic(fs::path(s.out) / "synth_config.json", synth::to_json(s.config).dump(2) + "\n");
  spdlog::info("{} publications, {} assertions ({} shuffled), {} profiles, {} registry researchers -> {}",
               world.publications.size(), world.crossref.size(), world.truth.shuffles.size(),
               world.profiles.size(), world.researchers.size(), files.config.parent_path().string());
  return kExitOk;
}

struct ScoreFlags {
  std::string truth, report, out;
};

int run_score(const ScoreFlags& s) {
  std::ifstream truth_in(s.truth, std::ios::binary);
  if (!truth_in) throw InputError("cannot open truth file: " + s.truth);
  std::ifstream report_in(s.report, std::ios::binary);
  if (!report_in) throw InputError("cannot open repair report: " + s.report);
  auto truth = synth::read_truth(truth_in);
  auto outcomes = quality::parse_repair_report(report_in);
  auto text = synth::to_json(synth::score_repair(truth, outcomes)).dump(2) + "\n";
  if (!s.out.empty()) csv::write_atomic(s.out, text);
  std::cout << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link, repair and measure ORCID assertions in bibliographic metadata"};
  app.set_version_flag("--version", pipeline::kVersion);
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}))
      ->capture_default_str();
  std::string kernel = "auto";
  app.add_option("--kernel", kernel, "Similarity kernel: auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();

  PipelineFlags ingest_f, diagnose_f, repair_f, metrics_f, run_f;
  auto* ingest_cmd = app.add_subcommand("ingest-check", "Validate the input dumps and write the reject log");
  add_pipeline_flags(ingest_cmd, ingest_f, false, false);
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Flag suspect assertions and estimate the shuffle rate");
  add_pipeline_flags(diagnose_cmd, diagnose_f, false, false);
  auto* repair_cmd = app.add_subcommand("repair", "Resolve suspect assertions and write the repaired Crossref table");
  add_pipeline_flags(repair_cmd, repair_f, false, true);
  auto* metrics_cmd = app.add_subcommand("metrics", "Compute metric tables from already-repaired assertions");
  add_pipeline_flags(metrics_cmd, metrics_f, true, false);
  auto* run_cmd = app.add_subcommand("run", "Full pipeline: ingest, link, repair, metrics");
  add_pipeline_flags(run_cmd, run_f, true, true);

  SynthFlags synth_f;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic world with ground truth");
  add_synth_flags(synth_cmd, synth_f);

  ScoreFlags score_f;
  auto* score_cmd = app.add_subcommand("score", "Score a repair report against synthetic ground truth");
  score_cmd->add_option("--truth", score_f.truth, "truth.ndjson from synth")->required();
  score_cmd->add_option("--report", score_f.report, "repair_report.csv from repair or run")->required();
  score_cmd->add_option("-o,--out", score_f.out, "Also write the JSON score to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  auto logger = spdlog::stderr_color_mt("orcidlink");
  logger->set_pattern("%^[%l]%$ %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(log_level));

  if (kernel == "scalar") similarity::set_kernel(similarity::Kernel::Scalar);
  else if (kernel == "avx2") {
    if (!similarity::avx2_available()) {
      spdlog::error("the AVX2 kernel is not available on this machine");
      return kExitConfig;
    }
    similarity::set_kernel(similarity::Kernel::Avx2);
  }
  spdlog::debug("similarity kernel: {}", similarity::kernel_name(similarity::active_kernel()));

  try {
    if (*ingest_cmd) return run_stage(ingest_f, "ingest-check", pipeline::run_ingest_check);
    if (*diagnose_cmd) return run_stage(diagnose_f, "diagnose", pipeline::run_diagnose);
    if (*repair_cmd) return run_stage(repair_f, "repair", pipeline::run_repair);
    if (*metrics_cmd) return run_stage(metrics_f, "metrics", pipeline::run_metrics);
    if (*run_cmd) return run_stage(run_f, "run", pipeline::run_pipeline);
    if (*synth_cmd) return run_synth(synth_f);
    if (*score_cmd) return run_score(score_f);
  } catch (const pipeline::ConfigError& e) {
    spdlog::error("configuration: {}", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    spdlog::error("configuration: {}", e.what());
    return kExitConfig;
  } catch (const InputError& e) {
    spdlog::error("input: {}", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitInput;
  }
  return kExitOk;
}
