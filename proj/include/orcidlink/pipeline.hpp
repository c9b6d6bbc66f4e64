#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "orcidlink/corpus.hpp"
#include "orcidlink/ingest.hpp"
#include "orcidlink/linkage.hpp"
#include "orcidlink/metrics.hpp"
#include "orcidlink/quality.hpp"

namespace orcidlink::pipeline {

inline constexpr const char* kVersion = "0.1.0";

// Invalid configuration (bad value, unknown key, unparsable file). Maps to
// exit status 2; InputError maps to 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  ingest::InputPaths inputs;
  std::filesystem::path income_bands;  // optional
  std::optional<Date> as_of;           // profiles created later are rejected; default today
  std::filesystem::path out_dir;
  bool linked_authors = false;         // also write linked_authors.csv
  metrics::MetricsConfig metrics;
  quality::QualityConfig quality;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;   // recorded in the manifest; the pipeline itself is deterministic
};

// Parses a TOML file. Relative paths resolve against the file's directory.
// Unknown sections or keys are errors.
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir);

// "2015:2019" -> {2015, 2019}; throws ConfigError.
std::pair<int, int> parse_year_range(std::string_view text);

// Throws ConfigError. `need_output` for commands that write files.
void validate(const PipelineConfig& config, bool need_output = true);

nlohmann::ordered_json config_echo(const PipelineConfig& config);

// Inputs after ingest and linkage.
struct Loaded {
  ingest::RawInputs raw;  // rows moved into the corpus; counts and rejects remain
  std::size_t crossref_rows = 0;
  std::vector<CrossrefAssertion> crossref;
  Corpus corpus;
  linkage::AuthorLinkage linkage;
};

Loaded load(const PipelineConfig& config);

struct OutputFile {
  std::string name;
  std::size_t rows = 0;
};

struct RunResult {
  std::vector<OutputFile> outputs;  // sorted by name, manifest excluded
  nlohmann::ordered_json stats;
};

// Stage drivers used by the CLI subcommands. Each writes into
// config.out_dir (created if needed) and returns what it wrote.
RunResult run_ingest_check(const PipelineConfig& config);
RunResult run_diagnose(const PipelineConfig& config);
RunResult run_repair(const PipelineConfig& config);
// Treats the configured Crossref input as already repaired.
RunResult run_metrics(const PipelineConfig& config);
// ingest -> linkage -> diagnose/repair -> union -> metrics, plus manifest.json.
RunResult run_pipeline(const PipelineConfig& config);

// Writes manifest.json atomically (the only file carrying a timestamp).
void write_manifest(const PipelineConfig& config, const std::string& command, const RunResult& result);

}  // namespace orcidlink::pipeline
