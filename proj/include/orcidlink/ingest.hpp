#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "orcidlink/records.hpp"

namespace orcidlink {

// Unrecoverable input problem (missing or unreadable file).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace ingest {

struct Reject {
  std::string file;
  std::size_t line = 0;  // 1-based
  std::string reason;

  friend bool operator==(const Reject&, const Reject&) = default;
};

// Result of parsing one NDJSON stream. Invariant: rows.size() +
// rejects.size() == lines.
template <class Row>
struct Table {
  std::vector<Row> rows;
  std::vector<Reject> rejects;
  std::size_t lines = 0;
};

// Each parser reads one record per line and skips-and-logs malformed lines.
// `source` names the stream in reject entries.
Table<PublicationRecord> parse_publications(std::istream& in, std::string_view source);
Table<CrossrefAssertion> parse_crossref_assertions(std::istream& in, std::string_view source);
Table<OrcidProfile> parse_orcid_profiles(std::istream& in, std::string_view source, Date as_of);
Table<ResearcherRecord> parse_researchers(std::istream& in, std::string_view source);

// Serializers producing one line (no trailing newline) in the same schema.
std::string to_ndjson(const PublicationRecord& r);
std::string to_ndjson(const CrossrefAssertion& r);
std::string to_ndjson(const OrcidProfile& r);
std::string to_ndjson(const ResearcherRecord& r);

struct InputPaths {
  std::filesystem::path publications;
  std::filesystem::path crossref_assertions;
  std::filesystem::path orcid_profiles;
  std::filesystem::path researchers;
};

struct RawInputs {
  Table<PublicationRecord> publications;
  Table<CrossrefAssertion> crossref;
  Table<OrcidProfile> profiles;
  Table<ResearcherRecord> researchers;

  std::vector<Reject> all_rejects() const;
};

// Parses the four dumps, one task per file when workers > 1. Throws
// InputError if any file cannot be opened.
RawInputs load_inputs(const InputPaths& paths, Date as_of, unsigned workers = 1);

// CSV {file, line, reason}.
void write_reject_log(const std::vector<Reject>& rejects, const std::filesystem::path& path);

}  // namespace ingest
}  // namespace orcidlink
