#include "orcidlink/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <unordered_set>
#include <utility>

#include <nlohmann/json.hpp>

#include "orcidlink/csv.hpp"

namespace orcidlink::ingest {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Thrown inside a line parser; caught per line and turned into a reject.
struct LineError {
  std::string reason;
};

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw LineError{std::string("missing field '") + key + "'"};
  return *it;
}

const std::string& string_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_string()) throw LineError{std::string("field '") + key + "' is not a string"};
  return v.get_ref<const std::string&>();
}

std::int64_t int_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_integer()) throw LineError{std::string("field '") + key + "' is not an integer"};
  return v.get<std::int64_t>();
}

const json& array_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_array()) throw LineError{std::string("field '") + key + "' is not an array"};
  return v;
}

Doi doi_value(const json& v, const char* what) {
  if (!v.is_string()) throw LineError{std::string(what) + " is not a string"};
  auto d = Doi::parse(v.get_ref<const std::string&>());
  if (!d) throw LineError{std::string("invalid doi in ") + what};
  return *d;
}

std::vector<Doi> doi_list(const json& obj, const char* key) {
  std::vector<Doi> out;
  for (const auto& v : array_field(obj, key)) out.push_back(doi_value(v, key));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OrcidId orcid_value(const json& v) {
  if (!v.is_string()) throw LineError{"field 'orcid' is not a string"};
  auto o = OrcidId::parse(v.get_ref<const std::string&>());
  if (!o) throw LineError{"invalid orcid (format or check character)"};
  return *o;
}

// Drives a per-line parser over the stream. `parse_line` returns the row or
// throws LineError; `accept` performs cross-line checks (duplicates) and
// returns an error reason or empty string.
template <class Row, class ParseLine, class Accept>
Table<Row> parse_stream(std::istream& in, std::string_view source, ParseLine parse_line,
                        Accept accept) {
  Table<Row> table;
  std::string line;
  while (std::getline(in, line)) {
    ++table.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto reject = [&](std::string reason) {
      table.rejects.push_back(Reject{std::string(source), table.lines, std::move(reason)});
    };
    if (line.find_first_not_of(" \t") == std::string::npos) {
      reject("empty line");
      continue;
    }
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      reject("invalid JSON");
      continue;
    }
    if (!obj.is_object()) {
      reject("record is not a JSON object");
      continue;
    }
    try {
      Row row = parse_line(obj);
      if (std::string why = accept(row); !why.empty()) {
        reject(std::move(why));
        continue;
      }
      table.rows.push_back(std::move(row));
    } catch (const LineError& e) {
      reject(e.reason);
    } catch (const json::exception& e) {
      reject(std::string("schema error: ") + e.what());
    }
  }
  if (in.bad()) throw InputError("read error in " + std::string(source));
  return table;
}

PublicationRecord parse_publication(const json& obj) {
  PublicationRecord r;
  r.doi = doi_value(field(obj, "doi"), "doi");
  auto year = int_field(obj, "year");
  if (year < 1900 || year > 2100) throw LineError{"year out of range [1900, 2100]"};
  r.year = static_cast<int>(year);
  r.journal_id = string_field(obj, "journal_id");
  r.publisher_id = string_field(obj, "publisher_id");
  if (r.journal_id.empty()) throw LineError{"empty journal_id"};
  if (r.publisher_id.empty()) throw LineError{"empty publisher_id"};
  for (const auto& c : array_field(obj, "for_codes")) {
    if (!c.is_string() || !is_for_code(c.get_ref<const std::string&>()))
      throw LineError{"for_codes entry is not a 2-digit code"};
    r.for_codes.push_back(c.get<std::string>());
  }
  std::sort(r.for_codes.begin(), r.for_codes.end());
  r.for_codes.erase(std::unique(r.for_codes.begin(), r.for_codes.end()), r.for_codes.end());

  const json& authors = array_field(obj, "authors");
  if (authors.empty()) throw LineError{"authors is empty"};
  for (const auto& a : authors) {
    if (!a.is_object()) throw LineError{"author entry is not an object"};
    auto pos = int_field(a, "position");
    if (pos < 0 || pos >= static_cast<std::int64_t>(authors.size()))
      throw LineError{"author position out of range"};
    AuthorMention m;
    m.position = static_cast<std::uint32_t>(pos);
    m.given = string_field(a, "given");
    m.family = string_field(a, "family");
    if (m.family.empty()) throw LineError{"author family name is empty"};
    r.authors.push_back(std::move(m));
  }
  std::sort(r.authors.begin(), r.authors.end(),
            [](const AuthorMention& x, const AuthorMention& y) { return x.position < y.position; });
  for (std::size_t i = 0; i < r.authors.size(); ++i)
    if (r.authors[i].position != i) throw LineError{"author positions are not 0..n-1"};
  return r;
}

CrossrefAssertion parse_assertion(const json& obj) {
  CrossrefAssertion a;
  a.doi = doi_value(field(obj, "doi"), "doi");
  auto pos = int_field(obj, "position");
  if (pos < 0 || pos > std::numeric_limits<std::uint32_t>::max())
    throw LineError{"position out of range"};
  a.position = static_cast<std::uint32_t>(pos);
  a.orcid = orcid_value(field(obj, "orcid"));
  const json& auth = field(obj, "authenticated");
  if (!auth.is_boolean()) throw LineError{"field 'authenticated' is not a boolean"};
  a.authenticated = auth.get<bool>();
  return a;
}

OrcidProfile parse_profile(const json& obj, Date as_of) {
  OrcidProfile p;
  p.orcid = orcid_value(field(obj, "orcid"));
  p.given = string_field(obj, "given");
  p.family = string_field(obj, "family");
  auto created = parse_date(string_field(obj, "created"));
  if (!created) throw LineError{"created is not a YYYY-MM-DD date"};
  if (std::chrono::sys_days{*created} > std::chrono::sys_days{as_of})
    throw LineError{"created date is in the future"};
  p.created = *created;
  p.work_dois = doi_list(obj, "work_dois");
  return p;
}

ResearcherRecord parse_researcher(const json& obj) {
  ResearcherRecord r;
  r.researcher_id = string_field(obj, "researcher_id");
  if (r.researcher_id.empty()) throw LineError{"empty researcher_id"};
  r.given = string_field(obj, "given");
  r.family = string_field(obj, "family");
  if (r.family.empty()) throw LineError{"family name is empty"};
  r.country = string_field(obj, "country");
  if (!is_iso_country_code(r.country)) throw LineError{"country is not an ISO 3166-1 alpha-2 code"};
  if (auto it = obj.find("orcid"); it != obj.end() && !it->is_null()) r.orcid = orcid_value(*it);
  r.publication_dois = doi_list(obj, "publication_dois");
  for (const auto& f : array_field(obj, "funder_ids")) {
    if (!f.is_string() || f.get_ref<const std::string&>().empty())
      throw LineError{"funder_ids entry is not a nonempty string"};
    r.funder_ids.push_back(f.get<std::string>());
  }
  std::sort(r.funder_ids.begin(), r.funder_ids.end());
  r.funder_ids.erase(std::unique(r.funder_ids.begin(), r.funder_ids.end()), r.funder_ids.end());
  return r;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw InputError("cannot open input file: " + p.string());
  return f;
}

}  // namespace

Table<PublicationRecord> parse_publications(std::istream& in, std::string_view source) {
  std::unordered_set<Doi> seen;
  return parse_stream<PublicationRecord>(in, source, parse_publication,
                                         [&](const PublicationRecord& r) -> std::string {
                                           if (!seen.insert(r.doi).second) return "duplicate doi";
                                           return {};
                                         });
}

Table<CrossrefAssertion> parse_crossref_assertions(std::istream& in, std::string_view source) {
  std::set<std::pair<std::string, std::uint32_t>> seen;
  return parse_stream<CrossrefAssertion>(
      in, source, parse_assertion, [&](const CrossrefAssertion& a) -> std::string {
        if (!seen.emplace(a.doi.str(), a.position).second) return "duplicate (doi, position)";
        return {};
      });
}

Table<OrcidProfile> parse_orcid_profiles(std::istream& in, std::string_view source, Date as_of) {
  std::unordered_set<OrcidId> seen;
  return parse_stream<OrcidProfile>(
      in, source, [as_of](const json& o) { return parse_profile(o, as_of); },
      [&](const OrcidProfile& p) -> std::string {
        if (!seen.insert(p.orcid).second) return "duplicate orcid";
        return {};
      });
}

Table<ResearcherRecord> parse_researchers(std::istream& in, std::string_view source) {
  std::unordered_set<std::string> seen;
  return parse_stream<ResearcherRecord>(in, source, parse_researcher,
                                        [&](const ResearcherRecord& r) -> std::string {
                                          if (!seen.insert(r.researcher_id).second)
                                            return "duplicate researcher_id";
                                          return {};
                                        });
}

namespace {
ordered_json doi_array(const std::vector<Doi>& dois) {
  ordered_json a = ordered_json::array();
  for (const auto& d : dois) a.push_back(d.str());
  return a;
}
}  // namespace

std::string to_ndjson(const PublicationRecord& r) {
  ordered_json j;
  j["doi"] = r.doi.str();
  j["year"] = r.year;
  j["journal_id"] = r.journal_id;
  j["publisher_id"] = r.publisher_id;
  j["for_codes"] = r.for_codes;
  ordered_json authors = ordered_json::array();
  for (const auto& a : r.authors) {
    ordered_json m;
    m["position"] = a.position;
    m["given"] = a.given;
    m["family"] = a.family;
    authors.push_back(std::move(m));
  }
  j["authors"] = std::move(authors);
  return j.dump();
}

std::string to_ndjson(const CrossrefAssertion& a) {
  ordered_json j;
  j["doi"] = a.doi.str();
  j["position"] = a.position;
  j["orcid"] = a.orcid.str();
  j["authenticated"] = a.authenticated;
  return j.dump();
}

std::string to_ndjson(const OrcidProfile& p) {
  ordered_json j;
  j["orcid"] = p.orcid.str();
  j["given"] = p.given;
  j["family"] = p.family;
  j["created"] = format_date(p.created);
  j["work_dois"] = doi_array(p.work_dois);
  return j.dump();
}

std::string to_ndjson(const ResearcherRecord& r) {
  ordered_json j;
  j["researcher_id"] = r.researcher_id;
  j["given"] = r.given;
  j["family"] = r.family;
  j["country"] = r.country;
  if (r.orcid) j["orcid"] = r.orcid->str();
  j["publication_dois"] = doi_array(r.publication_dois);
  j["funder_ids"] = r.funder_ids;
  return j.dump();
}

std::vector<Reject> RawInputs::all_rejects() const {
  std::vector<Reject> out;
  for (const auto* v : {&publications.rejects, &crossref.rejects, &profiles.rejects,
                        &researchers.rejects})
    out.insert(out.end(), v->begin(), v->end());
  return out;
}

RawInputs load_inputs(const InputPaths& paths, Date as_of, unsigned workers) {
  // Open everything up front so a missing file fails before any parsing.
  auto pub_in = open_input(paths.publications);
  auto cr_in = open_input(paths.crossref_assertions);
  auto prof_in = open_input(paths.orcid_profiles);
  auto res_in = open_input(paths.researchers);

  auto name = [](const std::filesystem::path& p) { return p.filename().string(); };
  auto policy = workers > 1 ? std::launch::async : std::launch::deferred;

  auto pubs = std::async(policy, [&] { return parse_publications(pub_in, name(paths.publications)); });
  auto cr = std::async(policy, [&] { return parse_crossref_assertions(cr_in, name(paths.crossref_assertions)); });
  auto prof = std::async(policy, [&] { return parse_orcid_profiles(prof_in, name(paths.orcid_profiles), as_of); });
  auto res = std::async(policy, [&] { return parse_researchers(res_in, name(paths.researchers)); });

  RawInputs out;
  out.publications = pubs.get();
  out.crossref = cr.get();
  out.profiles = prof.get();
  out.researchers = res.get();
  return out;
}

void write_reject_log(const std::vector<Reject>& rejects, const std::filesystem::path& path) {
  csv::Table t;
  t.header = {"file", "line", "reason"};
  for (const auto& r : rejects) t.rows.push_back({r.file, std::to_string(r.line), r.reason});
  csv::emit_csv(t, path);
}

}  // namespace orcidlink::ingest
