#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace orcidlink::csv {

using Row = std::vector<std::string>;

// A table with a fixed header. Producers append rows already in their
// documented order; the writer does not reorder.
struct Table {
  Row header;
  std::vector<Row> rows;
};

// RFC 4180: a field is quoted iff it contains a comma, quote, CR or LF;
// embedded quotes are doubled.
std::string quote(std::string_view field);

std::string render(const Table& table);

// Writes to `<path>.tmp` then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Renders and atomically writes the table; returns the number of data rows.
std::size_t emit_csv(const Table& table, const std::filesystem::path& path);

// Parses RFC 4180 text (quoted fields may span lines). Throws
// std::runtime_error on an unterminated quote.
std::vector<Row> parse(std::istream& in);

std::string format_fixed(double value, int decimals);

}  // namespace orcidlink::csv
