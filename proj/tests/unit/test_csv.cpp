#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "../support/fixtures.hpp"
#include "orcidlink/csv.hpp"

using namespace orcidlink;

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv::quote("plain"), "plain");
  EXPECT_EQ(csv::quote("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::quote("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv::quote("two\nlines"), "\"two\nlines\"");
  EXPECT_EQ(csv::quote(""), "");
}

TEST(Csv, RenderParseRoundTrip) {
  csv::Table t{{"a", "b"}, {{"1", "x,y"}, {"", "q\"uote"}, {"multi\nline", "z"}}};
  std::istringstream in(csv::render(t));
  auto rows = csv::parse(in);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], t.header);
  EXPECT_EQ(rows[1], t.rows[0]);
  EXPECT_EQ(rows[2], t.rows[1]);
  EXPECT_EQ(rows[3], t.rows[2]);
}

TEST(Csv, UnterminatedQuoteThrows) {
  std::istringstream in("a,\"b\n");
  EXPECT_THROW(csv::parse(in), std::runtime_error);
}

TEST(Csv, AtomicWriteLeavesNoTemporary) {
  auto dir = fixtures::scratch_dir("csv");
  auto path = dir / "t.csv";
  EXPECT_EQ(csv::emit_csv(csv::Table{{"h"}, {{"1"}, {"2"}}}, path), 2u);
  EXPECT_FALSE(std::filesystem::exists(dir / "t.csv.tmp"));
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "h\n1\n2\n");
  std::filesystem::remove_all(dir);
}

TEST(Csv, FixedFormatting) {
  EXPECT_EQ(csv::format_fixed(38.515, 2).size(), 5u);
  EXPECT_EQ(csv::format_fixed(0.5, 6), "0.500000");
  EXPECT_EQ(csv::format_fixed(100.0, 2), "100.00");
}
