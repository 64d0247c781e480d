#include "doctest.h"

#include <dsvar/csv_io.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dsvar;

TEST_CASE("well-formed numeric file") {
  std::string text = "a,b,c\n";
  for (int t = 0; t < 480; ++t) text += std::to_string(t) + ",1.5,-2e-3\n";
  const auto m = parse_csv(text);
  CHECK(m.length() == 480);
  CHECK(m.dimension() == 3);
  CHECK(m.names == std::vector<std::string>{"a", "b", "c"});
  CHECK(m.values(479, 0) == 479.0);
  CHECK(m.dates.empty());
}

TEST_CASE("leading date column is metadata") {
  const auto m = parse_csv("date,x,y,z\n2020-01,1,2,3\n2020-02,4,5,6\n");
  CHECK(m.dimension() == 3);
  CHECK(m.dates == std::vector<std::string>{"2020-01", "2020-02"});
  const auto n = parse_csv("when,x,y\n1960m1,1,2\n1960m2,3,4\n");
  CHECK(n.dates.size() == 2);
  const auto q = parse_csv("\xEF\xBB\xBF\"x\",\"y\"\r\n1,2\r\n3,4\r\n");
  CHECK(q.names == std::vector<std::string>{"x", "y"});
  CHECK(q.values(1, 1) == 4.0);
}

TEST_CASE("missing value names line and column") {
  try {
    parse_csv("x,y,z\n1,2,3\n4,,6\n", "f.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 2);
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_csv("x,y\n1,NA\n"), ParseError);
}

TEST_CASE("ragged and non-numeric rows") {
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n3\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n3,abc\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("x\n1\n2\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(""), ParseError);
  CHECK_THROWS_AS(ingest_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 0.0, 1e22}) {
    const std::string s = format_number(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("matrix round trip through a file") {
  const auto dir = std::filesystem::temp_directory_path() / "dsvar_csv_test";
  std::filesystem::create_directories(dir);
  TimeSeriesMatrix m(Matrix::Random(7, 2), {"alpha", "be,ta"});
  m.dates = {"d1", "d2", "d3", "d4", "d5", "d6", "d7"};
  const std::string path = (dir / "m.csv").string();
  write_matrix_csv(path, m);
  const auto back = ingest_csv(path);
  CHECK(back.values == m.values);
  CHECK(back.names == m.names);
  CHECK(back.dates == m.dates);
  std::filesystem::remove_all(dir);
}
