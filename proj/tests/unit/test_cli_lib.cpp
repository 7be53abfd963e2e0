#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "gpn/cli.hpp"
#include "gpn/errors.hpp"

using namespace gpn;

TEST_CASE("format_double survives a read round trip") {
  for (const double v : {0.1, 1.0 / 3.0, 2.718281828459045, 1e300, 5e-324,
                         -0.0, 123456789.123456789}) {
    const std::string s = cli::format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("csv loading: happy path") {
  std::istringstream in("x,y\n0.0,1.5\n0.5,2.5\n1.0,3.5\n");
  const Dataset d = cli::load_csv(in);
  REQUIRE(d.size() == 3);
  CHECK(d.x[1] == 0.5);
  CHECK(d.y[2] == 3.5);
}

TEST_CASE("csv loading tolerates spaces and blank lines") {
  std::istringstream in("x, y\n 0.0 , 1.5\n\n1.0, 3.5\n");
  const Dataset d = cli::load_csv(in);
  CHECK(d.size() == 2);
}

TEST_CASE("csv loading: error cases carry line numbers") {
  {
    std::istringstream in("");
    CHECK_THROWS_AS(cli::load_csv(in), CsvFormatError);
  }
  {
    std::istringstream in("a,b\n1,2\n");
    try {
      cli::load_csv(in);
      FAIL("expected CsvFormatError");
    } catch (const CsvFormatError& e) {
      CHECK(e.line() == 1);
    }
  }
  {
    std::istringstream in("x,y\n0.0,1.0\nbroken,2.0\n");
    try {
      cli::load_csv(in);
      FAIL("expected CsvFormatError");
    } catch (const CsvFormatError& e) {
      CHECK(e.line() == 3);
    }
  }
  {
    std::istringstream in("x,y\n0.0,1.0,9\n");
    CHECK_THROWS_AS(cli::load_csv(in), CsvFormatError);
  }
  {
    std::istringstream in("x,y\n");
    CHECK_THROWS_AS(cli::load_csv(in), CsvFormatError);
  }
}

TEST_CASE("csv loading: data-validity problems") {
  {
    std::istringstream in("x,y\n0.5,1.0\n0.2,2.0\n");
    CHECK_THROWS_AS(cli::load_csv(in), UnsortedPoints);
  }
  {
    std::istringstream in("x,y\n0.5,1.0\n0.5,2.0\n");
    CHECK_THROWS_AS(cli::load_csv(in), DuplicatePoints);
  }
}
