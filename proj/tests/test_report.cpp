#include <cstdio>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "robreg/report.hpp"

using namespace robreg;
using namespace robreg::report;

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789}) CHECK(std::stod(num(v)) == v);
  CHECK(num(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(num(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(num(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("csv layout") {
  Table t;
  t.add_meta("seed", "1");
  t.add_meta("tool", "robreg");
  t.header = {"a", "b"};
  t.add_row({"1", "x,y"});
  t.add_row({"say \"hi\"", ""});
  CHECK(to_csv(t) == "# meta: seed=1;tool=robreg\na,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
  CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("hash is stable") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(hex64(fnv1a("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("inline matrices and vectors") {
  const Mat A = parse_matrix("[[1, 2], [3, 4.5]]");
  CHECK(A(1, 1) == 4.5);
  CHECK(parse_vector("[1, -2e-3]")[1] == -2e-3);
  const CMat C = parse_complex_matrix("[[[0, 1], 2], [3, [1, -1]]]");
  CHECK(C(0, 0) == std::complex<double>(0, 1));
  CHECK(C(1, 1) == std::complex<double>(1, -1));
  CHECK_THROWS_AS(parse_matrix("[[1, 2], [3]]"), ConfigError);
  CHECK_THROWS_AS(parse_matrix("[[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_vector("[1, \"a\"]"), ConfigError);
  CHECK(parse_vector("3") == Vec::Constant(1, 3.0));  // scalar shorthand for 1-D points
  CHECK_THROWS_AS(parse_vector("[]"), ConfigError);
}

TEST_CASE("matrix market files") {
  const std::string path = "robreg_test_matrix.mtx";
  {
    std::ofstream os(path);
    os << "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 2.0\n3 1 -1.5\n2 2 4\n";
  }
  const CMat A = read_matrix_market(path);
  CHECK(A(0, 2).real() == -1.5);
  CHECK(A(2, 0).real() == -1.5);
  CHECK(A(1, 1).real() == 4.0);
  {
    std::ofstream os(path);
    os << "%%MatrixMarket matrix array complex general\n2 1\n1 2\n3 -4\n";
  }
  const CMat B = read_matrix_market(path);
  CHECK(B(1, 0) == std::complex<double>(3, -4));
  {
    std::ofstream os(path);
    os << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n";
  }
  CHECK_THROWS_AS(read_matrix_market(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_matrix_market("does_not_exist.mtx"), ConfigError);
}
