#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "midlayer/report.hpp"

using namespace midlayer;

TEST_CASE("object keys are emitted sorted and output is byte-stable") {
  Json j = Json::object();
  j["zeta"] = 1;
  j["alpha"] = "x";
  j["mid"] = Json::array();
  j["mid"].push_back(Rat(10, 28));
  std::string a = j.dump();
  std::string b = j.dump();
  CHECK(a == b);
  CHECK(a == "{\"alpha\":\"x\",\"mid\":[\"5/14\"],\"zeta\":1}");
  std::string pretty = j.dump(2);
  CHECK(pretty.find("\"alpha\": \"x\"") != std::string::npos);
  CHECK(pretty.find('\n') != std::string::npos);
}

TEST_CASE("doubles carry 17 significant digits and round-trip") {
  double v = 0.1 + 0.2;
  std::string s = format_double17(v);
  CHECK(std::stod(s) == v);
  CHECK(format_double17(1.0) == "1");
  CHECK(format_double17(std::numeric_limits<double>::infinity()) == "\"inf\"");
  Json j = Json::object();
  j["x"] = 2.8903717578961645;
  CHECK(j.dump() == "{\"x\":2.8903717578961645}");
}

TEST_CASE("string escaping") {
  Json j = Json::object();
  j["s"] = "a\"b\\c\nd";
  CHECK(j.dump() == "{\"s\":\"a\\\"b\\\\c\\nd\"}");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("q\"q") == "\"q\"\"q\"");
}

TEST_CASE("rationals serialize as exact strings") {
  Json j = Json::object();
  j["z"] = Rat(18);
  j["xi"] = Rat(7, 4);
  CHECK(j.dump() == "{\"xi\":\"7/4\",\"z\":\"18\"}");
}
