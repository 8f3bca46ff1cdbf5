#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "dab/config.hpp"
#include "dab/errors.hpp"

using namespace dab;

TEST_CASE("key=value parsing with comments and whitespace") {
  Config cfg = Config::from_string(
      "# leading comment\n"
      "alpha = 1.5\n"
      "  name =  hello world \n"
      "\n"
      "count=42\n");
  CHECK(cfg.get_double("alpha") == 1.5);
  CHECK(cfg.get_string("name") == "hello world");
  CHECK(cfg.get_int("count") == 42);
  cfg.require_all_consumed();
}

TEST_CASE("duplicate keys are rejected") {
  CHECK_THROWS_AS(Config::from_string("a=1\na=2\n"), config_error);
}

TEST_CASE("missing required key names the key") {
  Config cfg = Config::from_string("a=1\n");
  try {
    cfg.get_double("missing_thing");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("missing_thing") != std::string::npos);
  }
}

TEST_CASE("fallback values apply only when the key is absent") {
  Config cfg = Config::from_string("x=2.5\n");
  CHECK(cfg.get_double("x", 9.0) == 2.5);
  CHECK(cfg.get_double("y", 9.0) == 9.0);
  CHECK(cfg.get_int("k", 7) == 7);
  CHECK(cfg.get_string("s", "dflt") == "dflt");
  CHECK(cfg.get_bool("b", true) == true);
  cfg.require_all_consumed();
}

TEST_CASE("boolean parsing accepts true/false and rejects junk") {
  Config cfg = Config::from_string("t=true\nf=false\nbad=maybe\n");
  CHECK(cfg.get_bool("t", false) == true);
  CHECK(cfg.get_bool("f", true) == false);
  CHECK_THROWS_AS(cfg.get_bool("bad", false), config_error);
}

TEST_CASE("malformed numbers are rejected with the key name") {
  Config cfg = Config::from_string("v=12x\nw=\n");
  try {
    cfg.get_double("v");
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("v") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg.get_double("w"), config_error);
}

TEST_CASE("unsigned parsing rejects negatives") {
  Config cfg = Config::from_string("s=-3\n");
  CHECK_THROWS_AS(cfg.get_u64("s", 0), config_error);
}

TEST_CASE("comma lists parse element-wise") {
  Config cfg = Config::from_string("ws=0.25, 0.75\nns= 10,20 ,30\n");
  const auto ws = cfg.get_double_list("ws");
  REQUIRE(ws.size() == 2);
  CHECK(ws[0] == 0.25);
  CHECK(ws[1] == 0.75);
  const auto ns = cfg.get_int_list("ns");
  REQUIRE(ns.size() == 3);
  CHECK(ns[0] == 10);
  CHECK(ns[2] == 30);
}

TEST_CASE("unconsumed keys are reported by name") {
  Config cfg = Config::from_string("used=1\nstray_key=2\n");
  CHECK(cfg.get_int("used") == 1);
  try {
    cfg.require_all_consumed();
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("stray_key") != std::string::npos);
  }
}

TEST_CASE("set overrides or adds a key") {
  Config cfg = Config::from_string("seed=1\n");
  cfg.set("seed", "99");
  CHECK(cfg.get_u64("seed", 0) == 99);
  cfg.set("fresh", "3.5");
  CHECK(cfg.get_double("fresh") == 3.5);
}

TEST_CASE("reading a missing file raises an io error") {
  CHECK_THROWS_AS(Config::from_file("/nonexistent/path/cfg.txt"), io_error);
}

TEST_CASE("lines without an equals sign are rejected") {
  CHECK_THROWS_AS(Config::from_string("just a line\n"), config_error);
}
