#include <sstream>

#include "doctest.h"
#include "lexsim/error.hpp"
#include "lexsim/parameters.hpp"
#include "oracle.hpp"

using namespace lexsim;

TEST_CASE("defaults match the published table") {
  const Parameters p;
  CHECK(p.min_act == -0.2);
  CHECK(p.max_act == 1.0);
  CHECK(p.decay_rate == 0.07);
  CHECK(p.min_rest == -0.2);
  CHECK(p.max_rest == 0.0);
  CHECK_FALSE(p.max_opb.has_value());
  CHECK(p.input_rest == 1.0);
  CHECK(p.lang_rest == -0.2);
  CHECK(p.sem_rest == -0.2);
  CHECK(p.io_multiplier == 0.2);
  CHECK(p.ss_multiplier == 0.0);
  CHECK(p.criterion == 0.72);
  CHECK(p.shortlist_input_threshold == 0.7);
  CHECK(p.shortlist_output_threshold == 0.5);
  CHECK(p.timestep_multiplier == 1.0);
  CHECK(p.timestep_adder == 0.0);
  CHECK(p.op_alpha == 0.03);
  CHECK(p.os_alpha == 0.03);
  CHECK(p.po_alpha == 0.03);
  CHECK(p.ps_alpha == 0.3);
  CHECK(p.so_alpha == 0.03);
  CHECK(p.sp_alpha == 0.3);
  CHECK(p.lo_alpha == 0.0);
  CHECK(p.lp_alpha == 0.0);
  CHECK(p.ol_alpha == 0.0);
  CHECK(p.pl_alpha == 0.0);
  CHECK(p.oo_gamma == -0.001);
  CHECK(p.pp_gamma == -0.001);
  CHECK(p.ss_gamma == -0.5);
  CHECK(p.ll_gamma == 0.0);
  CHECK(p.max_cycles == 40);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("published table loads verbatim as a parameter file") {
  Parameters p;
  p.oo_gamma = -0.3;
  p.load_file(oracle::fixture("published.params"));
  CHECK(p.oo_gamma == -0.001);
  REQUIRE(p.max_opb.has_value());
  CHECK(*p.max_opb == 0.6402259325203161);
  CHECK(p.criterion == 0.72);
}

TEST_CASE("set and get by identifier") {
  Parameters p;
  p.set("OO_gamma", "-0.0001");
  CHECK(p.oo_gamma == -0.0001);
  CHECK(*p.get("OO_gamma") == -0.0001);
  p.set("max_cycles", "25");
  CHECK(p.max_cycles == 25);
  CHECK_THROWS_AS(p.set("max_cycles", "2.5"), ConfigError);
  CHECK_THROWS_AS(p.set("DECAY_RATE", "fast"), ConfigError);
  CHECK_FALSE(p.get("MAX_OPB").has_value());
}

TEST_CASE("unknown name lists every valid identifier") {
  Parameters p;
  try {
    p.set("OO_GAMMA", "1");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const auto& name : Parameters::names()) CHECK(msg.find(name) != std::string::npos);
  }
  CHECK(Parameters::names().size() == 35);
}

TEST_CASE("write then load reproduces every value") {
  Parameters a;
  a.oo_gamma = -0.123456789012345;
  a.max_opb = 0.6402259325203161;
  a.max_cycles = 77;
  std::stringstream s;
  a.write(s);
  Parameters b;
  b.load(s);
  for (const auto& name : Parameters::names()) CHECK(a.get(name) == b.get(name));
}

TEST_CASE("validation") {
  Parameters p;
  p.oo_gamma = 0.1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = Parameters{};
  p.max_cycles = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = Parameters{};
  p.min_act = 2.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  std::istringstream bad("OO_gamma -0.1\n");
  CHECK_THROWS_AS(p.load(bad), ConfigError);
}

TEST_CASE("predicted reaction time is linear in cycles") {
  Parameters p;
  p.timestep_multiplier = 25.0;
  p.timestep_adder = 500.0;
  CHECK(p.predicted_rt(0) == 500.0);
  CHECK(p.predicted_rt(32) == 1300.0);
}

TEST_CASE("double formatting round-trips") {
  for (double v : {0.1, -0.001, 100.07, 1e-300, 0.6402259325203161}) CHECK(*parse_double(format_double(v)) == v);
  CHECK_FALSE(parse_double("1.5x").has_value());
  CHECK_FALSE(parse_double("").has_value());
}
