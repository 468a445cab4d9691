#include <random>
#include <sstream>

#include "doctest.h"
#include "lexsim/error.hpp"
#include "lexsim/lexicon.hpp"
#include "oracle.hpp"

using namespace lexsim;

TEST_CASE("parses a row in column order") {
  const auto lex = parse_lexicon(std::string_view("AARDE,100.07,ard@,100.07,EARTH,24.87,3T,24.87\n"));
  REQUIRE(lex.size() == 1);
  const auto& e = lex.entries()[0];
  CHECK(e.ortho_a == "AARDE");
  CHECK(e.freq_a == 100.07);
  CHECK(e.phono_a == "ard@");
  CHECK(e.ortho_b == "EARTH");
  CHECK(e.phono_b == "3T");
  CHECK(e.freq_b == 24.87);
  CHECK(lex.language_a() == "NL");
  CHECK(lex.language_b() == "EN");
}

TEST_CASE("header only gives an empty lexicon") {
  const auto lex = parse_lexicon(std::string_view("NL:O,NL:f,NL:P,NL:f,EN:O,EN:f,EN:P,EN:f\n"));
  CHECK(lex.empty());
  CHECK(lex.max_opb() == 0.0);
}

TEST_CASE("header supplies language tags") {
  const auto lex = parse_lexicon(std::string_view("DE:O,DE:f,DE:P,DE:f,FR:O,FR:f,FR:P,FR:f\nHUND,5,hUnt,5,CHIEN,5,SjE,5\n"));
  CHECK(lex.language_a() == "DE");
  CHECK(lex.language_b() == "FR");
}

TEST_CASE("malformed rows are rejected with their row number") {
  const std::string header = "NL:O,NL:f,NL:P,NL:f,EN:O,EN:f,EN:P,EN:f\n";
  try {
    parse_lexicon(header + "AAP,1,ap,1,MONKEY,1,mVNkI,1\nAAP,1,ap,1,MONKEY,1,mVNkI\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.row() == 3);
  }
  CHECK_THROWS_AS(parse_lexicon(header + "AAP,-1,ap,1,MONKEY,1,mVNkI,1\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon(header + "AAP,1,ap,1,MONKEY,lots,mVNkI,1\n"), ParseError);
  CHECK_THROWS_AS(parse_lexicon(header + "AAP,1,,1,MONKEY,1,mVNkI,1\n"), ParseError);
}

TEST_CASE("duplicate policy") {
  const std::string text = "ROOM,1,rom,1,CREAM,1,krim,1\nROOM,1,rom,1,SOUR,1,saU@,1\n";
  CHECK_THROWS_AS(parse_lexicon(text), ValidationError);
  LexiconOptions allow;
  allow.duplicates = DuplicatePolicy::allow;
  CHECK(parse_lexicon(text, allow).size() == 2);
  // The same form in both languages is not a duplicate.
  CHECK(parse_lexicon(std::string_view("TUNNEL,1,tYn@l,1,TUNNEL,1,tVn@l,1\n")).size() == 1);
}

TEST_CASE("orthographic forms are upper-cased, phonology kept exact") {
  const auto lex = parse_lexicon(std::string_view("room,1,rom,1,cream,1,kRim,1\n"));
  CHECK(lex.entries()[0].ortho_a == "ROOM");
  CHECK(lex.entries()[0].phono_b == "kRim");
}

TEST_CASE("L2 scaling divides language B frequencies by four") {
  LexiconOptions o;
  o.scale_l2 = true;
  const auto lex = parse_lexicon(std::string_view("AAP,28.56,ap,28.56,MONKEY,8.38,mVNkI,8.38\n"), o);
  CHECK(lex.entries()[0].freq_a == 28.56);
  CHECK(lex.entries()[0].freq_b == 8.38 / 4.0);
}

TEST_CASE("opb") {
  CHECK(opb(0.0) == 0.0);
  CHECK(opb(0.0, OpbFormula::per_million) == 0.0);
  // log10(1 + 1000 * 100.07) = log10(100071)
  CHECK(opb(100.07) == doctest::Approx(5.000308239670012).epsilon(1e-15));
  CHECK(opb(100.07, OpbFormula::per_million) == doctest::Approx(2.0046222657007826).epsilon(1e-15));
  CHECK_THROWS_AS(opb(-1.0), DomainError);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(0.0, 1000.0);
  for (int i = 0; i < 500; ++i) {
    double a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    CHECK(opb(a) <= opb(b));
    CHECK(opb(a, OpbFormula::per_million) <= opb(b, OpbFormula::per_million));
  }
}

TEST_CASE("rest activation") {
  const Parameters p;
  CHECK(rest_activation(0.0, 3.0, p) == -0.2);
  CHECK(rest_activation(0.0, 0.0, p) == -0.2);
  const double f = 191.95;
  CHECK(rest_activation(f, opb(f), p) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rest_activation(f, 2.0 * opb(f), p) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(rest_activation(f, 0.5 * opb(f), p) == 0.0);
  CHECK_THROWS_AS(rest_activation(1.0, 0.0, p), DomainError);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(0.0, 500.0);
  for (int i = 0; i < 500; ++i) {
    const double r = rest_activation(d(rng), opb(250.0), p);
    CHECK(r >= -0.2);
    CHECK(r <= 0.0);
  }
}

TEST_CASE("max opb covers every loaded reading") {
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  CHECK(lex.max_opb() == opb(191.95));
}

TEST_CASE("bundled table fixture") {
  const auto lex = load_lexicon(oracle::fixture("table1.csv"));
  CHECK(lex.size() == 10);
  // Phonological nodes take their sibling's frequency by construction.
  for (const auto& e : lex.entries()) CHECK(e.freq_a > 0.0);
  CHECK(lex.entries()[0].ortho_b == "OFFER");
  CHECK(lex.entries()[0].freq_b == 18.68);
}

TEST_CASE("serialization round-trips numeric content") {
  const std::string text =
      "NL:O,NL:f,NL:P,NL:f,EN:O,EN:f,EN:P,EN:f\n"
      "AARDE,100.07,ard@,100.07,EARTH,24.87,3T,24.87\n"
      "X,0.1,x,0.1,Y,0.30000000000000004,y,0.30000000000000004\n";
  const auto lex = parse_lexicon(text);
  std::ostringstream out;
  write_lexicon(out, lex);
  CHECK(out.str() == text);
  const auto again = parse_lexicon(out.str());
  CHECK(again.entries() == lex.entries());

  const auto table = load_lexicon(oracle::fixture("homographs.csv"));
  std::ostringstream t;
  write_lexicon(t, table);
  CHECK(parse_lexicon(t.str()).entries() == table.entries());
}
