#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proplab/serialization.hpp"

using namespace proplab;
using namespace proplab::serialization;

TEST_CASE("group presentations round-trip bit exactly") {
  for (const auto& grp :
       {fuchsian::schottky_group(3.7, 1.5), fuchsian::genus2_group()}) {
    const std::string text = group_to_json(grp);
    const auto back = group_from_json(text);
    REQUIRE(back.rank() == grp.rank());
    CHECK(back.kind == grp.kind);
    for (int i = 0; i < grp.rank(); ++i) {
      // 17 significant digits reproduce doubles exactly
      CHECK(back.generators[i].a == grp.generators[i].a);
      CHECK(back.generators[i].b == grp.generators[i].b);
      CHECK(back.generators[i].c == grp.generators[i].c);
      CHECK(back.generators[i].d == grp.generators[i].d);
    }
  }
}

TEST_CASE("entries are serialized as decimal strings") {
  const auto grp = fuchsian::schottky_group(4.0, 1.0);
  const std::string text = group_to_json(grp);
  CHECK(text.find("\"kind\": \"free-schottky\"") != std::string::npos);
  CHECK(text.find("\"a\": \"") != std::string::npos);
}

TEST_CASE("malformed group documents are rejected") {
  CHECK_THROWS(group_from_json("{\"kind\": \"nope\", \"generators\": []}"));
  CHECK_THROWS(group_from_json("not json"));
}

TEST_CASE("certificates round-trip") {
  margulis::ObstructionCertificate cert;
  cert.word1 = fuchsian::parse_word("ab", 2);
  cert.word2 = fuchsian::parse_word("aB", 2);
  cert.mu1 = 0.25;
  cert.mu2 = -1.5;
  cert.general_position = true;
  cert.verdict = margulis::Verdict::Obstructed;

  const auto back = certificate_from_json(certificate_to_json(cert));
  CHECK(back.word1 == cert.word1);
  CHECK(back.word2 == cert.word2);
  CHECK(back.mu1 == cert.mu1);
  CHECK(back.mu2 == cert.mu2);
  CHECK(back.general_position);
  CHECK(back.verdict == margulis::Verdict::Obstructed);
}

TEST_CASE("report tables") {
  std::vector<cocycle::GeodesicLoopReport> reports(2);
  reports[0].word = fuchsian::parse_word("a", 2);
  reports[0].length = 1.25;
  reports[0].integral_f = -0.5;
  reports[0].mu_direct = 0.125;
  reports[0].mu_integral = 0.125;
  reports[1].word = fuchsian::parse_word("aB", 2);
  reports[1].length = 2.5;

  const std::string csv = reports_to_csv(reports);
  CHECK(csv.rfind("word;length;integral_f;mu_direct;mu_integral\n", 0) == 0);
  CHECK(csv.find("\na;1.25;-0.5;0.125;0.125\n") != std::string::npos);
  CHECK(csv.find("\naB;2.5;") != std::string::npos);

  const std::string json = reports_to_json(reports);
  CHECK(json.find("\"word\": \"aB\"") != std::string::npos);
}
