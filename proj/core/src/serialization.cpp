#include "proplab/serialization.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace proplab::serialization {

using nlohmann::json;

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string kind_name(fuchsian::GroupKind kind) {
  return kind == fuchsian::GroupKind::FreeSchottky ? "free-schottky" : "genus2-cocompact";
}

fuchsian::GroupKind kind_from_name(const std::string& name) {
  if (name == "free-schottky") return fuchsian::GroupKind::FreeSchottky;
  if (name == "genus2-cocompact") return fuchsian::GroupKind::Genus2Cocompact;
  throw std::invalid_argument("unknown group kind: " + name);
}

}  // namespace

std::string group_to_json(const fuchsian::GroupPresentation& grp) {
  json j;
  j["kind"] = kind_name(grp.kind);
  j["generators"] = json::array();
  for (const auto& g : grp.generators) {
    j["generators"].push_back({{"a", format17(g.a)},
                               {"b", format17(g.b)},
                               {"c", format17(g.c)},
                               {"d", format17(g.d)}});
  }
  return j.dump(2);
}

fuchsian::GroupPresentation group_from_json(const std::string& text) {
  const json j = json::parse(text);
  fuchsian::GroupPresentation grp;
  grp.kind = kind_from_name(j.at("kind").get<std::string>());
  for (const auto& entry : j.at("generators")) {
    grp.generators.emplace_back(std::stod(entry.at("a").get<std::string>()),
                                std::stod(entry.at("b").get<std::string>()),
                                std::stod(entry.at("c").get<std::string>()),
                                std::stod(entry.at("d").get<std::string>()));
  }
  return grp;
}

std::string certificate_to_json(const margulis::ObstructionCertificate& cert) {
  json j;
  j["word1"] = fuchsian::to_string(cert.word1);
  j["word2"] = fuchsian::to_string(cert.word2);
  j["mu1"] = cert.mu1;
  j["mu2"] = cert.mu2;
  j["general_position"] = cert.general_position;
  j["verdict"] = cert.verdict == margulis::Verdict::Obstructed ? "obstructed" : "inconclusive";
  return j.dump(2);
}

margulis::ObstructionCertificate certificate_from_json(const std::string& text) {
  const json j = json::parse(text);
  margulis::ObstructionCertificate cert;
  cert.word1 = fuchsian::parse_word(j.at("word1").get<std::string>(), 26);
  cert.word2 = fuchsian::parse_word(j.at("word2").get<std::string>(), 26);
  cert.mu1 = j.at("mu1").get<double>();
  cert.mu2 = j.at("mu2").get<double>();
  cert.general_position = j.at("general_position").get<bool>();
  cert.verdict = j.at("verdict").get<std::string>() == "obstructed"
                     ? margulis::Verdict::Obstructed
                     : margulis::Verdict::Inconclusive;
  return cert;
}

std::string reports_to_csv(const std::vector<cocycle::GeodesicLoopReport>& reports) {
  std::string out = "word;length;integral_f;mu_direct;mu_integral\n";
  for (const auto& r : reports) {
    out += fuchsian::to_string(r.word);
    out += ';';
    out += format17(r.length);
    out += ';';
    out += format17(r.integral_f);
    out += ';';
    out += format17(r.mu_direct);
    out += ';';
    out += format17(r.mu_integral);
    out += '\n';
  }
  return out;
}

std::string reports_to_json(const std::vector<cocycle::GeodesicLoopReport>& reports) {
  json j = json::array();
  for (const auto& r : reports) {
    j.push_back({{"word", fuchsian::to_string(r.word)},
                 {"length", r.length},
                 {"integral_f", r.integral_f},
                 {"mu_direct", r.mu_direct},
                 {"mu_integral", r.mu_integral}});
  }
  return j.dump(2);
}

}  // namespace proplab::serialization
