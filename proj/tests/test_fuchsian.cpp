#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "proplab/fuchsian.hpp"

using namespace proplab;
using namespace proplab::fuchsian;
using halfplane::Moebius;

namespace {

std::mt19937_64 rng(777);

double dist(const Moebius& a, const Moebius& b) {
  return std::abs(a.a - b.a) + std::abs(a.b - b.b) + std::abs(a.c - b.c) + std::abs(a.d - b.d);
}

double dist_pm_identity(const Moebius& m) {
  const Moebius id = Moebius::identity();
  const Moebius neg = Moebius::raw(-1.0, 0.0, 0.0, -1.0);
  return std::min(dist(m, id), dist(m, neg));
}

Word random_reduced_word(int rank, int len) {
  std::uniform_int_distribution<int> L(1, 2 * rank);
  std::vector<int> letters;
  while (static_cast<int>(letters.size()) < len) {
    const int raw = L(rng);
    const int letter = (raw % 2 == 1) ? (raw + 1) / 2 : -(raw / 2);
    if (!letters.empty() && letters.back() == -letter) continue;
    letters.push_back(letter);
  }
  return Word(letters);
}

// Independent conjugacy-class oracle: orbits of cyclically-reduced words under
// rotation, built by explicit partition.
int brute_force_class_count(int rank, int maxlen) {
  std::set<std::vector<int>> orbits;
  std::vector<std::vector<int>> words{{}};
  for (int len = 1; len <= maxlen; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& w : words) {
      for (int l = 1; l <= rank; ++l) {
        for (int s : {l, -l}) {
          if (!w.empty() && w.back() == -s) continue;
          auto v = w;
          v.push_back(s);
          next.push_back(v);
        }
      }
    }
    for (auto w : next) {
      if (w.size() >= 2 && w.front() == -w.back()) continue;  // not cyclically reduced
      // canonical rotation: the smallest in plain lexicographic order of the
      // rank encoding (any total order works for orbit counting)
      auto enc = [](const std::vector<int>& u) {
        std::vector<int> e;
        for (int l : u) e.push_back(2 * (std::abs(l) - 1) + (l < 0));
        return e;
      };
      std::vector<int> best = w;
      for (size_t r = 1; r < w.size(); ++r) {
        std::rotate(w.begin(), w.begin() + 1, w.end());
        if (enc(w) < enc(best)) best = w;
      }
      orbits.insert(best);
    }
    words = std::move(next);
  }
  return static_cast<int>(orbits.size());
}

}  // namespace

TEST_CASE("word reduction and algebra") {
  CHECK(Word({1, -1}).empty());
  CHECK(Word({1, 2, -2, -1}).empty());
  CHECK(Word({1, 2, -2, 3}).letters == std::vector<int>{1, 3});
  CHECK(inverse(Word({1, 2})).letters == std::vector<int>{-2, -1});
  CHECK(concat(Word({1, 2}), Word({-2, 1})).letters == std::vector<int>{1, 1});
  CHECK(cyclically_reduced(Word({2, 1, 3, -1, -2})).letters == std::vector<int>{3});
  CHECK(is_proper_power(Word({1, 2, 1, 2})));
  CHECK_FALSE(is_proper_power(Word({1, 2, 1})));
  CHECK(to_string(Word({1, -2, 3})) == "aBc");
  CHECK(parse_word("aBc", 3).letters == std::vector<int>{1, -2, 3});
  CHECK_THROWS_AS(parse_word("x", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("a!", 2), std::invalid_argument);
}

TEST_CASE("evaluate words") {
  const auto grp = schottky_group(4.0, 1.0);

  CHECK(dist(evaluate(grp, Word{}), Moebius::identity()) < 1e-15);
  CHECK(dist(evaluate(grp, Word({1, -1})), Moebius::identity()) < 1e-15);

  const Moebius prod = (grp.generators[0] * grp.generators[1]).normalized();
  CHECK(dist(evaluate(grp, Word({1, 2})), prod) < 1e-12);

  CHECK_THROWS_AS(evaluate(grp, Word({3})), std::out_of_range);

  SUBCASE("homomorphism over concatenation") {
    for (int trial = 0; trial < 100; ++trial) {
      const Word w1 = random_reduced_word(2, 1 + trial % 4);
      const Word w2 = random_reduced_word(2, 1 + (trial / 2) % 4);
      const Moebius m1 = evaluate(grp, w1);
      const Moebius m2 = evaluate(grp, w2);
      const Moebius lhs = evaluate(grp, concat(w1, w2));
      const Moebius rhs = m1 * m2;
      // Cancellation when the concatenation reduces makes the error scale
      // with the product of the factor norms.
      const auto norm1 = [](const Moebius& m) {
        return std::abs(m.a) + std::abs(m.b) + std::abs(m.c) + std::abs(m.d);
      };
      CHECK(dist(lhs, rhs) / std::max(1.0, norm1(m1) * norm1(m2)) < 1e-10);
    }
  }
}

TEST_CASE("schottky certificate") {
  SUBCASE("the reference configuration is certified") {
    const auto grp = schottky_group(4.0, 1.0);
    REQUIRE(grp.certificate.has_value());
    CHECK(grp.certificate->margin > 0.0);
    CHECK(grp.certificate->regions.size() == 4);
  }

  SUBCASE("collapsing translation length fails ping-pong") {
    CHECK_THROWS_AS(schottky_group(0.05, 1.0), PingPongError);
  }

  SUBCASE("certified freeness: short words stay far from the identity") {
    const auto grp = schottky_group(4.0, 1.0);
    double min_norm = 1e18;
    for (int trial = 0; trial < 200; ++trial) {
      const Word w = random_reduced_word(2, 1 + trial % 6);
      min_norm = std::min(min_norm, dist_pm_identity(evaluate(grp, w)));
    }
    CHECK(min_norm > 0.1);
  }

  SUBCASE("all short words are hyperbolic") {
    const auto grp = schottky_group(4.0, 1.0);
    // every reduced word of length <= 4
    std::vector<std::vector<int>> words{{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<std::vector<int>> next;
      for (const auto& w : words)
        for (int l : {1, -1, 2, -2}) {
          if (!w.empty() && w.back() == -l) continue;
          auto v = w;
          v.push_back(l);
          next.push_back(v);
        }
      for (const auto& w : next) {
        Word word;
        word.letters = w;
        CHECK(std::abs(evaluate(grp, word).trace()) > 2.0);
      }
      words = std::move(next);
    }
  }
}

TEST_CASE("genus-2 group") {
  const auto grp = genus2_group();
  REQUIRE(grp.rank() == 4);

  SUBCASE("surface relation") {
    const Moebius rel = evaluate(grp, parse_word("abABcdCD", 4));
    CHECK(dist_pm_identity(rel) < 1e-8);
  }

  SUBCASE("equal translation lengths") {
    const double expected = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
    for (const auto& g : grp.generators) {
      CHECK(g.is_hyperbolic());
      CHECK(halfplane::axis_data(g).translation_length ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("short words avoid the identity") {
    for (int trial = 0; trial < 100; ++trial) {
      const Word w = random_reduced_word(4, 1 + trial % 4);
      CHECK(dist_pm_identity(evaluate(grp, w)) > 1e-3);
    }
  }
}

TEST_CASE("conjugacy class enumeration") {
  const auto schottky = schottky_group(4.0, 1.0);

  SUBCASE("rank 2, maxlen 1") {
    const auto classes = enumerate_conjugacy_classes(schottky, 1);
    REQUIRE(classes.size() == 4);
    CHECK(to_string(classes[0]) == "a");
    CHECK(to_string(classes[1]) == "A");
    CHECK(to_string(classes[2]) == "b");
    CHECK(to_string(classes[3]) == "B");
  }

  SUBCASE("counts match the brute-force orbit oracle") {
    for (int maxlen : {1, 2, 3}) {
      const auto classes = enumerate_conjugacy_classes(schottky, maxlen);
      CHECK(static_cast<int>(classes.size()) == brute_force_class_count(2, maxlen));
    }
  }

  SUBCASE("representatives are cyclically reduced, canonical, distinct") {
    const auto classes = enumerate_conjugacy_classes(schottky, 3);
    std::set<std::string> seen;
    for (const auto& w : classes) {
      CHECK(cyclically_reduced(w).letters == w.letters);
      CHECK(seen.insert(to_string(w)).second);
    }
  }

  SUBCASE("inverses are listed separately") {
    const auto rotation_equivalent = [](const Word& a, const Word& b) {
      if (a.length() != b.length()) return false;
      auto r = a.letters;
      for (int k = 0; k < a.length(); ++k) {
        if (r == b.letters) return true;
        std::rotate(r.begin(), r.begin() + 1, r.end());
      }
      return false;
    };
    const auto classes = enumerate_conjugacy_classes(schottky, 2);
    for (const auto& w : classes) {
      const Word winv = cyclically_reduced(inverse(w));
      const bool found = std::any_of(classes.begin(), classes.end(), [&](const Word& u) {
        return rotation_equivalent(u, winv);
      });
      CHECK(found);
    }
  }

  SUBCASE("genus-2 representatives at maxlen 2 are pairwise non-conjugate") {
    const auto g2 = genus2_group();
    const auto classes = enumerate_conjugacy_classes(g2, 2);
    std::vector<double> traces;
    for (const auto& w : classes) traces.push_back(std::abs(evaluate(g2, w).trace()));

    // Conjugate elements share |trace|; distinct traces certify distinct
    // classes. Equal-trace pairs get a short-conjugator search.
    std::vector<Word> conjugators;
    {
      ConjugacyClassStream stream(4, 2);
      std::vector<std::vector<int>> words{{}};
      for (int len = 1; len <= 3; ++len) {
        std::vector<std::vector<int>> next;
        for (const auto& w : words)
          for (int l = 1; l <= 4; ++l)
            for (int s : {l, -l}) {
              if (!w.empty() && w.back() == -s) continue;
              auto v = w;
              v.push_back(s);
              next.push_back(v);
            }
        for (const auto& w : next) {
          Word word;
          word.letters = w;
          conjugators.push_back(word);
        }
        words = std::move(next);
      }
    }
    int equal_trace_pairs = 0;
    for (size_t i = 0; i < classes.size(); ++i) {
      for (size_t j = i + 1; j < classes.size(); ++j) {
        if (std::abs(traces[i] - traces[j]) > 1e-8) continue;
        ++equal_trace_pairs;
        const Moebius wi = evaluate(g2, classes[i]);
        const Moebius wj = evaluate(g2, classes[j]);
        for (const auto& d : conjugators) {
          const Moebius m = evaluate(g2, d);
          const Moebius conj = (m * wi * m.inverse()).normalized();
          CHECK(dist(conj, wj) > 1e-6);
        }
      }
    }
    CHECK(equal_trace_pairs > 0);  // the symmetric construction does produce ties
  }
}

TEST_CASE("stream is deterministic and lazy enumeration matches") {
  ConjugacyClassStream s1(2, 3), s2(2, 3);
  for (;;) {
    const auto a = s1.next();
    const auto b = s2.next();
    REQUIRE((a.has_value() == b.has_value()));
    if (!a) break;
    CHECK(a->letters == b->letters);
  }
}
