#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proplab/halfplane.hpp"

namespace proplab::fuchsian {

struct PingPongError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reduced word in the generators: letters are nonzero signed indices,
/// +k for generator k (1-based), -k for its inverse.
struct Word {
  std::vector<int> letters;

  Word() = default;
  explicit Word(std::vector<int> ls);

  int length() const { return static_cast<int>(letters.size()); }
  bool empty() const { return letters.empty(); }
};

bool operator==(const Word& lhs, const Word& rhs);

Word inverse(const Word& w);
Word concat(const Word& lhs, const Word& rhs);
Word cyclically_reduced(const Word& w);
bool is_proper_power(const Word& w);

/// "abA" style: 'a'..'z' are generators 1.., 'A'..'Z' their inverses.
std::string to_string(const Word& w);
Word parse_word(std::string_view text, int rank);

enum class GroupKind { FreeSchottky, Genus2Cocompact };

/// A half-plane region bounded by a semicircle centered on the real axis.
struct HalfDisk {
  double center = 0.0;
  double radius = 1.0;
  bool inside = true;  // true: |z - center| <= radius, false: |z - center| >= radius
};

/// Ping-pong data: for generator i, region[2i] is pushed off by g_i^{-1} and
/// region[2i+1] by g_i (g_i maps the complement of region[2i] onto region[2i+1]).
struct PingPongCertificate {
  std::vector<HalfDisk> regions;
  double margin = 0.0;               // smallest pairwise gap
  halfplane::Complex basepoint;      // a point outside every region
};

struct GroupPresentation {
  std::vector<halfplane::Moebius> generators;
  GroupKind kind = GroupKind::FreeSchottky;
  std::optional<PingPongCertificate> certificate;

  int rank() const { return static_cast<int>(generators.size()); }
};

halfplane::Moebius evaluate(const GroupPresentation& grp, const Word& w);

/// Free rank-2 Schottky group: generators of translation length t with axes
/// (0, infinity) and (-separation/2, 3 separation/2). Throws PingPongError
/// when the four ping-pong regions fail to be pairwise disjoint.
GroupPresentation schottky_group(double t, double separation);

/// Cocompact genus-2 group from the regular-octagon side pairing: rotated
/// copies of one translation with cosh(l/2) = 1 + sqrt(2), reordered into a
/// quadruple satisfying the surface relation [g1,g2][g3,g4] = +-I.
GroupPresentation genus2_group();

/// Streams one canonical representative per combinatorial conjugacy class
/// (cyclic words of reduced words, identity excluded, inverses NOT identified)
/// in order of (length, lex); lex order on letters is 1 < -1 < 2 < -2 < ...
class ConjugacyClassStream {
 public:
  ConjugacyClassStream(int rank, int maxlen);
  std::optional<Word> next();

 private:
  bool advance();
  bool canonical() const;

  int rank_;
  int maxlen_;
  int length_ = 0;
  std::vector<int> current_;
};

std::vector<Word> enumerate_conjugacy_classes(const GroupPresentation& grp, int maxlen);

}  // namespace proplab::fuchsian
