#include "proplab/fuchsian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace proplab::fuchsian {

using halfplane::Complex;
using halfplane::Moebius;

namespace {

std::vector<int> free_reduce(const std::vector<int>& letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (l == 0) throw std::invalid_argument("Word: zero letter");
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

// Lex rank: 1 < -1 < 2 < -2 < ...
int letter_rank(int l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

bool lex_less_equal(const std::vector<int>& u, const std::vector<int>& v) {
  for (size_t i = 0; i < u.size() && i < v.size(); ++i) {
    const int ru = letter_rank(u[i]), rv = letter_rank(v[i]);
    if (ru != rv) return ru < rv;
  }
  return u.size() <= v.size();
}

}  // namespace

Word::Word(std::vector<int> ls) : letters(free_reduce(ls)) {}

bool operator==(const Word& lhs, const Word& rhs) { return lhs.letters == rhs.letters; }

Word inverse(const Word& w) {
  std::vector<int> out(w.letters.rbegin(), w.letters.rend());
  for (int& l : out) l = -l;
  Word r;
  r.letters = std::move(out);  // inverse of reduced word is reduced
  return r;
}

Word concat(const Word& lhs, const Word& rhs) {
  std::vector<int> joined = lhs.letters;
  joined.insert(joined.end(), rhs.letters.begin(), rhs.letters.end());
  return Word(std::move(joined));
}

Word cyclically_reduced(const Word& w) {
  std::vector<int> ls = w.letters;
  while (ls.size() >= 2 && ls.front() == -ls.back()) {
    ls.erase(ls.begin());
    ls.pop_back();
  }
  Word r;
  r.letters = std::move(ls);
  return r;
}

bool is_proper_power(const Word& w) {
  const int n = w.length();
  for (int d = 1; 2 * d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (int i = d; i < n && periodic; ++i) periodic = (w.letters[i] == w.letters[i - d]);
    if (periodic) return true;
  }
  return false;
}

std::string to_string(const Word& w) {
  std::string s;
  s.reserve(w.letters.size());
  for (int l : w.letters) {
    const int idx = std::abs(l) - 1;
    if (idx >= 26) throw std::invalid_argument("to_string: rank too large for letters");
    s.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + idx));
  }
  return s;
}

Word parse_word(std::string_view text, int rank) {
  std::vector<int> ls;
  ls.reserve(text.size());
  for (char ch : text) {
    int l = 0;
    if (ch >= 'a' && ch <= 'z') l = ch - 'a' + 1;
    else if (ch >= 'A' && ch <= 'Z') l = -(ch - 'A' + 1);
    else throw std::invalid_argument(std::string("parse_word: bad character '") + ch + "'");
    if (std::abs(l) > rank) throw std::invalid_argument("parse_word: letter out of range");
    ls.push_back(l);
  }
  return Word(std::move(ls));
}

halfplane::Moebius evaluate(const GroupPresentation& grp, const Word& w) {
  // Plain products: the determinant drifts only multiplicatively (a few eps
  // per factor). Renormalizing by the computed determinant would inject far
  // larger errors for large-entry products, where ad - bc cancels badly.
  Moebius acc = Moebius::identity();
  for (int l : w.letters) {
    const int idx = std::abs(l) - 1;
    if (idx >= grp.rank()) throw std::out_of_range("evaluate: generator index out of range");
    const Moebius& g = grp.generators[idx];
    acc = acc * (l > 0 ? g : g.inverse());
  }
  return acc;
}

namespace {

// Image of a half-disk region under a real Moebius map. The image of a circle
// centered on R is again such a circle; the side flag follows a test point.
HalfDisk map_region(const Moebius& m, const HalfDisk& r) {
  const double x0 = r.center - r.radius;
  const double x1 = r.center + r.radius;
  const double den0 = m.c * x0 + m.d;
  const double den1 = m.c * x1 + m.d;
  if (std::abs(den0) < 1e-12 || std::abs(den1) < 1e-12)
    throw PingPongError("ping-pong wall passes through the pole of the chart");
  const double y0 = (m.a * x0 + m.b) / den0;
  const double y1 = (m.a * x1 + m.b) / den1;

  HalfDisk out;
  out.center = 0.5 * (y0 + y1);
  out.radius = 0.5 * std::abs(y1 - y0);

  const Complex probe = r.inside ? Complex(r.center, 0.5 * r.radius)
                                 : Complex(r.center, 3.0 * r.radius);
  const Complex image = m(probe);
  out.inside = std::abs(image - Complex(out.center, 0.0)) < out.radius;
  return out;
}

// Gap between two half-disk regions; positive means disjoint closures.
double region_gap(const HalfDisk& p, const HalfDisk& q) {
  const double sep = std::abs(p.center - q.center);
  if (p.inside && q.inside) return sep - p.radius - q.radius;
  if (!p.inside && !q.inside) return -std::numeric_limits<double>::infinity();
  const HalfDisk& in = p.inside ? p : q;
  const HalfDisk& out = p.inside ? q : p;
  return out.radius - (std::abs(in.center - out.center) + in.radius);
}

bool point_outside(const HalfDisk& r, Complex z) {
  const double dist = std::abs(z - Complex(r.center, 0.0));
  return r.inside ? dist > r.radius : dist < r.radius;
}

// The two ping-pong regions of a hyperbolic element: walls orthogonal to the
// axis at distance l/2 on either side of the axis reference point.
std::pair<HalfDisk, HalfDisk> pingpong_regions(const Moebius& g) {
  const auto ad = halfplane::axis_data(g);
  const double nu = std::exp(ad.translation_length / 2.0);
  const HalfDisk lower{0.0, 1.0 / nu, true};
  const HalfDisk upper{0.0, nu, false};
  return {map_region(ad.axis.chart, lower), map_region(ad.axis.chart, upper)};
}

PingPongCertificate make_certificate(const std::vector<Moebius>& gens) {
  PingPongCertificate cert;
  for (const Moebius& g : gens) {
    auto [minus, plus] = pingpong_regions(g);
    cert.regions.push_back(minus);
    cert.regions.push_back(plus);
  }
  cert.margin = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cert.regions.size(); ++i)
    for (size_t j = i + 1; j < cert.regions.size(); ++j)
      cert.margin = std::min(cert.margin, region_gap(cert.regions[i], cert.regions[j]));
  if (!(cert.margin > 0.0))
    throw PingPongError("ping-pong regions overlap (parameters too small)");

  // Reference point clear of every region, searched on the imaginary axis.
  bool found = false;
  for (int k = 0; k < 200 && !found; ++k) {
    const Complex z(0.0, std::exp(-2.0 + 4.0 * k / 199.0));
    bool ok = true;
    for (const HalfDisk& r : cert.regions) ok = ok && point_outside(r, z);
    if (ok) {
      cert.basepoint = z;
      found = true;
    }
  }
  if (!found) throw PingPongError("no basepoint clear of the ping-pong regions");
  return cert;
}

}  // namespace

GroupPresentation schottky_group(double t, double separation) {
  if (!(t > 0.0) || !(separation > 0.0))
    throw std::invalid_argument("schottky_group: parameters must be positive");
  const double e = std::exp(t / 2.0);
  const Moebius g1(e, 0.0, 0.0, 1.0 / e);
  // Conjugate the same translation onto a second axis of diameter
  // 2*separation. Its center is offset by separation/2 so the two axes never
  // cross at a right angle: the perpendicular configuration is exactly the
  // degenerate one for general-position tests of the symmetric-power images.
  const double p = -separation / 2.0;
  const double q = 3.0 * separation / 2.0;
  const double s = std::sqrt(q - p);
  const Moebius m(q / s, p / s, 1.0 / s, 1.0 / s);
  const Moebius g2 = (m * g1 * m.inverse()).normalized();

  GroupPresentation grp;
  grp.generators = {g1, g2};
  grp.kind = GroupKind::FreeSchottky;
  grp.certificate = make_certificate(grp.generators);
  return grp;
}

namespace {

// SU(1,1) element [[alpha, beta],[conj beta, conj alpha]] conjugated to SL(2,R)
// by the Cayley transform z -> (z-i)/(z+i).
Moebius su11_to_sl2(Complex alpha, Complex beta) {
  return Moebius(alpha.real() + beta.real(), alpha.imag() - beta.imag(),
                 -(alpha.imag() + beta.imag()), alpha.real() - beta.real());
}

// Disk-model translation of length l along the rotated diameter at angle theta.
Moebius octagon_side_pairing(double l, double theta) {
  const double ch = std::cosh(l / 2.0);
  const double sh = std::sinh(l / 2.0);
  return su11_to_sl2(Complex(ch, 0.0), sh * std::polar(1.0, theta)).normalized();
}

}  // namespace

GroupPresentation genus2_group() {
  const double l = 2.0 * std::acosh(1.0 + std::sqrt(2.0));
  const double pi = std::acos(-1.0);
  // Rotated copies of one translation pair opposite sides of the regular
  // octagon; they satisfy t0 t1^-1 t2 t3^-1 t0^-1 t1 t2^-1 t3 = I.
  std::vector<Moebius> t;
  for (int k = 0; k < 4; ++k) t.push_back(octagon_side_pairing(l, k * pi / 4.0));

  // The rotated copies satisfy the alternating octagon relation
  // t0 t1^-1 t2 t3^-1 t0^-1 t1 t2^-1 t3 = I, not the surface form. Short words
  // in them do: with u3 = t2 t1^-1 and u4 = t0 t3 t1^-1,
  //   [t0, t3][u3, u4] = +-I,
  // and (t0, t3, u3, u4) still generates (t1 = (t0 t3) u4^-1 t0 t3 ... solved
  // back as t1 = u4^-1 t0 t3, t2 = u3 u4^-1 t0 t3). All four have the same
  // translation length as the defining translation.
  GroupPresentation grp;
  grp.kind = GroupKind::Genus2Cocompact;
  grp.generators = {
      t[0],
      t[3],
      (t[2] * t[1].inverse()).normalized(),
      (t[0] * t[3] * t[1].inverse()).normalized(),
  };
  return grp;
}

ConjugacyClassStream::ConjugacyClassStream(int rank, int maxlen)
    : rank_(rank), maxlen_(maxlen) {
  if (rank < 1 || maxlen < 1) throw std::invalid_argument("ConjugacyClassStream: bad bounds");
}

bool ConjugacyClassStream::canonical() const {
  const int n = static_cast<int>(current_.size());
  if (n >= 2 && current_.front() == -current_.back()) return false;  // not cyclically reduced
  // Lex-minimal among rotations.
  std::vector<int> rot = current_;
  for (int r = 1; r < n; ++r) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (!lex_less_equal(current_, rot)) return false;
  }
  return true;
}

bool ConjugacyClassStream::advance() {
  // Odometer over reduced words of the current length in lex order.
  const int n = static_cast<int>(current_.size());
  const int nranks = 2 * rank_;
  int pos = n - 1;
  while (pos >= 0) {
    int r = letter_rank(current_[pos]);
    bool moved = false;
    while (++r < nranks) {
      const int cand = (r % 2 == 0 ? 1 : -1) * (r / 2 + 1);
      if (pos == 0 || current_[pos - 1] != -cand) {
        current_[pos] = cand;
        moved = true;
        break;
      }
    }
    if (moved) break;
    --pos;
  }
  if (pos < 0) {
    // Grow the length.
    ++length_;
    if (length_ > maxlen_) return false;
    current_.assign(length_, 1);
    pos = 0;
  }
  // Fill the tail after pos with the smallest admissible letters.
  for (int i = pos + 1; i < static_cast<int>(current_.size()); ++i) {
    for (int r = 0; r < nranks; ++r) {
      const int cand = (r % 2 == 0 ? 1 : -1) * (r / 2 + 1);
      if (current_[i - 1] != -cand) {
        current_[i] = cand;
        break;
      }
    }
  }
  return true;
}

std::optional<Word> ConjugacyClassStream::next() {
  if (length_ == 0) {
    length_ = 1;
    if (maxlen_ < 1) return std::nullopt;
    current_.assign(1, 1);
    if (canonical()) {
      Word w;
      w.letters = current_;
      return w;
    }
  }
  while (advance()) {
    if (canonical()) {
      Word w;
      w.letters = current_;
      return w;
    }
  }
  return std::nullopt;
}

std::vector<Word> enumerate_conjugacy_classes(const GroupPresentation& grp, int maxlen) {
  if (maxlen < 1) throw std::invalid_argument("enumerate_conjugacy_classes: maxlen >= 1");
  std::vector<Word> out;
  ConjugacyClassStream stream(grp.rank(), maxlen);
  while (auto w = stream.next()) out.push_back(*w);
  return out;
}

}  // namespace proplab::fuchsian
