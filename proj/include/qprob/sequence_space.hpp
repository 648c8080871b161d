#pragma once

// Finite binary words, depth-limited cylinder-set algebra over the Cantor
// space 2^omega, the ternary Cantor encoding, and the frequency statistic.
//
// A depth-d set is stored as the sorted list of its depth-d atoms. Each atom
// is addressed by an integer code read most-significant-first: bit 0 of the
// word (the first outcome) is the highest bit of the code, so numeric order of
// codes coincides with lexicographic order of words.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qprob {

using Rational = boost::multiprecision::cpp_rational;
using WordCode = std::uint64_t;

/// Largest depth at which a set is enumerated atom by atom.
inline constexpr int kMaxSetDepth = 24;

class BinaryWord {
 public:
  BinaryWord() = default;
  explicit BinaryWord(std::vector<std::uint8_t> bits);

  /// Parses a string over {0,1}; anything else is a ParseError.
  static BinaryWord parse(std::string_view text);
  static BinaryWord from_code(WordCode code, int length);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  /// Requires size() <= 63.
  WordCode code() const;
  std::size_t count_ones(std::size_t prefix) const;

  BinaryWord extended(std::uint8_t bit) const;
  BinaryWord prefix(std::size_t length) const;
  bool is_prefix_of(const BinaryWord& other) const noexcept;

  std::string to_string() const;

  friend auto operator<=>(const BinaryWord&, const BinaryWord&) = default;
  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A finite union of depth-d cylinders, kept canonical (sorted, no
/// duplicates) so that equality is structural.
class CylinderUnion {
 public:
  CylinderUnion() = default;

  static CylinderUnion empty_set(int depth);
  static CylinderUnion whole_space(int depth);
  static CylinderUnion from_codes(int depth, std::vector<WordCode> codes);
  static CylinderUnion from_words(int depth, std::span<const BinaryWord> words);

  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return codes_.size(); }
  bool empty() const noexcept { return codes_.empty(); }
  bool is_whole() const noexcept { return codes_.size() == (WordCode{1} << depth_); }
  const std::vector<WordCode>& codes() const noexcept { return codes_; }
  std::vector<BinaryWord> words() const;
  bool contains(WordCode code) const;
  bool contains(const BinaryWord& word) const;
  bool is_subset_of(const CylinderUnion& other) const;

  friend bool operator==(const CylinderUnion&, const CylinderUnion&) = default;

 private:
  CylinderUnion(int depth, std::vector<WordCode> codes);

  int depth_ = 0;
  std::vector<WordCode> codes_;
};

/// I_word rendered at `depth`: every extension of `word` to that length.
CylinderUnion cylinder(const BinaryWord& word, int depth);

/// J^n_epsilon: sequences whose n-th entry equals epsilon.
CylinderUnion subbasic(int n, int epsilon, int depth);

CylinderUnion complement(const CylinderUnion& x);
CylinderUnion intersect(const CylinderUnion& x, const CylinderUnion& y);
CylinderUnion unite(const CylinderUnion& x, const CylinderUnion& y);
CylinderUnion difference(const CylinderUnion& x, const CylinderUnion& y);
CylinderUnion refine(const CylinderUnion& x, int depth);

Rational cantor_point_exact(const BinaryWord& word);
std::pair<Rational, Rational> cantor_interval_exact(const BinaryWord& word);
double cantor_point(const BinaryWord& word);
std::pair<double, double> cantor_interval(const BinaryWord& word);

/// The depth-`depth` word whose Cantor interval owns `lambda`. The real line
/// is cut at the exact midpoints of the removed middle thirds, so every real
/// belongs to exactly one word and each C_sigma lies inside its own cell.
BinaryWord cantor_cell(double lambda, int depth);

struct FrequencyWindow {
  std::size_t window = 0;
  std::size_t ones = 0;

  double value() const noexcept { return static_cast<double>(ones) / static_cast<double>(window); }
  Rational exact() const { return Rational(ones, window); }
};

FrequencyWindow frequency(const BinaryWord& word, std::size_t window);

/// Frequencies are compared against the band edge with this absolute slack,
/// so that an edge like 0.55 - 0.5 = 0.05 is not lost to rounding.
inline constexpr double kBandEdgeSlack = 1e-12;

/// Shared membership rule for the finite-window frequency band
/// |k/N - q| <= delta. Every band computation in the library goes through it.
bool within_band(std::size_t ones, std::size_t window, double q, double delta) noexcept;

/// Depth-truncated stand-in for L_q: words whose first-N frequency lies
/// within delta of q.
CylinderUnion freq_band(double q, double delta, std::size_t window, int depth);

}  // namespace qprob
