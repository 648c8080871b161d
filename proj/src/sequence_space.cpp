#include "qprob/sequence_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iterator>

#include "qprob/error.hpp"

namespace qprob {

namespace {

void check_set_depth(int depth) {
  if (depth < 0) fail(ErrorKind::DepthError, "depth must be non-negative, got " + std::to_string(depth));
  if (depth > kMaxSetDepth) {
    fail(ErrorKind::SizeGuard, "depth " + std::to_string(depth) + " exceeds the enumeration limit " +
                                   std::to_string(kMaxSetDepth));
  }
}

WordCode atom_count(int depth) { return WordCode{1} << depth; }

}  // namespace

BinaryWord::BinaryWord(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) fail(ErrorKind::DomainError, "binary word entries must be 0 or 1");
  }
}

BinaryWord BinaryWord::parse(std::string_view text) {
  std::vector<std::uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') fail(ErrorKind::ParseError, "not a binary word: \"" + std::string(text) + "\"");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BinaryWord(std::move(bits));
}

BinaryWord BinaryWord::from_code(WordCode code, int length) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(length));
  for (int m = 0; m < length; ++m) bits[m] = static_cast<std::uint8_t>((code >> (length - 1 - m)) & 1U);
  return BinaryWord(std::move(bits));
}

WordCode BinaryWord::code() const {
  if (bits_.size() > 63) fail(ErrorKind::SizeGuard, "word too long to encode");
  WordCode c = 0;
  for (auto b : bits_) c = (c << 1) | b;
  return c;
}

std::size_t BinaryWord::count_ones(std::size_t prefix) const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.begin() + prefix, std::uint8_t{1}));
}

BinaryWord BinaryWord::extended(std::uint8_t bit) const {
  auto bits = bits_;
  bits.push_back(bit);
  return BinaryWord(std::move(bits));
}

BinaryWord BinaryWord::prefix(std::size_t length) const {
  return BinaryWord(std::vector<std::uint8_t>(bits_.begin(), bits_.begin() + std::min(length, bits_.size())));
}

bool BinaryWord::is_prefix_of(const BinaryWord& other) const noexcept {
  return bits_.size() <= other.bits_.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::string BinaryWord::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

CylinderUnion::CylinderUnion(int depth, std::vector<WordCode> codes) : depth_(depth), codes_(std::move(codes)) {}

CylinderUnion CylinderUnion::empty_set(int depth) {
  check_set_depth(depth);
  return CylinderUnion(depth, {});
}

CylinderUnion CylinderUnion::whole_space(int depth) {
  check_set_depth(depth);
  std::vector<WordCode> codes(atom_count(depth));
  for (WordCode c = 0; c < codes.size(); ++c) codes[c] = c;
  return CylinderUnion(depth, std::move(codes));
}

CylinderUnion CylinderUnion::from_codes(int depth, std::vector<WordCode> codes) {
  check_set_depth(depth);
  for (auto c : codes) {
    if (c >= atom_count(depth)) fail(ErrorKind::DepthError, "word code out of range for depth " + std::to_string(depth));
  }
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return CylinderUnion(depth, std::move(codes));
}

CylinderUnion CylinderUnion::from_words(int depth, std::span<const BinaryWord> words) {
  std::vector<WordCode> codes;
  codes.reserve(words.size());
  for (const auto& w : words) {
    if (static_cast<int>(w.size()) != depth) {
      fail(ErrorKind::DepthError, "word \"" + w.to_string() + "\" does not have length " + std::to_string(depth));
    }
    codes.push_back(w.code());
  }
  return from_codes(depth, std::move(codes));
}

std::vector<BinaryWord> CylinderUnion::words() const {
  std::vector<BinaryWord> out;
  out.reserve(codes_.size());
  for (auto c : codes_) out.push_back(BinaryWord::from_code(c, depth_));
  return out;
}

bool CylinderUnion::contains(WordCode code) const { return std::binary_search(codes_.begin(), codes_.end(), code); }

bool CylinderUnion::contains(const BinaryWord& word) const {
  return static_cast<int>(word.size()) == depth_ && contains(word.code());
}

bool CylinderUnion::is_subset_of(const CylinderUnion& other) const {
  const int d = std::max(depth_, other.depth_);
  const auto a = refine(*this, d);
  const auto b = refine(other, d);
  return std::includes(b.codes_.begin(), b.codes_.end(), a.codes_.begin(), a.codes_.end());
}

CylinderUnion cylinder(const BinaryWord& word, int depth) {
  const int n = static_cast<int>(word.size());
  if (depth < n) {
    fail(ErrorKind::DepthError,
         "cannot render a length-" + std::to_string(n) + " cylinder at depth " + std::to_string(depth));
  }
  check_set_depth(depth);
  const int free_bits = depth - n;
  const WordCode base = word.code() << free_bits;
  std::vector<WordCode> codes(atom_count(free_bits));
  for (WordCode t = 0; t < codes.size(); ++t) codes[t] = base | t;
  return CylinderUnion::from_codes(depth, std::move(codes));
}

CylinderUnion subbasic(int n, int epsilon, int depth) {
  if (n < 0 || depth <= n) {
    fail(ErrorKind::DepthError, "J^" + std::to_string(n) + " needs depth > n, got " + std::to_string(depth));
  }
  if (epsilon != 0 && epsilon != 1) fail(ErrorKind::DomainError, "epsilon must be 0 or 1");
  check_set_depth(depth);
  const int shift = depth - 1 - n;
  std::vector<WordCode> codes;
  codes.reserve(atom_count(depth - 1));
  for (WordCode c = 0; c < atom_count(depth); ++c) {
    if (static_cast<int>((c >> shift) & 1U) == epsilon) codes.push_back(c);
  }
  return CylinderUnion::from_codes(depth, std::move(codes));
}

CylinderUnion complement(const CylinderUnion& x) {
  std::vector<WordCode> codes;
  codes.reserve(atom_count(x.depth()) - x.size());
  auto it = x.codes().begin();
  for (WordCode c = 0; c < atom_count(x.depth()); ++c) {
    if (it != x.codes().end() && *it == c) {
      ++it;
    } else {
      codes.push_back(c);
    }
  }
  return CylinderUnion::from_codes(x.depth(), std::move(codes));
}

CylinderUnion intersect(const CylinderUnion& x, const CylinderUnion& y) {
  const int d = std::max(x.depth(), y.depth());
  const auto a = refine(x, d);
  const auto b = refine(y, d);
  std::vector<WordCode> codes;
  std::set_intersection(a.codes().begin(), a.codes().end(), b.codes().begin(), b.codes().end(),
                        std::back_inserter(codes));
  return CylinderUnion::from_codes(d, std::move(codes));
}

CylinderUnion unite(const CylinderUnion& x, const CylinderUnion& y) {
  const int d = std::max(x.depth(), y.depth());
  const auto a = refine(x, d);
  const auto b = refine(y, d);
  std::vector<WordCode> codes;
  std::set_union(a.codes().begin(), a.codes().end(), b.codes().begin(), b.codes().end(), std::back_inserter(codes));
  return CylinderUnion::from_codes(d, std::move(codes));
}

CylinderUnion difference(const CylinderUnion& x, const CylinderUnion& y) { return intersect(x, complement(refine(y, std::max(x.depth(), y.depth())))); }

CylinderUnion refine(const CylinderUnion& x, int depth) {
  if (depth < x.depth()) {
    fail(ErrorKind::DepthError,
         "cannot refine from depth " + std::to_string(x.depth()) + " to " + std::to_string(depth));
  }
  if (depth == x.depth()) return x;
  check_set_depth(depth);
  const int extra = depth - x.depth();
  std::vector<WordCode> codes;
  codes.reserve(x.size() << extra);
  for (auto c : x.codes()) {
    for (WordCode t = 0; t < atom_count(extra); ++t) codes.push_back((c << extra) | t);
  }
  return CylinderUnion::from_codes(depth, std::move(codes));
}

Rational cantor_point_exact(const BinaryWord& word) {
  Rational x = 0;
  Rational scale = 1;
  for (std::size_t m = 0; m < word.size(); ++m) {
    if (word[m] == 1) x += scale;
    scale /= 3;
  }
  return x;
}

std::pair<Rational, Rational> cantor_interval_exact(const BinaryWord& word) {
  Rational x = cantor_point_exact(word);
  Rational width = Rational(3, 2);
  for (std::size_t m = 0; m < word.size(); ++m) width /= 3;
  return {x, x + width};
}

double cantor_point(const BinaryWord& word) { return cantor_point_exact(word).convert_to<double>(); }

std::pair<double, double> cantor_interval(const BinaryWord& word) {
  auto [lo, hi] = cantor_interval_exact(word);
  return {lo.convert_to<double>(), hi.convert_to<double>()};
}

BinaryWord cantor_cell(double lambda, int depth) {
  if (depth < 0) fail(ErrorKind::DepthError, "negative depth");
  if (!std::isfinite(lambda)) fail(ErrorKind::DomainError, "cannot classify a non-finite eigenvalue");
  const Rational value(lambda);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(depth));
  Rational left = 0;
  Rational scale = 1;
  const Rational three_quarters(3, 4);
  for (int m = 0; m < depth; ++m) {
    // Children of [left, left + 3/2 scale] are separated by the open gap
    // (left + scale/2, left + scale); its midpoint is the cut.
    if (value < left + three_quarters * scale) {
      bits[m] = 0;
    } else {
      bits[m] = 1;
      left += scale;
    }
    scale /= 3;
  }
  return BinaryWord(std::move(bits));
}

FrequencyWindow frequency(const BinaryWord& word, std::size_t window) {
  if (window < 1 || window > word.size()) {
    fail(ErrorKind::DepthError, "frequency window " + std::to_string(window) + " outside [1, " +
                                    std::to_string(word.size()) + "]");
  }
  return FrequencyWindow{window, word.count_ones(window)};
}

bool within_band(std::size_t ones, std::size_t window, double q, double delta) noexcept {
  return std::abs(static_cast<double>(ones) / static_cast<double>(window) - q) <= delta + kBandEdgeSlack;
}

CylinderUnion freq_band(double q, double delta, std::size_t window, int depth) {
  if (!(q >= 0.0 && q <= 1.0)) fail(ErrorKind::DomainError, "q must lie in [0, 1]");
  if (!(delta > 0.0)) fail(ErrorKind::DomainError, "delta must be positive");
  if (window < 1) fail(ErrorKind::DepthError, "frequency window must be at least 1");
  if (depth < static_cast<int>(window)) {
    fail(ErrorKind::DepthError, "depth " + std::to_string(depth) + " is shorter than window " + std::to_string(window));
  }
  check_set_depth(depth);
  const int tail = depth - static_cast<int>(window);
  std::vector<WordCode> codes;
  for (WordCode c = 0; c < atom_count(depth); ++c) {
    const auto ones = static_cast<std::size_t>(std::popcount(c >> tail));
    if (within_band(ones, window, q, delta)) codes.push_back(c);
  }
  return CylinderUnion::from_codes(depth, std::move(codes));
}

}  // namespace qprob
