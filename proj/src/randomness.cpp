#include "qprob/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>

#include "qprob/error.hpp"
#include "qprob/rng.hpp"

namespace qprob {

namespace {

constexpr int kMaxGrandEnumerationDepth = 16;

void check_q(double q) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::DomainError, "q must lie strictly between 0 and 1");
}

void check_band(double delta, std::size_t window, std::size_t depth) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorKind::DomainError, "delta must be positive");
  if (window < 1) fail(ErrorKind::DepthError, "frequency window must be at least 1");
  if (depth < window) {
    fail(ErrorKind::DepthError, "depth " + std::to_string(depth) + " is shorter than window " + std::to_string(window));
  }
}

double binomial_pmf(std::size_t n, std::size_t k, double q) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double log_choose = std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0);
  return std::exp(log_choose + kk * std::log(q) + (nn - kk) * std::log1p(-q));
}

// Sums the binomial pmf over k with (inside band) == want_inside.
double band_sum(double q, double center, double delta, std::size_t window, bool want_inside) {
  double acc = 0.0;
  for (std::size_t k = 0; k <= window; ++k) {
    if (within_band(k, window, center, delta) == want_inside) acc += binomial_pmf(window, k, q);
  }
  return acc;
}

// Bit m of sample i depends only on (seed, i, m), so a prefix drawn alone
// equals the prefix of a longer draw.
void draw_homogeneous(double q, std::uint64_t seed, std::uint64_t index, std::span<std::uint8_t> bits) {
  CounterStream stream(seed, index);
  for (auto& b : bits) b = stream.uniform() < q ? 1 : 0;
}

}  // namespace

double slln_band_mass(double q, double delta, std::size_t window, std::size_t depth) {
  check_q(q);
  check_band(delta, window, depth);
  return std::min(1.0, band_sum(q, q, delta, window, true));
}

double slln_band_tail(double q, double delta, std::size_t window, std::size_t depth) {
  check_q(q);
  check_band(delta, window, depth);
  return band_sum(q, q, delta, window, false);
}

double band_mass_under(double q, double center, double delta, std::size_t window) {
  check_q(q);
  check_band(delta, window, window);
  return std::min(1.0, band_sum(q, center, delta, window, true));
}

double chebyshev_tail_bound(double q, double delta, std::size_t window) {
  return q * (1.0 - q) / (static_cast<double>(window) * delta * delta);
}

EigenvectorResidual eigenvector_check(const ProjectionValuedMap& map, const StateVector& psi, const CylinderUnion& x) {
  if (psi.dim() != map.dim()) fail(ErrorKind::DimMismatch, "state dimension does not match map");
  require_nonzero(psi);
  const Vector projected = apply(map, x).apply(psi.amplitudes());
  const double norm2 = psi.squared_norm();
  return {(projected - psi.amplitudes()).norm() / psi.norm(), projected.squaredNorm() / norm2};
}

Matrix frequency_operator(const ProjectionValuedMap& map, std::size_t window) {
  if (window < 1 || window > static_cast<std::size_t>(map.depth())) {
    fail(ErrorKind::DepthError, "frequency window " + std::to_string(window) + " outside [1, map depth]");
  }
  return integrate(map, [window](const BinaryWord& w) { return frequency(w, window).value(); });
}

FrequencyMoments frequency_moments(const ProjectionValuedMap& map, const StateVector& psi, std::size_t window) {
  if (window < 1 || window > static_cast<std::size_t>(map.depth())) {
    fail(ErrorKind::DepthError, "frequency window " + std::to_string(window) + " outside [1, map depth]");
  }
  if (psi.dim() != map.dim()) fail(ErrorKind::DimMismatch, "state dimension does not match map");
  require_nonzero(psi);
  std::vector<double> f(map.atom_count());
  std::vector<double> f2(map.atom_count());
  for (WordCode c = 0; c < f.size(); ++c) {
    f[c] = frequency(BinaryWord::from_code(c, map.depth()), window).value();
    f2[c] = f[c] * f[c];
  }
  const Vector& v = psi.amplitudes();
  const double norm2 = psi.squared_norm();
  const double mean = v.dot(integrate_apply(map, f, v)).real() / norm2;
  const double second = v.dot(integrate_apply(map, f2, v)).real() / norm2;
  return {mean, second - mean * mean};
}

RandomnessTest register_test(std::string name, CylinderUnion set, std::shared_ptr<const MeasureTable> target) {
  if (!target) fail(ErrorKind::DomainError, "test needs a target measure");
  if (set.depth() != target->depth()) {
    fail(ErrorKind::DepthError, "test set depth " + std::to_string(set.depth()) + " differs from target depth " +
                                    std::to_string(target->depth()));
  }
  const double mass = target->mass(set);
  return {std::move(name), std::move(set), std::move(target), mass};
}

GrandTest grand_test(std::vector<RandomnessTest> tests) {
  if (tests.empty()) fail(ErrorKind::DomainError, "grand test needs at least one test");
  const auto& target = tests.front().target;
  const int depth = tests.front().set.depth();
  for (const auto& t : tests) {
    if (t.set.depth() != depth) fail(ErrorKind::DepthError, "tests must share one depth");
    if (t.target != target && t.target->weights() != target->weights()) {
      fail(ErrorKind::DomainError, "tests must share one target measure");
    }
  }
  GrandTest g;
  g.intersection = tests.front().set;
  double deficit = 0.0;
  for (const auto& t : tests) {
    g.intersection = intersect(g.intersection, t.set);
    deficit += target->total() - t.mass;
  }
  g.combined_mass = target->mass(g.intersection);
  g.union_bound = target->total() - deficit;
  g.tests = std::move(tests);
  return g;
}

std::vector<BinaryWord> sample_sequences(const MeasureTable& mu, std::uint64_t count, std::uint64_t seed) {
  if (!mu.is_unit()) fail(ErrorKind::NotUnitMeasure, "sampling needs a unit measure, total is " + std::to_string(mu.total()));
  if (count > kMaxSamples) fail(ErrorKind::SizeGuard, "too many samples requested");
  const auto tree = mu.prefix_tree();
  const int depth = mu.depth();
  std::vector<BinaryWord> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    CounterStream stream(seed, i);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(depth));
    WordCode prefix = 0;
    for (int n = 0; n < depth; ++n) {
      const double here = tree[static_cast<std::size_t>(n)][prefix];
      const double one = tree[static_cast<std::size_t>(n) + 1][2 * prefix + 1];
      const double p1 = here > 0.0 ? one / here : 0.0;
      const std::uint8_t bit = stream.uniform() < p1 ? 1 : 0;
      bits[static_cast<std::size_t>(n)] = bit;
      prefix = 2 * prefix + bit;
    }
    out.emplace_back(std::move(bits));
  }
  return out;
}

std::vector<BinaryWord> sample_homogeneous(double q, std::size_t length, std::uint64_t count, std::uint64_t seed) {
  check_q(q);
  if (length > kMaxSequenceLength) fail(ErrorKind::SizeGuard, "sequence length exceeds limit");
  if (count > kMaxSamples) fail(ErrorKind::SizeGuard, "too many samples requested");
  std::vector<BinaryWord> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<std::uint8_t> bits(length);
    draw_homogeneous(q, seed, i, bits);
    out.emplace_back(std::move(bits));
  }
  return out;
}

void validate(const ExperimentConfig& config) {
  check_q(config.q);
  check_band(config.delta, config.window, config.depth);
  if (config.depth > kMaxSequenceLength) fail(ErrorKind::SizeGuard, "depth exceeds the sequence length limit");
  if (config.samples > kMaxSamples) fail(ErrorKind::SizeGuard, "sample count exceeds limit");
  for (const auto& t : config.tests) {
    if (!(t.center >= 0.0 && t.center <= 1.0)) fail(ErrorKind::DomainError, "test \"" + t.name + "\" has center outside [0,1]");
    check_band(t.delta, t.window, config.depth);
  }
}

ExperimentReport run_slln_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentReport report;
  report.config = config;

  std::vector<BandSpec> bands{{"band", config.q, config.delta, config.window}};
  bands.insert(bands.end(), config.tests.begin(), config.tests.end());

  const double n = static_cast<double>(config.samples);

  // Only the first `longest` outcomes of each depth-length sample are read.
  std::size_t longest = 0;
  for (const auto& b : bands) longest = std::max(longest, b.window);

  std::vector<std::uint64_t> passes(bands.size(), 0);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::vector<std::uint8_t> w(longest);
  std::vector<std::size_t> ones_prefix(longest + 1);
  for (std::uint64_t i = 0; i < config.samples; ++i) {
    draw_homogeneous(config.q, config.seed, i, w);
    ones_prefix[0] = 0;
    for (std::size_t m = 0; m < longest; ++m) ones_prefix[m + 1] = ones_prefix[m] + w[m];
    const double f = static_cast<double>(ones_prefix[config.window]) / static_cast<double>(config.window);
    sum += f;
    sum_sq += f * f;
    bool all = true;
    for (std::size_t t = 0; t < bands.size(); ++t) {
      const bool ok = within_band(ones_prefix[bands[t].window], bands[t].window, bands[t].center, bands[t].delta);
      passes[t] += ok ? 1 : 0;
      all = all && ok;
    }
    report.grand_passes += all ? 1 : 0;
  }

  if (config.samples > 0) {
    const double mean = sum / n;
    report.frequency_mean = mean;
    report.frequency_stddev = std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
    report.grand_pass_rate = static_cast<double>(report.grand_passes) / n;
  }

  double deficit = 0.0;
  for (std::size_t t = 0; t < bands.size(); ++t) {
    TestOutcome out;
    out.band = bands[t];
    out.exact_mass = band_mass_under(config.q, bands[t].center, bands[t].delta, bands[t].window);
    out.passes = passes[t];
    deficit += 1.0 - out.exact_mass;
    if (config.samples > 0) {
      const double rate = static_cast<double>(passes[t]) / n;
      out.pass_rate = rate;
      out.sigma = std::sqrt(out.exact_mass * (1.0 - out.exact_mass) / n);
      const double gap = std::abs(rate - out.exact_mass);
      out.z_score = out.sigma > 0.0 ? gap / out.sigma : (gap == 0.0 ? 0.0 : INFINITY);
      out.within_4sigma = gap <= 4.0 * out.sigma;
    }
    report.tests.push_back(std::move(out));
  }
  report.grand_union_bound = 1.0 - deficit;

  if (config.depth <= static_cast<std::size_t>(kMaxGrandEnumerationDepth)) {
    const int d = static_cast<int>(config.depth);
    const auto target = std::make_shared<const MeasureTable>(homogeneous_measure(config.q, d));
    std::vector<RandomnessTest> tests;
    for (const auto& b : bands) tests.push_back(register_test(b.name, freq_band(b.center, b.delta, b.window, d), target));
    report.grand_exact_mass = grand_test(std::move(tests)).combined_mass;
  }
  return report;
}

}  // namespace qprob
