#pragma once

// Finite-depth tests of randomness, the frequency statistic and its strong
// law surrogate, the finite-prefix frequency operator, and a seeded Monte
// Carlo harness.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qprob/linalg_core.hpp"
#include "qprob/pvm.hpp"
#include "qprob/sequence_space.hpp"
#include "qprob/state_measures.hpp"

namespace qprob {

/// Longest sequence the sampler will draw.
inline constexpr std::size_t kMaxSequenceLength = 1u << 16;
inline constexpr std::uint64_t kMaxSamples = 10'000'000;

/// Exact mu_q mass of { |F(N) - q| <= delta } by binomial summation. `depth`
/// only needs to cover the window.
double slln_band_mass(double q, double delta, std::size_t window, std::size_t depth);
/// The complementary mass, summed directly so that tiny tails stay accurate.
double slln_band_tail(double q, double delta, std::size_t window, std::size_t depth);
/// Mass of { |F(N) - center| <= delta } under mu_q.
double band_mass_under(double q, double center, double delta, std::size_t window);

/// q(1-q) / (N delta^2): Chebyshev bound on the tail.
double chebyshev_tail_bound(double q, double delta, std::size_t window);

struct EigenvectorResidual {
  double residual = 0.0;       // ||P(X) psi - psi|| / ||psi||
  double mass_fraction = 0.0;  // mu_psi(X) / ||psi||^2
};

EigenvectorResidual eigenvector_check(const ProjectionValuedMap& map, const StateVector& psi, const CylinderUnion& x);

/// sum_sigma F_N(sigma) P(I_sigma) with F_N the first-N frequency.
Matrix frequency_operator(const ProjectionValuedMap& map, std::size_t window);

struct FrequencyMoments {
  double mean = 0.0;      // <psi, F psi> / ||psi||^2
  double variance = 0.0;  // <psi, F^2 psi> / ||psi||^2 - mean^2
};

/// Moments of the frequency operator in state psi, applied atom by atom.
FrequencyMoments frequency_moments(const ProjectionValuedMap& map, const StateVector& psi, std::size_t window);

struct RandomnessTest {
  std::string name;
  CylinderUnion set;
  std::shared_ptr<const MeasureTable> target;
  double mass = 0.0;
};

RandomnessTest register_test(std::string name, CylinderUnion set, std::shared_ptr<const MeasureTable> target);

struct GrandTest {
  std::vector<RandomnessTest> tests;
  CylinderUnion intersection;
  double combined_mass = 0.0;
  double union_bound = 0.0;  // total - sum (total - mass_i)
};

/// Intersection of finitely many tests against one target measure.
GrandTest grand_test(std::vector<RandomnessTest> tests);

/// I.i.d. words drawn bit by bit from the conditionals of a unit measure.
std::vector<BinaryWord> sample_sequences(const MeasureTable& mu, std::uint64_t count, std::uint64_t seed);

/// I.i.d. words of the given length from mu_q, drawn by the same rule with
/// every conditional equal to q. Works beyond tabulated depths.
std::vector<BinaryWord> sample_homogeneous(double q, std::size_t length, std::uint64_t count, std::uint64_t seed);

struct BandSpec {
  std::string name;
  double center = 0.5;
  double delta = 0.1;
  std::size_t window = 1;
};

struct ExperimentConfig {
  double q = 0.5;
  std::size_t window = 10;  // N
  std::size_t depth = 10;
  double delta = 0.1;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<BandSpec> tests;  // extra tests beyond the main band
};

/// Throws DomainError / DepthError / SizeGuard on bad configurations.
void validate(const ExperimentConfig& config);

struct TestOutcome {
  BandSpec band;
  double exact_mass = 0.0;
  std::uint64_t passes = 0;
  std::optional<double> pass_rate;
  double sigma = 0.0;  // sqrt(m (1 - m) / samples)
  std::optional<double> z_score;
  bool within_4sigma = true;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::optional<double> frequency_mean;
  std::optional<double> frequency_stddev;
  std::vector<TestOutcome> tests;
  std::optional<double> grand_exact_mass;  // when the depth is small enough to enumerate
  double grand_union_bound = 0.0;
  std::uint64_t grand_passes = 0;
  std::optional<double> grand_pass_rate;
};

ExperimentReport run_slln_experiment(const ExperimentConfig& config);

}  // namespace qprob
