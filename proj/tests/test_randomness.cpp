#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "qprob/error.hpp"
#include "qprob/families.hpp"
#include "qprob/randomness.hpp"
#include "support/random_fixtures.hpp"

using namespace qprob;

namespace {

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ParseError;
}

// Exact values from rational binomial summation.
constexpr double kMassHalf005N1000 = 0.9986082584055779;
constexpr double kTailHalf005N1000 = 0.0013917415944220861;
constexpr double kMassHalf01N100 = 0.9647997997822951;
constexpr double kMassHalf01N400 = 0.999951593869136;
constexpr double kMass03_02N12 = 0.876374106993;

}  // namespace

TEST_CASE("band masses against the binomial oracle") {
  CHECK(slln_band_mass(0.5, 0.6, 7, 7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(slln_band_mass(0.5, 0.1, 4, 4) == doctest::Approx(0.375).epsilon(1e-13));
  CHECK(std::abs(slln_band_mass(0.5, 0.05, 1000, 1000) - kMassHalf005N1000) < 1e-12);
  CHECK(std::abs(slln_band_tail(0.5, 0.05, 1000, 1000) - kTailHalf005N1000) < 1e-14);
  CHECK(std::abs(slln_band_mass(0.5, 0.1, 100, 100) - kMassHalf01N100) < 1e-12);
  CHECK(std::abs(slln_band_mass(0.5, 0.1, 400, 400) - kMassHalf01N400) < 1e-12);
  CHECK(slln_band_mass(0.5, 0.1, 400, 400) > slln_band_mass(0.5, 0.1, 100, 100));
  CHECK(std::abs(slln_band_mass(0.3, 0.2, 12, 12) - kMass03_02N12) < 1e-11);
  CHECK(std::abs(band_mass_under(0.3, 0.3, 0.2, 12) - kMass03_02N12) < 1e-11);
}

TEST_CASE("band mass matches the homogeneous measure of the band set") {
  for (double q : {0.2, 0.5, 0.7}) {
    for (std::size_t n : {3u, 6u, 9u}) {
      const auto mu = homogeneous_measure(q, static_cast<int>(n));
      const double direct = mu.mass(freq_band(q, 0.15, n, static_cast<int>(n)));
      CHECK(std::abs(slln_band_mass(q, 0.15, n, n) - direct) < 1e-12);
    }
  }
}

TEST_CASE("band mass argument checks") {
  CHECK(kind_of([] { slln_band_mass(0.0, 0.1, 4, 4); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { slln_band_mass(0.5, 0.0, 4, 4); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { slln_band_mass(0.5, 0.1, 5, 4); }) == ErrorKind::DepthError);
}

TEST_CASE("chebyshev envelope") {
  for (double q = 0.1; q < 0.95; q += 0.1) {
    for (double delta : {0.05, 0.1, 0.2}) {
      for (std::size_t n : {10u, 100u, 1000u}) {
        CHECK(slln_band_tail(q, delta, n, n) <= chebyshev_tail_bound(q, delta, n) + 1e-15);
      }
    }
  }
}

TEST_CASE("eigenvector check") {
  const auto f = qubit_chain(8, 0.5);
  const auto map = build_pvm(f.family, 8);
  const auto whole = eigenvector_check(map, f.state, CylinderUnion::whole_space(8));
  CHECK(whole.residual < 1e-12);
  CHECK(whole.mass_fraction == doctest::Approx(1.0));

  const auto band = eigenvector_check(map, f.state, freq_band(0.5, 0.25, 8, 8));
  CHECK(std::abs(band.mass_fraction - 119.0 / 128.0) < 1e-12);
  CHECK(std::abs(band.residual - std::sqrt(9.0 / 128.0)) < 1e-9);
  CHECK(band.residual <= std::sqrt(0.25 / (8 * 0.25 * 0.25)));

  Vector e = Vector::Zero(256);
  e(37) = 1.0;
  CHECK(eigenvector_check(map, StateVector(e), CylinderUnion::from_codes(8, {37, 40})).residual == 0.0);
}

TEST_CASE("eigenvector residual equals sqrt(1 - mass) for random sets") {
  qprob::testing::Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = qprob::testing::random_family(6, 3, rng);
    const auto map = build_pvm(f.family, 3);
    const auto psi = qprob::testing::random_state(6, rng);
    const auto r = eigenvector_check(map, psi, qprob::testing::random_set(3, rng));
    CHECK(std::abs(r.residual * r.residual - (1.0 - r.mass_fraction)) < 1e-12);
    // The square root amplifies rounding in 1 - mass when the mass is near 1.
    if (1.0 - r.mass_fraction > 1e-6) CHECK(std::abs(r.residual - std::sqrt(1.0 - r.mass_fraction)) < 1e-9);
  }
}

TEST_CASE("frequency operator") {
  const auto f = qubit_chain(3, 0.5);
  const auto map = build_pvm(f.family, 3);
  CHECK(qprob::testing::frobenius(frequency_operator(build_pvm(f.family, 1), 1), f.family[0].matrix()) == 0.0);

  const auto two = qubit_chain(2, 0.5);
  const auto m2 = frequency_moments(build_pvm(two.family, 2), two.state, 2);
  CHECK(std::abs(m2.mean - 0.5) < 1e-12);
  CHECK(std::abs(m2.variance - 0.125) < 1e-12);

  const Matrix fo = frequency_operator(map, 3);
  const double mean = f.state.amplitudes().dot(fo * f.state.amplitudes()).real();
  CHECK(std::abs(mean - 0.5) < 1e-12);
  CHECK(kind_of([&] { frequency_operator(map, 4); }) == ErrorKind::DepthError);
}

TEST_CASE("frequency moments of homogeneous states") {
  for (double q : {0.1, 0.3, 0.5, 0.9}) {
    for (int n = 1; n <= 8; ++n) {
      const auto f = qubit_chain(n, q);
      const auto map = build_pvm(f.family, n);
      for (int window = 1; window <= n; ++window) {
        const auto m = frequency_moments(map, f.state, static_cast<std::size_t>(window));
        CHECK(std::abs(m.mean - q) < 1e-10);
        CHECK(std::abs(m.variance - q * (1 - q) / window) < 1e-9);
      }
    }
  }
}

TEST_CASE("grand test") {
  const auto mu = std::make_shared<const MeasureTable>(homogeneous_measure(0.5, 8));
  const auto a = register_test("a", freq_band(0.5, 0.25, 4, 8), mu);
  const auto single = grand_test({a});
  CHECK(single.intersection == a.set);
  CHECK(single.combined_mass == doctest::Approx(a.mass));

  const auto b = register_test("b", freq_band(0.5, 0.2, 8, 8), mu);
  const auto both = grand_test({a, b});
  CHECK(both.combined_mass >= both.union_bound - 1e-12);
  CHECK(both.union_bound == doctest::Approx(1.0 - (1.0 - a.mass) - (1.0 - b.mass)));
  CHECK(both.combined_mass <= std::min(a.mass, b.mass) + 1e-12);

  const auto anti = register_test("anti", complement(a.set), mu);
  const auto failing = grand_test({a, anti});
  CHECK(failing.intersection.empty());
  CHECK(failing.combined_mass == 0.0);
  CHECK(failing.union_bound == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(kind_of([&] { register_test("x", CylinderUnion::whole_space(3), mu); }) == ErrorKind::DepthError);
  CHECK(kind_of([] { grand_test({}); }) == ErrorKind::DomainError);
}

TEST_CASE("samplers are deterministic per seed") {
  const auto mu = homogeneous_measure(0.3, 5);
  CHECK(sample_sequences(mu, 50, 9) == sample_sequences(mu, 50, 9));
  CHECK(sample_sequences(mu, 50, 9) != sample_sequences(mu, 50, 10));
  CHECK(sample_homogeneous(0.3, 20, 10, 4) == sample_homogeneous(0.3, 20, 10, 4));
  // The product-measure sampler and the generic one follow the same rule.
  const auto a = sample_sequences(mu, 200, 77);
  const auto b = sample_homogeneous(0.3, 5, 200, 77);
  CHECK(a == b);
}

TEST_CASE("point mass sampler") {
  std::vector<double> w(8, 0.0);
  w[5] = 1.0;
  for (const auto& s : sample_sequences(MeasureTable(3, w), 100, 3)) CHECK(s.to_string() == "101");
  CHECK(kind_of([] { sample_sequences(MeasureTable(1, {0.2, 0.2}), 1, 0); }) == ErrorKind::NotUnitMeasure);
}

TEST_CASE("first bit of the fair sampler") {
  const std::uint64_t n = 100000;
  const auto s = sample_sequences(homogeneous_measure(0.5, 1), n, 2024);
  double ones = 0;
  for (const auto& w : s) ones += w[0];
  CHECK(std::abs(ones / n - 0.5) <= 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("dependent-bit sampler passes a chi-squared goodness of fit") {
  // bit 1 copies bit 0 with probability 0.8.
  const MeasureTable mu(2, {0.6 * 0.8, 0.6 * 0.2, 0.4 * 0.2, 0.4 * 0.8});
  const std::uint64_t n = 50000;
  std::vector<double> counts(4, 0.0);
  double first_one = 0, second_given_one = 0;
  for (const auto& w : sample_sequences(mu, n, 31337)) {
    counts[w.code()] += 1;
    if (w[0] == 1) {
      first_one += 1;
      second_given_one += w[1];
    }
  }
  double stat = 0.0;
  for (WordCode c = 0; c < 4; ++c) {
    const double expected = mu.weight(c) * n;
    stat += (counts[c] - expected) * (counts[c] - expected) / expected;
  }
  const boost::math::chi_squared dist(3);
  CHECK(boost::math::cdf(boost::math::complement(dist, stat)) > 1e-4);
  const double cond = second_given_one / first_one;
  CHECK(std::abs(cond - 0.8) <= 4.0 * std::sqrt(0.16 / first_one));
}

TEST_CASE("experiment config validation") {
  ExperimentConfig c;
  c.q = 1.2;
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::DomainError);
  c.q = 0.5;
  c.window = 20;
  c.depth = 10;
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::DepthError);
  c.depth = 20;
  c.samples = kMaxSamples + 1;
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::SizeGuard);
  c.samples = 10;
  c.tests.push_back({"bad", 1.5, 0.1, 4});
  CHECK(kind_of([&] { validate(c); }) == ErrorKind::DomainError);
}

TEST_CASE("experiment q=0.3 N=12 delta=0.2 stays within four sigma") {
  ExperimentConfig c;
  c.q = 0.3;
  c.window = 12;
  c.depth = 12;
  c.delta = 0.2;
  c.samples = 10000;
  c.seed = 42;
  const auto r = run_slln_experiment(c);
  REQUIRE(r.tests.size() == 1);
  CHECK(std::abs(r.tests[0].exact_mass - kMass03_02N12) < 1e-11);
  CHECK(r.tests[0].within_4sigma);
  CHECK(*r.tests[0].z_score < 4.0);
  REQUIRE(r.frequency_mean);
  CHECK(std::abs(*r.frequency_mean - 0.3) < 4.0 * std::sqrt(0.21 / 12 / 10000));
  CHECK(std::abs(*r.grand_exact_mass - kMass03_02N12) < 1e-12);

  const auto again = run_slln_experiment(c);
  CHECK(again.tests[0].passes == r.tests[0].passes);
  CHECK(*again.frequency_mean == *r.frequency_mean);
}

TEST_CASE("experiment with extra tests and no samples") {
  ExperimentConfig c;
  c.q = 0.5;
  c.window = 8;
  c.depth = 8;
  c.delta = 0.25;
  c.samples = 0;
  c.tests.push_back({"short", 0.5, 0.25, 4});
  const auto r = run_slln_experiment(c);
  CHECK_FALSE(r.frequency_mean);
  CHECK_FALSE(r.tests[0].pass_rate);
  CHECK(r.grand_passes == 0);
  CHECK(r.tests[0].exact_mass == doctest::Approx(119.0 / 128.0));
  REQUIRE(r.grand_exact_mass);
  CHECK(*r.grand_exact_mass >= r.grand_union_bound - 1e-12);
}

TEST_CASE("long sequences beyond the enumeration depth") {
  ExperimentConfig c;
  c.q = 0.5;
  c.window = 1000;
  c.depth = 1000;
  c.delta = 0.05;
  c.samples = 2000;
  c.seed = 5;
  const auto r = run_slln_experiment(c);
  CHECK_FALSE(r.grand_exact_mass);
  CHECK(std::abs(r.tests[0].exact_mass - kMassHalf005N1000) < 1e-12);
  CHECK(r.tests[0].within_4sigma);
}
