#include "qprob/state_measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qprob/error.hpp"

namespace qprob {

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void require_matching(const ProjectionValuedMap& map, const StateVector& psi) {
  if (psi.dim() != map.dim()) {
    fail(ErrorKind::DimMismatch, "state of dimension " + std::to_string(psi.dim()) + " for map of dimension " +
                                     std::to_string(map.dim()));
  }
}

}  // namespace

MeasureTable::MeasureTable(int depth, std::vector<double> weights) : depth_(depth), weights_(std::move(weights)) {
  if (depth < 0 || depth > kMaxSetDepth) fail(ErrorKind::DepthError, "measure depth out of range");
  if (weights_.size() != (std::size_t{1} << depth)) {
    fail(ErrorKind::DepthError, "depth-" + std::to_string(depth) + " measure needs " +
                                    std::to_string(std::size_t{1} << depth) + " weights, got " +
                                    std::to_string(weights_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) fail(ErrorKind::DomainError, "measure weights must be finite and non-negative");
    total_ += w;
  }
}

double MeasureTable::weight(const BinaryWord& word) const {
  if (static_cast<int>(word.size()) != depth_) fail(ErrorKind::DepthError, "word length differs from measure depth");
  return weights_[word.code()];
}

bool MeasureTable::is_unit() const noexcept { return std::abs(total_ - 1.0) <= kUnitMeasureTol; }

double MeasureTable::mass(const CylinderUnion& x) const {
  if (x.depth() > depth_) fail(ErrorKind::DepthError, "set is finer than the measure");
  const auto set = refine(x, depth_);
  double acc = 0.0;
  for (auto c : set.codes()) acc += weights_[c];
  return acc;
}

double MeasureTable::prefix_mass(const BinaryWord& prefix) const {
  if (static_cast<int>(prefix.size()) > depth_) fail(ErrorKind::DepthError, "prefix longer than measure depth");
  return mass(cylinder(prefix, depth_));
}

std::vector<std::vector<double>> MeasureTable::prefix_tree() const {
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(depth_) + 1);
  levels[static_cast<std::size_t>(depth_)] = weights_;
  for (int m = depth_ - 1; m >= 0; --m) {
    const auto& finer = levels[static_cast<std::size_t>(m) + 1];
    auto& level = levels[static_cast<std::size_t>(m)];
    level.resize(finer.size() / 2);
    for (std::size_t c = 0; c < level.size(); ++c) level[c] = finer[2 * c] + finer[2 * c + 1];
  }
  return levels;
}

MeasureTable MeasureTable::normalized() const {
  if (total_ <= kZeroTol) fail(ErrorKind::ZeroVector, "cannot normalise a null measure");
  return scaled(1.0 / total_);
}

MeasureTable MeasureTable::scaled(double factor) const {
  auto w = weights_;
  for (auto& x : w) x *= factor;
  return MeasureTable(depth_, std::move(w));
}

double max_atom_deviation(const MeasureTable& a, const MeasureTable& b) {
  if (a.depth() != b.depth()) fail(ErrorKind::DepthError, "measures of different depth");
  double worst = 0.0;
  for (std::size_t c = 0; c < a.weights().size(); ++c) worst = std::max(worst, std::abs(a.weights()[c] - b.weights()[c]));
  return worst;
}

MeasureTable induced_measure(const ProjectionValuedMap& map, const StateVector& psi) {
  require_matching(map, psi);
  require_nonzero(psi);
  std::vector<double> w(map.atom_count());
  for (WordCode c = 0; c < w.size(); ++c) w[c] = map.atom(c).apply(psi.amplitudes()).squaredNorm();
  return MeasureTable(map.depth(), std::move(w));
}

MeasureTable homogeneous_measure(double q, int depth) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::DomainError, "q must lie strictly between 0 and 1, got " + sci(q));
  if (depth < 0 || depth > kMaxSetDepth) fail(ErrorKind::DepthError, "measure depth out of range");
  std::vector<double> w(std::size_t{1} << depth);
  for (WordCode c = 0; c < w.size(); ++c) {
    double p = 1.0;
    for (int m = 0; m < depth; ++m) p *= ((c >> (depth - 1 - m)) & 1U) ? q : 1.0 - q;
    w[c] = p;
  }
  return MeasureTable(depth, std::move(w));
}

HomogeneityReport is_q_homogeneous(const ProjectionValuedMap& map, const StateVector& psi, double q, double tol) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::DomainError, "q must lie strictly between 0 and 1");
  require_matching(map, psi);
  if (std::abs(psi.squared_norm() - 1.0) > 1e-9) {
    fail(ErrorKind::NotNormalized, "state has squared norm " + sci(psi.squared_norm()));
  }
  const auto mu = induced_measure(map, psi);
  const auto tree = mu.prefix_tree();

  HomogeneityReport report;
  for (int m = 0; m < map.depth(); ++m) {
    const auto& level = tree[static_cast<std::size_t>(m)];
    const auto& next = tree[static_cast<std::size_t>(m) + 1];
    for (WordCode c = 0; c < level.size(); ++c) {
      const double violation = std::abs(next[2 * c + 1] - q * level[c]);
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_prefix = BinaryWord::from_code(c, m);
      }
    }
  }
  report.max_atom_deviation = max_atom_deviation(mu, homogeneous_measure(q, map.depth()));
  report.homogeneous = report.max_violation <= tol;
  return report;
}

double CyclicSubspace::residual(const Vector& v) const { return (v - project(v)).norm(); }

Vector CyclicSubspace::project(const Vector& v) const {
  Vector acc = Vector::Zero(v.size());
  for (const auto& b : basis_) acc += b * b.dot(v);
  return acc;
}

CyclicSubspace cyclic_subspace(const ProjectionValuedMap& map, const StateVector& psi) {
  require_matching(map, psi);
  require_nonzero(psi);
  CyclicSubspace out;
  out.source_ = psi;
  const double drop = 1e-10 * psi.norm();
  for (WordCode c = 0; c < map.atom_count(); ++c) {
    Vector v = map.atom(c).apply(psi.amplitudes());
    if (v.norm() <= drop) continue;
    // Two Gram-Schmidt passes keep the basis orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : out.basis_) v -= b * b.dot(v);
    }
    const double n = v.norm();
    if (n <= drop) continue;
    out.basis_.push_back(v / n);
  }
  return out;
}

bool is_absolutely_continuous(const MeasureTable& nu, const MeasureTable& mu) {
  if (nu.depth() != mu.depth()) {
    fail(ErrorKind::DepthError, "measures of depth " + std::to_string(nu.depth()) + " and " +
                                    std::to_string(mu.depth()));
  }
  for (std::size_t c = 0; c < mu.weights().size(); ++c) {
    if (mu.weights()[c] <= kZeroTol && nu.weights()[c] > kZeroTol) return false;
  }
  return true;
}

std::vector<double> radon_nikodym_density(const MeasureTable& nu, const MeasureTable& mu_normalized) {
  if (!is_absolutely_continuous(nu, mu_normalized)) {
    fail(ErrorKind::NotAbsolutelyContinuous, "target charges an atom that the reference measure annihilates");
  }
  std::vector<double> density(nu.weights().size(), 0.0);
  for (std::size_t c = 0; c < density.size(); ++c) {
    const double m = mu_normalized.weights()[c];
    if (m > kZeroTol) density[c] = nu.weights()[c] / m;
  }
  return density;
}

StateVector radon_nikodym_vector(const ProjectionValuedMap& map, const StateVector& psi, const MeasureTable& nu) {
  require_matching(map, psi);
  require_nonzero(psi);
  if (nu.depth() != map.depth()) {
    fail(ErrorKind::DepthError, "target measure depth " + std::to_string(nu.depth()) + " differs from map depth " +
                                    std::to_string(map.depth()));
  }
  if (!nu.is_unit()) fail(ErrorKind::NotUnitMeasure, "target measure has total " + sci(nu.total()));
  const auto mu = induced_measure(map, psi).normalized();
  auto root = radon_nikodym_density(nu, mu);
  for (auto& f : root) f = std::sqrt(f);
  return StateVector(integrate_apply(map, root, psi.amplitudes()));
}

ContinuityReport absolute_continuity_forward_check(const ProjectionValuedMap& map, const StateVector& psi,
                                                   const StateVector& psi_prime) {
  require_matching(map, psi);
  require_matching(map, psi_prime);
  const auto mu = induced_measure(map, psi).normalized();
  ContinuityReport report;
  if (!psi_prime.is_zero()) {
    const auto mu_prime = induced_measure(map, psi_prime).normalized();
    for (std::size_t c = 0; c < mu.weights().size(); ++c) {
      if (mu.weights()[c] <= kZeroTol) report.max_violation = std::max(report.max_violation, mu_prime.weights()[c]);
    }
    report.subspace_residual = cyclic_subspace(map, psi).residual(psi_prime.amplitudes()) / psi_prime.norm();
  }
  report.absolutely_continuous = report.max_violation <= kZeroTol;
  report.in_cyclic_subspace = report.subspace_residual <= 1e-9;
  return report;
}

ContinuityReport absolute_continuity_forward_check(const ProjectionValuedMap& map, const StateVector& psi,
                                                   const CylinderUnion& x) {
  require_matching(map, psi);
  return absolute_continuity_forward_check(map, psi, StateVector(apply(map, x).apply(psi.amplitudes())));
}

}  // namespace qprob
