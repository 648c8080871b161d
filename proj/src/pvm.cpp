#include "qprob/pvm.hpp"

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

CylinderUnion at_map_depth(const ProjectionValuedMap& map, const CylinderUnion& x) {
  if (x.depth() > map.depth()) {
    fail(ErrorKind::DepthError, "set of depth " + std::to_string(x.depth()) + " is finer than map depth " +
                                    std::to_string(map.depth()));
  }
  return refine(x, map.depth());
}

bool all_diagonal(const std::vector<Projection>& atoms) {
  return std::all_of(atoms.begin(), atoms.end(), [](const Projection& p) { return p.is_diagonal(); });
}

// Sum of the selected atoms, kept diagonal when every atom is.
Projection sum_atoms(const std::vector<Projection>& atoms, Index dim, const std::function<bool(WordCode)>& keep) {
  if (all_diagonal(atoms)) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (WordCode c = 0; c < atoms.size(); ++c) {
      if (keep(c)) acc += atoms[c].diagonal();
    }
    return Projection::from_diagonal(std::move(acc));
  }
  Matrix acc = Matrix::Zero(dim, dim);
  for (WordCode c = 0; c < atoms.size(); ++c) {
    if (keep(c)) acc += atoms[c].matrix();
  }
  return make_projection(acc);
}

}  // namespace

const Projection& ProjectionValuedMap::atom(const BinaryWord& word) const {
  if (static_cast<int>(word.size()) != depth_) fail(ErrorKind::DepthError, "atom word must have the map depth");
  return atoms_.at(word.code());
}

std::size_t pvm_storage_entries(const PropositionFamily& family, int depth) {
  const auto dim = static_cast<std::size_t>(family.dim());
  const std::size_t per_atom = family.all_diagonal() ? dim : dim * dim;
  return (std::size_t{1} << depth) * per_atom;
}

ProjectionValuedMap build_pvm(const PropositionFamily& family, int depth) {
  if (depth < 0) fail(ErrorKind::DepthError, "negative depth");
  if (depth > kMaxMapDepth) {
    fail(ErrorKind::SizeGuard, "map depth " + std::to_string(depth) + " exceeds limit " + std::to_string(kMaxMapDepth));
  }
  if (static_cast<std::size_t>(depth) > family.size()) {
    fail(ErrorKind::DepthError, "map depth " + std::to_string(depth) + " exceeds family length " +
                                    std::to_string(family.size()));
  }
  if (pvm_storage_entries(family, depth) > kMaxMapEntries) {
    fail(ErrorKind::SizeGuard, "atom table of " + std::to_string(pvm_storage_entries(family, depth)) +
                                   " entries exceeds the memory guard");
  }

  const Index dim = family.dim();
  std::vector<Projection> atoms{Projection::identity(dim)};
  for (int m = 0; m < depth; ++m) {
    const Projection& pm = family[static_cast<std::size_t>(m)];
    std::vector<Projection> next;
    next.reserve(atoms.size() * 2);
    for (const auto& a : atoms) {
      // a (1 - P_m) = a - a P_m; a P_m
      next.push_back(combine_unchecked(a, pm, 1.0, 0.0, -1.0));
      next.push_back(product_unchecked(a, pm));
    }
    atoms = std::move(next);
  }

  // Validated projections summing to the identity are automatically
  // pairwise orthogonal, so no quadratic orthogonality sweep is needed.
  for (auto& a : atoms) {
    a = a.is_diagonal() ? Projection::from_diagonal(a.diagonal()) : make_projection(a.matrix());
  }
  const double resolution = distance(sum_atoms(atoms, dim, [](WordCode) { return true; }), Projection::identity(dim));
  if (resolution > kIdemTol * std::max(1.0, std::sqrt(static_cast<double>(dim)))) {
    fail(ErrorKind::NotCommuting, "atoms fail to resolve the identity, residual " + sci(resolution));
  }
  for (int n = 0; n < depth; ++n) {
    const int shift = depth - 1 - n;
    const auto recovered = sum_atoms(atoms, dim, [shift](WordCode c) { return ((c >> shift) & 1U) == 1U; });
    const auto& pn = family[static_cast<std::size_t>(n)];
    const double r = distance(recovered, pn);
    if (r > kIdemTol * std::max(1.0, pn.frobenius_norm())) {
      fail(ErrorKind::NotCommuting, "atoms fail to reassemble generator " + std::to_string(n) + ", residual " + sci(r));
    }
  }

  ProjectionValuedMap map;
  map.family_ = family;
  map.depth_ = depth;
  map.atoms_ = std::move(atoms);
  return map;
}

Projection apply(const ProjectionValuedMap& map, const CylinderUnion& x) {
  const auto set = at_map_depth(map, x);
  return sum_atoms(map.atoms(), map.dim(), [&set](WordCode c) { return set.contains(c); });
}

Matrix integrate(const ProjectionValuedMap& map, std::span<const double> values) {
  if (values.size() != map.atom_count()) {
    fail(ErrorKind::DepthError, "simple function has " + std::to_string(values.size()) + " values for " +
                                    std::to_string(map.atom_count()) + " atoms");
  }
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorKind::DomainError, "simple function takes a non-finite value");
  }
  const Index dim = map.dim();
  const auto& atoms = map.atoms();
  if (map.family().all_diagonal()) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (WordCode c = 0; c < atoms.size(); ++c) acc += values[c] * atoms[c].diagonal();
    return acc.cast<Complex>().asDiagonal();
  }
  Matrix acc = Matrix::Zero(dim, dim);
  for (WordCode c = 0; c < atoms.size(); ++c) {
    if (values[c] != 0.0) acc += values[c] * atoms[c].matrix();
  }
  return acc;
}

Matrix integrate(const ProjectionValuedMap& map, const std::function<double(const BinaryWord&)>& g) {
  std::vector<double> values(map.atom_count());
  for (WordCode c = 0; c < values.size(); ++c) values[c] = g(BinaryWord::from_code(c, map.depth()));
  return integrate(map, values);
}

Vector integrate_apply(const ProjectionValuedMap& map, std::span<const double> values, const Vector& psi) {
  if (values.size() != map.atom_count()) fail(ErrorKind::DepthError, "simple function size does not match atoms");
  if (psi.size() != map.dim()) fail(ErrorKind::DimMismatch, "state dimension does not match map");
  Vector acc = Vector::Zero(map.dim());
  for (WordCode c = 0; c < values.size(); ++c) {
    if (values[c] != 0.0) acc += values[c] * map.atom(c).apply(psi);
  }
  return acc;
}

Matrix cantor_operator(const ProjectionValuedMap& map) {
  return integrate(map, [](const BinaryWord& w) { return cantor_point(w); });
}

std::vector<Matrix> cantor_spectral_atoms(const Matrix& a, int depth) {
  if (depth < 0 || depth > kMaxSetDepth) fail(ErrorKind::DepthError, "bad depth for spectral grouping");
  const Index dim = a.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  std::vector<Matrix> out(std::size_t{1} << depth, Matrix::Zero(dim, dim));
  for (Index k = 0; k < dim; ++k) {
    const WordCode c = cantor_cell(values(k), depth).code();
    out[c] += vectors.col(k) * vectors.col(k).adjoint();
  }
  return out;
}

Matrix indicator_calculus(const Matrix& a, const CylinderUnion& x) {
  const Index dim = a.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  const auto& values = solver.eigenvalues();
  const Matrix& vectors = solver.eigenvectors();
  Matrix out = Matrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    if (x.contains(cantor_cell(values(k), x.depth()).code())) out += vectors.col(k) * vectors.col(k).adjoint();
  }
  return out;
}

CylinderUnion kernel(const ProjectionValuedMap& map) {
  std::vector<WordCode> codes;
  for (WordCode c = 0; c < map.atom_count(); ++c) {
    if (map.atom(c).frobenius_norm() <= kZeroTol) codes.push_back(c);
  }
  return CylinderUnion::from_codes(map.depth(), std::move(codes));
}

bool in_kernel(const ProjectionValuedMap& map, const CylinderUnion& x) {
  return at_map_depth(map, x).is_subset_of(kernel(map));
}

}  // namespace qprob
