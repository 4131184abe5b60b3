#include "tfdg/dg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfdg/errors.hpp"

namespace tfdg {

DGSpace::DGSpace(SpatialMesh mesh, int degree, double sigma, int volume_points)
    : DGSpace(mesh, degree, std::vector<double>(mesh.elements() + 1, sigma), volume_points) {}

DGSpace::DGSpace(SpatialMesh mesh, int degree, std::vector<double> sigma, int volume_points)
    : mesh_(std::move(mesh)), degree_(degree), sigma_(std::move(sigma)), basis_(degree) {
  if (static_cast<int>(sigma_.size()) != mesh_.elements() + 1)
    throw ArgumentError("DGSpace: need M+1 penalty values, got " + std::to_string(sigma_.size()));
  for (double s : sigma_)
    if (!(s >= 0.0)) throw ArgumentError("DGSpace: penalty values must be nonnegative");
  if (volume_points == 0) volume_points = degree + 3;
  if (volume_points < degree + 2)
    throw ArgumentError("DGSpace: volume rule needs at least k+2 points, got " + std::to_string(volume_points));
  volume_rule_ = gauss_rule(volume_points);
  gauss_k_rule_ = gauss_rule(degree);
  build();
}

void DGSpace::build() {
  const int nq = volume_rule_.npoints();
  const int n = local_size();
  phi_.resize(nq * n);
  dphi_.resize(nq * n);
  for (int q = 0; q < nq; ++q)
    basis_.eval(volume_rule_.nodes[q], std::span<double>(phi_).subspan(q * n, n),
                std::span<double>(dphi_).subspan(q * n, n));
  left_ = basis_.eval(-1.0);
  right_ = basis_.eval(1.0);
  mass_ = Block::Zero(n, n);
  for (int q = 0; q < nq; ++q)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mass_(i, j) += volume_rule_.weights[q] * phi(q, i) * phi(q, j);
  mass_ *= jacobian();
}

DGFunction::DGFunction(std::shared_ptr<const DGSpace> space)
    : space_(std::move(space)), coeffs_(Vector::Zero(space_->dimension())) {}

DGFunction::DGFunction(std::shared_ptr<const DGSpace> space, Vector coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_->dimension()) throw ArgumentError("DGFunction: coefficient size mismatch");
}

double DGFunction::value(int e, double z) const {
  const auto ev = space_->basis().eval(z);
  double s = 0.0;
  for (int i = 0; i < space_->local_size(); ++i) s += coeff(e, i) * ev.values[i];
  return s;
}

double DGFunction::derivative(int e, double z) const {
  const auto ev = space_->basis().eval(z);
  double s = 0.0;
  for (int i = 0; i < space_->local_size(); ++i) s += coeff(e, i) * ev.derivatives[i];
  return s / space_->jacobian();
}

namespace {

double reference_coordinate(const SpatialMesh& mesh, int e, double y) {
  return std::clamp((y - mesh.midpoint(e)) / (0.5 * mesh.width()), -1.0, 1.0);
}

double dot(std::span<const double> a, const DGFunction& f, int e) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * f.coeff(e, static_cast<int>(i));
  return s;
}

void check_node(const DGSpace& space, int m) {
  if (m < 1 || m > space.elements() + 1)
    throw ArgumentError("node index " + std::to_string(m) + " out of range [1, " +
                        std::to_string(space.elements() + 1) + "]");
}

}  // namespace

double DGFunction::value(double y) const {
  const int e = space_->mesh().locate(y);
  return value(e, reference_coordinate(space_->mesh(), e, y));
}

double DGFunction::derivative(double y) const {
  const int e = space_->mesh().locate(y);
  return derivative(e, reference_coordinate(space_->mesh(), e, y));
}

double DGFunction::trace_minus(int m) const {
  check_node(*space_, m);
  return m >= 2 ? dot(space_->right_values(), *this, m - 2) : 0.0;
}

double DGFunction::trace_plus(int m) const {
  check_node(*space_, m);
  return m <= space_->elements() ? dot(space_->left_values(), *this, m - 1) : 0.0;
}

double DGFunction::derivative_minus(int m) const {
  check_node(*space_, m);
  return m >= 2 ? dot(space_->right_derivatives(), *this, m - 2) / space_->jacobian() : 0.0;
}

double DGFunction::derivative_plus(int m) const {
  check_node(*space_, m);
  return m <= space_->elements() ? dot(space_->left_derivatives(), *this, m - 1) / space_->jacobian() : 0.0;
}

TraceValues trace_ops(const DGFunction& v, int m) {
  const int last = v.space().elements() + 1;
  check_node(v.space(), m);
  if (m == 1) {
    const double p = v.trace_plus(1);
    return {p, p};
  }
  if (m == last) {
    const double minus = v.trace_minus(last);
    return {-minus, minus};
  }
  const double minus = v.trace_minus(m), plus = v.trace_plus(m);
  return {plus - minus, 0.5 * (plus + minus)};
}

BlockTridiagonalMatrix::BlockTridiagonalMatrix(int blocks, int block_size)
    : block_size_(block_size),
      diag_(blocks, Block::Zero(block_size, block_size)),
      lower_(std::max(blocks - 1, 0), Block::Zero(block_size, block_size)),
      upper_(std::max(blocks - 1, 0), Block::Zero(block_size, block_size)) {
  if (blocks < 1 || block_size < 1) throw ArgumentError("BlockTridiagonalMatrix: empty shape");
}

Block& BlockTridiagonalMatrix::block(int row_block, int col_block) {
  if (row_block == col_block) return diag_[row_block];
  if (row_block == col_block + 1) return lower_[col_block];
  if (col_block == row_block + 1) return upper_[row_block];
  throw ArgumentError("BlockTridiagonalMatrix: block outside the tridiagonal band");
}

Vector BlockTridiagonalMatrix::apply(const Vector& x) const {
  const int b = block_size_;
  if (x.size() != size()) throw ArgumentError("BlockTridiagonalMatrix::apply: size mismatch");
  Vector y(size());
  for (int e = 0; e < blocks(); ++e) {
    Vector row = diag_[e] * x.segment(e * b, b);
    if (e > 0) row += lower_[e - 1] * x.segment((e - 1) * b, b);
    if (e + 1 < blocks()) row += upper_[e] * x.segment((e + 1) * b, b);
    y.segment(e * b, b) = row;
  }
  return y;
}

BlockTridiagonalMatrix BlockTridiagonalMatrix::transposed() const {
  BlockTridiagonalMatrix t(blocks(), block_size_);
  for (int e = 0; e < blocks(); ++e) t.diag_[e] = diag_[e].transpose();
  for (int e = 0; e + 1 < blocks(); ++e) {
    t.lower_[e] = upper_[e].transpose();
    t.upper_[e] = lower_[e].transpose();
  }
  return t;
}

Eigen::MatrixXd BlockTridiagonalMatrix::to_dense() const {
  const int b = block_size_;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size(), size());
  for (int e = 0; e < blocks(); ++e) {
    d.block(e * b, e * b, b, b) = diag_[e];
    if (e + 1 < blocks()) {
      d.block((e + 1) * b, e * b, b, b) = lower_[e];
      d.block(e * b, (e + 1) * b, b, b) = upper_[e];
    }
  }
  return d;
}

BlockTridiagonalMatrix& BlockTridiagonalMatrix::operator+=(const BlockTridiagonalMatrix& other) {
  if (other.blocks() != blocks() || other.block_size_ != block_size_)
    throw ArgumentError("BlockTridiagonalMatrix: shape mismatch");
  for (int e = 0; e < blocks(); ++e) diag_[e] += other.diag_[e];
  for (std::size_t e = 0; e < lower_.size(); ++e) {
    lower_[e] += other.lower_[e];
    upper_[e] += other.upper_[e];
  }
  return *this;
}

BlockTridiagonalMatrix& BlockTridiagonalMatrix::operator-=(const BlockTridiagonalMatrix& other) {
  if (other.blocks() != blocks() || other.block_size_ != block_size_)
    throw ArgumentError("BlockTridiagonalMatrix: shape mismatch");
  for (int e = 0; e < blocks(); ++e) diag_[e] -= other.diag_[e];
  for (std::size_t e = 0; e < lower_.size(); ++e) {
    lower_[e] -= other.lower_[e];
    upper_[e] -= other.upper_[e];
  }
  return *this;
}

BlockTridiagonalMatrix assemble_B1(const DGSpace& space, const SpaceFunction& K, const SpaceFunction& c) {
  const int n = space.local_size();
  const auto& rule = space.volume_rule();
  const double jac = space.jacobian();
  BlockTridiagonalMatrix A(space.elements(), n);
  for (int e = 0; e < space.elements(); ++e) {
    Block& D = A.diag(e);
    for (int q = 0; q < rule.npoints(); ++q) {
      const double y = space.mesh().map(e, rule.nodes[q]);
      const double kq = K(y), cq = c(y);
      if (!(kq > 0.0))
        throw CoefficientError("diffusion coefficient must be positive, got " + std::to_string(kq) +
                               " at y = " + std::to_string(y));
      if (!(cq >= 0.0))
        throw CoefficientError("reaction coefficient must be nonnegative, got " + std::to_string(cq) +
                               " at y = " + std::to_string(y));
      const double w = rule.weights[q] * jac;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          D(i, j) += w * (kq * space.dphi(q, i) * space.dphi(q, j) / (jac * jac) +
                          cq * space.phi(q, i) * space.phi(q, j));
    }
  }
  return A;
}

namespace {

// One element's share of the jump and average at a mesh node.
struct NodeSide {
  int element;
  std::span<const double> values;
  std::span<const double> derivatives;  // reference derivatives
  double jump_sign;
  double average_weight;
};

std::vector<NodeSide> node_sides(const DGSpace& space, int m) {
  const int M = space.elements();
  std::vector<NodeSide> sides;
  const bool boundary = (m == 1 || m == M + 1);
  const double avg = boundary ? 1.0 : 0.5;
  if (m >= 2) sides.push_back({m - 2, space.right_values(), space.right_derivatives(), -1.0, avg});
  if (m <= M) sides.push_back({m - 1, space.left_values(), space.left_derivatives(), +1.0, avg});
  return sides;
}

}  // namespace

BlockTridiagonalMatrix assemble_B2(const DGSpace& space, const SpaceFunction& K) {
  const int n = space.local_size();
  const double jac = space.jacobian();
  BlockTridiagonalMatrix A(space.elements(), n);
  for (int m = 1; m <= space.elements() + 1; ++m) {
    const double y = space.mesh().node(m);
    const double km = K(y);
    if (!(km > 0.0))
      throw CoefficientError("diffusion coefficient must be positive, got " + std::to_string(km) +
                             " at node y = " + std::to_string(y));
    const auto sides = node_sides(space, m);
    for (const auto& test : sides)
      for (const auto& trial : sides) {
        Block& blk = A.block(test.element, trial.element);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            blk(i, j) += km * trial.average_weight * trial.derivatives[j] / jac * test.jump_sign * test.values[i];
      }
  }
  return A;
}

BlockTridiagonalMatrix assemble_B3(const DGSpace& space) {
  const int n = space.local_size();
  BlockTridiagonalMatrix A(space.elements(), n);
  for (int m = 1; m <= space.elements() + 1; ++m) {
    const double sigma = space.sigma(m);
    if (sigma == 0.0) continue;
    const auto sides = node_sides(space, m);
    for (const auto& test : sides)
      for (const auto& trial : sides) {
        Block& blk = A.block(test.element, trial.element);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            blk(i, j) += sigma * test.jump_sign * test.values[i] * trial.jump_sign * trial.values[j];
      }
  }
  return A;
}

BlockTridiagonalMatrix assemble_full(const DGSpace& space, const SpaceFunction& K, const SpaceFunction& c) {
  BlockTridiagonalMatrix A = assemble_B1(space, K, c);
  const BlockTridiagonalMatrix flux = assemble_B2(space, K);
  A += flux;
  A -= flux.transposed();
  A += assemble_B3(space);
  return A;
}

Vector source_vector(const DGSpace& space, const SpaceFunction& source) {
  const int n = space.local_size();
  const auto& rule = space.volume_rule();
  Vector b = Vector::Zero(space.dimension());
  for (int e = 0; e < space.elements(); ++e)
    for (int q = 0; q < rule.npoints(); ++q) {
      const double w = rule.weights[q] * space.jacobian() * source(space.mesh().map(e, rule.nodes[q]));
      for (int i = 0; i < n; ++i) b[e * n + i] += w * space.phi(q, i);
    }
  return b;
}

Vector apply_mass(const DGSpace& space, const Vector& coeffs) {
  const int n = space.local_size();
  if (coeffs.size() != space.dimension()) throw ArgumentError("apply_mass: size mismatch");
  Vector out(space.dimension());
  for (int e = 0; e < space.elements(); ++e)
    out.segment(e * n, n) = space.element_mass() * coeffs.segment(e * n, n);
  return out;
}

Vector load_vector(const DGSpace& space, const SpaceFunction& source, std::span<const HistoryTerm> history) {
  Vector b = source ? source_vector(space, source) : Vector::Zero(space.dimension());
  if (history.empty()) return b;
  Vector combined = Vector::Zero(space.dimension());
  for (const auto& term : history) {
    const DGFunction& u = term.function.get();
    if (&u.space() != &space) throw ArgumentError("load_vector: history function lives on a different space");
    combined += term.weight * u.coeffs();
  }
  return b + apply_mass(space, combined);
}

DGFunction project_initial(std::shared_ptr<const DGSpace> space, const SpaceFunction& g) {
  const int n = space->local_size();
  const Vector b = source_vector(*space, g);
  Eigen::PartialPivLU<Block> lu(space->element_mass());
  if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
    throw InternalError("project_initial: singular element mass matrix");
  DGFunction u(space);
  for (int e = 0; e < space->elements(); ++e) u.coeffs().segment(e * n, n) = lu.solve(b.segment(e * n, n));
  return u;
}

Vector solve(const BlockTridiagonalMatrix& A, const Vector& rhs) {
  const int nb = A.blocks();
  const int b = A.block_size();
  if (rhs.size() != A.size()) throw ArgumentError("solve: right-hand side size mismatch");
  std::vector<Eigen::PartialPivLU<Block>> pivots;
  pivots.reserve(nb);
  Vector y(A.size());
  auto factor = [&](const Block& blk, int e) {
    pivots.emplace_back(blk);
    const auto d = pivots.back().matrixLU().diagonal().cwiseAbs();
    if (d.minCoeff() == 0.0 || !std::isfinite(d.maxCoeff()))
      throw SolverError("solve: singular pivot block at element " + std::to_string(e));
  };
  factor(A.diag(0), 0);
  y.segment(0, b) = rhs.segment(0, b);
  // Forward elimination: D'_e = D_e - L_{e-1} D'^{-1}_{e-1} U_{e-1}.
  std::vector<Block> gain(std::max(nb - 1, 0));
  for (int e = 1; e < nb; ++e) {
    gain[e - 1] = pivots[e - 1].solve(A.upper(e - 1));
    const Block reduced = A.diag(e) - A.lower(e - 1) * gain[e - 1];
    y.segment(e * b, b) = rhs.segment(e * b, b) - A.lower(e - 1) * pivots[e - 1].solve(y.segment((e - 1) * b, b));
    factor(reduced, e);
  }
  Vector x(A.size());
  x.segment((nb - 1) * b, b) = pivots[nb - 1].solve(y.segment((nb - 1) * b, b));
  for (int e = nb - 2; e >= 0; --e)
    x.segment(e * b, b) = pivots[e].solve(y.segment(e * b, b)) - gain[e] * x.segment((e + 1) * b, b);
  return x;
}

}  // namespace tfdg
