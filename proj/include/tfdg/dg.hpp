#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "tfdg/mesh.hpp"
#include "tfdg/quadrature.hpp"

namespace tfdg {

using Vector = Eigen::VectorXd;
using Block = Eigen::MatrixXd;
using SpaceFunction = std::function<double(double)>;

/// Broken polynomial space of degree k over a uniform mesh, with a nodal
/// Lagrange basis at the mapped Lobatto points of each element.
///
/// Global degree of freedom (e, i) lives at index e * (k+1) + i. Penalty
/// values are attached to the 1-based mesh nodes y_1 ... y_{M+1}.
class DGSpace {
 public:
  DGSpace(SpatialMesh mesh, int degree, double sigma = 1.0, int volume_points = 0);
  DGSpace(SpatialMesh mesh, int degree, std::vector<double> sigma, int volume_points = 0);

  const SpatialMesh& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  int local_size() const { return degree_ + 1; }
  int elements() const { return mesh_.elements(); }
  int dimension() const { return elements() * local_size(); }
  double jacobian() const { return 0.5 * mesh_.width(); }

  const LagrangeBasis& basis() const { return basis_; }
  /// Assembly rule, k+3 Gauss points unless overridden.
  const QuadratureRule& volume_rule() const { return volume_rule_; }
  /// The k-point Gauss rule of the discrete energy norm.
  const QuadratureRule& gauss_k_rule() const { return gauss_k_rule_; }

  /// Penalty at node m (1-based).
  double sigma(int m) const { return sigma_[m - 1]; }
  const std::vector<double>& sigmas() const { return sigma_; }

  /// Basis value / reference derivative at volume point q.
  double phi(int q, int i) const { return phi_[q * local_size() + i]; }
  double dphi(int q, int i) const { return dphi_[q * local_size() + i]; }
  /// Basis traces at z = -1 (left) and z = +1 (right).
  std::span<const double> left_values() const { return left_.values; }
  std::span<const double> right_values() const { return right_.values; }
  std::span<const double> left_derivatives() const { return left_.derivatives; }
  std::span<const double> right_derivatives() const { return right_.derivatives; }

  /// Physical mass matrix of one element.
  const Block& element_mass() const { return mass_; }

 private:
  void build();

  SpatialMesh mesh_;
  int degree_;
  std::vector<double> sigma_;
  LagrangeBasis basis_;
  QuadratureRule volume_rule_;
  QuadratureRule gauss_k_rule_;
  std::vector<double> phi_, dphi_;
  LagrangeBasis::Evaluation left_, right_;
  Block mass_;
};

/// Member of the broken space: per-element nodal values at the mapped
/// Lobatto points.
class DGFunction {
 public:
  explicit DGFunction(std::shared_ptr<const DGSpace> space);
  DGFunction(std::shared_ptr<const DGSpace> space, Vector coeffs);

  const DGSpace& space() const { return *space_; }
  const std::shared_ptr<const DGSpace>& space_ptr() const { return space_; }

  Vector& coeffs() { return coeffs_; }
  const Vector& coeffs() const { return coeffs_; }
  double& coeff(int e, int i) { return coeffs_[e * space_->local_size() + i]; }
  double coeff(int e, int i) const { return coeffs_[e * space_->local_size() + i]; }

  /// Value and physical derivative at reference point z of element e.
  double value(int e, double z) const;
  double derivative(int e, double z) const;
  /// Evaluation at a physical point (right element at interior nodes).
  double value(double y) const;
  double derivative(double y) const;

  /// One-sided traces v(y_m - 0), v(y_m + 0) at 1-based node m. The
  /// missing side at a boundary node reports 0.
  double trace_minus(int m) const;
  double trace_plus(int m) const;
  double derivative_minus(int m) const;
  double derivative_plus(int m) const;

 private:
  std::shared_ptr<const DGSpace> space_;
  Vector coeffs_;
};

/// Jump and average at node m with the boundary conventions
/// [v(y_1)] = {v(y_1)} = v(y_1+), [v(y_{M+1})] = -v(y_{M+1}-),
/// {v(y_{M+1})} = v(y_{M+1}-).
struct TraceValues {
  double jump;
  double average;
};
TraceValues trace_ops(const DGFunction& v, int m);

/// Block tridiagonal matrix; row block e couples to column blocks e-1, e, e+1.
/// Entry (test i, trial j) of a form matrix stores B(phi_j, phi_i).
class BlockTridiagonalMatrix {
 public:
  BlockTridiagonalMatrix(int blocks, int block_size);

  int blocks() const { return static_cast<int>(diag_.size()); }
  int block_size() const { return block_size_; }
  int size() const { return blocks() * block_size_; }

  Block& diag(int e) { return diag_[e]; }
  const Block& diag(int e) const { return diag_[e]; }
  /// Coupling of row block e+1 with column block e.
  Block& lower(int e) { return lower_[e]; }
  const Block& lower(int e) const { return lower_[e]; }
  /// Coupling of row block e with column block e+1.
  Block& upper(int e) { return upper_[e]; }
  const Block& upper(int e) const { return upper_[e]; }

  /// Block (row_block, col_block); |row_block - col_block| <= 1.
  Block& block(int row_block, int col_block);

  Vector apply(const Vector& x) const;
  /// v^T A u, i.e. B(u, v) for a form matrix.
  double form(const Vector& u, const Vector& v) const { return v.dot(apply(u)); }
  BlockTridiagonalMatrix transposed() const;
  Eigen::MatrixXd to_dense() const;

  BlockTridiagonalMatrix& operator+=(const BlockTridiagonalMatrix& other);
  BlockTridiagonalMatrix& operator-=(const BlockTridiagonalMatrix& other);

 private:
  int block_size_;
  std::vector<Block> diag_, lower_, upper_;
};

/// Volume part sum_m int (K u' v' + c u v); throws CoefficientError if
/// K <= 0 or c < 0 at a quadrature point.
BlockTridiagonalMatrix assemble_B1(const DGSpace& space, const SpaceFunction& K, const SpaceFunction& c);
/// Flux part sum_m {K u'(y_m)} [v(y_m)].
BlockTridiagonalMatrix assemble_B2(const DGSpace& space, const SpaceFunction& K);
/// Penalty part sum_m sigma_m [u(y_m)] [v(y_m)].
BlockTridiagonalMatrix assemble_B3(const DGSpace& space);
/// NIPG operator B1(u,v) + B2(u,v) - B2(v,u) + B3(u,v).
BlockTridiagonalMatrix assemble_full(const DGSpace& space, const SpaceFunction& K, const SpaceFunction& c);

/// One weighted DG function of the fractional history sum.
struct HistoryTerm {
  double weight;
  std::reference_wrapper<const DGFunction> function;
};

/// <F, v> = sum_m int (f + sum_j w_j u^j) v.
Vector load_vector(const DGSpace& space, const SpaceFunction& source, std::span<const HistoryTerm> history);
/// Source part only.
Vector source_vector(const DGSpace& space, const SpaceFunction& source);
/// Element-wise mass action on a coefficient vector.
Vector apply_mass(const DGSpace& space, const Vector& coeffs);

/// Element-wise L2 projection of g onto the space.
DGFunction project_initial(std::shared_ptr<const DGSpace> space, const SpaceFunction& g);

/// Block Thomas elimination with partial pivoting inside each block.
/// Throws SolverError naming the element whose pivot block is singular.
Vector solve(const BlockTridiagonalMatrix& matrix, const Vector& rhs);

}  // namespace tfdg
