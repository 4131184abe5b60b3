#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tfdg/dg.hpp"
#include "tfdg/fractional.hpp"
#include "tfdg/stepper.hpp"

namespace tfdg {

/// Error of a DG approximation measured four ways.
struct NormReport {
  double l2 = 0.0;
  double linf = 0.0;
  double dg_energy = 0.0;
  double discrete_energy = 0.0;
  double beta = 1.0;
};

/// beta = min{p* a*, p* b*}. When that vanishes (b = 0) the value
/// min{p* a*, min_n c^n*} is used instead and `fallback` is set.
struct BetaWeight {
  double value = 1.0;
  bool fallback = false;
  std::string warning;
};

/// Reaction coefficient sampled at (y, level n).
using LevelReaction = std::function<double(double y, int n)>;

BetaWeight beta_weight(const DGSpace& space, const L1Coefficients& l1, const SpaceFunction& a,
                       const LevelReaction& b, const TimeFunction& p);
BetaWeight beta_weight(const LinearProblemSpec& problem, const DGSpace& space, const L1Coefficients& l1);

/// Norms of e = u - u_h:
///   l2, linf (sampled on 10(k+1)+1 points per element),
///   |||e|||_DG^2 = beta sum_m int (e_y^2 + e^2) + sum_m sigma_m [e(y_m)]^2,
///   |||e|||^2    = beta sum_m (h/2) sum_j w_j e_y(y_mj)^2 + beta ||e||^2 + sum_m sigma_m [e(y_m)]^2,
/// with y_mj the k Gauss points of element m. Volume integrals use k+5
/// Gauss points.
NormReport error_norms(const DGFunction& uh, const SpaceFunction& exact, const SpaceFunction& exact_derivative,
                       double beta);

/// Norms of v itself (exact solution zero).
NormReport function_norms(const DGFunction& v, double beta);

/// Piecewise Lagrange interpolant at the mapped Lobatto points.
DGFunction lobatto_interpolant(std::shared_ptr<const DGSpace> space, const SpaceFunction& u);

/// Pairwise log2(E_i / E_{i+1}) along a doubling sequence of resolutions.
std::vector<double> convergence_order(std::span<const std::pair<double, double>> errors);

}  // namespace tfdg
