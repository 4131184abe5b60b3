#pragma once

#include <vector>

namespace tfdg {

/// Temporal mesh t_n = T ((n-1)/N)^r on [0, T]. Levels are 1-based:
/// time(1) = 0 is the initial level and time(N+1) = T the final one.
class GradedTimeMesh {
 public:
  GradedTimeMesh(double final_time, int steps, double grading);

  double final_time() const { return final_time_; }
  int steps() const { return steps_; }
  int levels() const { return steps_ + 1; }
  double grading() const { return grading_; }

  /// t_n, 1 <= n <= N+1.
  double time(int n) const { return times_[n - 1]; }
  /// tau_n = t_{n+1} - t_n, 1 <= n <= N.
  double step(int n) const { return times_[n] - times_[n - 1]; }

  const std::vector<double>& times() const { return times_; }

 private:
  double final_time_;
  int steps_;
  double grading_;
  std::vector<double> times_;
};

GradedTimeMesh graded_mesh(double final_time, int steps, double grading);

/// Uniform partition of [0, ell] into M elements K_m = (y_m, y_{m+1}).
/// Nodes are 1-based (node(1) = 0, node(M+1) = ell); elements are 0-based
/// in storage, element e spanning (node(e+1), node(e+2)).
class SpatialMesh {
 public:
  SpatialMesh(double length, int elements);

  double length() const { return length_; }
  int elements() const { return elements_; }
  double width() const { return width_; }

  double node(int m) const { return nodes_[m - 1]; }
  double left(int e) const { return nodes_[e]; }
  double right(int e) const { return nodes_[e + 1]; }
  double midpoint(int e) const { return 0.5 * (nodes_[e] + nodes_[e + 1]); }
  /// Physical coordinate of reference point z in element e.
  double map(int e, double z) const { return midpoint(e) + 0.5 * width_ * z; }
  /// Element containing y; the right one at interior nodes.
  int locate(double y) const;

  const std::vector<double>& nodes() const { return nodes_; }

 private:
  double length_;
  int elements_;
  double width_;
  std::vector<double> nodes_;
};

SpatialMesh uniform_mesh(double length, int elements);

}  // namespace tfdg
