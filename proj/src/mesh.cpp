#include "tfdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tfdg/errors.hpp"

namespace tfdg {

GradedTimeMesh::GradedTimeMesh(double final_time, int steps, double grading)
    : final_time_(final_time), steps_(steps), grading_(grading) {
  if (!(final_time > 0.0)) throw ArgumentError("graded_mesh: T must be positive");
  if (steps < 1) throw ArgumentError("graded_mesh: N must be >= 1, got " + std::to_string(steps));
  if (!(grading >= 1.0)) throw ArgumentError("graded_mesh: r must be >= 1, got " + std::to_string(grading));
  times_.resize(steps + 1);
  for (int n = 1; n <= steps + 1; ++n) {
    const double s = static_cast<double>(n - 1) / steps;
    times_[n - 1] = final_time * std::pow(s, grading);
  }
  times_.front() = 0.0;
  times_.back() = final_time;
}

GradedTimeMesh graded_mesh(double final_time, int steps, double grading) {
  return GradedTimeMesh(final_time, steps, grading);
}

SpatialMesh::SpatialMesh(double length, int elements) : length_(length), elements_(elements) {
  if (!(length > 0.0)) throw ArgumentError("uniform_mesh: length must be positive");
  if (elements < 1) throw ArgumentError("uniform_mesh: M must be >= 1, got " + std::to_string(elements));
  width_ = length / elements;
  nodes_.resize(elements + 1);
  for (int m = 1; m <= elements + 1; ++m) nodes_[m - 1] = (m - 1) * width_;
  nodes_.back() = length;
}

int SpatialMesh::locate(double y) const {
  const int e = static_cast<int>(std::floor(y / width_));
  return std::clamp(e, 0, elements_ - 1);
}

SpatialMesh uniform_mesh(double length, int elements) { return SpatialMesh(length, elements); }

}  // namespace tfdg
