#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "aoi2d/error.hpp"

namespace aoi2d {

/// Point in 1-, 2- or 3-dimensional Euclidean space.
class Position {
public:
  Position() = default;
  Position(std::initializer_list<double> coords) {
    if (coords.size() < 1 || coords.size() > 3)
      throw DomainError("Position: dimension must be 1, 2 or 3");
    dim_ = coords.size();
    std::size_t i = 0;
    for (double c : coords) c_[i++] = c;
  }
  static Position of(double x) { return Position{x}; }
  static Position of(double x, double y) { return Position{x, y}; }
  static Position of(double x, double y, double z) { return Position{x, y, z}; }

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const { return c_[i]; }

  friend bool operator==(const Position& a, const Position& b) {
    if (a.dim_ != b.dim_) return false;
    for (std::size_t i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }

private:
  std::array<double, 3> c_{0.0, 0.0, 0.0};
  std::size_t dim_ = 1;
};

/// Euclidean distance. Throws DomainError on dimension mismatch.
inline double distance(const Position& a, const Position& b) {
  if (a.dim() != b.dim()) throw DomainError("distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace aoi2d
