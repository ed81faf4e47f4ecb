// Separable spatio-temporal correlation kernels k = sigma2 * g(dt) * h(x, x')
// and the age-equivalent distance (AeD) transform.
#pragma once

#include <functional>
#include <limits>
#include <string>

#include "aoi2d/constants.hpp"
#include "aoi2d/position.hpp"

namespace aoi2d {

enum class Family { Exponential, SquaredExponential, RationalQuadratic, Custom };

enum class KernelFamily { Exponential, SquaredExponential, RationalQuadratic, MixedProduct };

std::string to_string(Family f);
std::string to_string(KernelFamily f);
Family family_from_string(const std::string& s);

struct Kernel {
  Family temporal = Family::Exponential;
  Family spatial = Family::Exponential;
  double sigma2 = 1.0;
  double l_t = 1.0;
  double l_s = 1.0;
  bool spatially_flat = false;  // l_s = inf, h == 1
  double alpha = 1.0;           // spatial rational-quadratic shape
  double beta = 1.0;            // temporal rational-quadratic shape
  // Temporal correlation for Family::Custom: decreasing, custom_g(0) == 1.
  std::function<double(double)> custom_g;

  KernelFamily family() const;

  /// Throws DomainError when a parameter is out of range.
  void validate() const;

  static Kernel exponential(double l_t, double l_s, double sigma2 = 1.0);
  static Kernel squared_exponential(double l_t, double l_s, double sigma2 = 1.0);
  static Kernel rational_quadratic(double l_t, double l_s, double alpha, double beta,
                                   double sigma2 = 1.0);
  static Kernel mixed(Family temporal, Family spatial, double l_t, double l_s,
                      double alpha = 1.0, double beta = 1.0, double sigma2 = 1.0);
  /// Kernel with a user-supplied temporal correlation; g_inverse falls back to bisection.
  static Kernel custom(std::function<double(double)> g, Family spatial, double l_t, double l_s,
                       double alpha = 1.0, double sigma2 = 1.0);
  /// Pass kInf for l_s to get the spatially flat limit.
};

// Temporal part.
double g_temporal(const Kernel& k, double delta);
double log_g_temporal(const Kernel& k, double delta);
double g_inverse(const Kernel& k, double y);
/// Inverse of g expressed through log(y) <= 0; closed form where available.
double g_inverse_log(const Kernel& k, double log_y);
/// Monotone bisection on [0, dmax], dmax doubled from l_t until g(dmax) < y.
/// Usable for every family; it is the only route for Family::Custom.
double g_inverse_bisect(const Kernel& k, double y);

// Spatial part.
double h_spatial(const Kernel& k, const Position& a, const Position& b);
double log_h_at_distance(const Kernel& k, double r);
double log_h_spatial(const Kernel& k, const Position& a, const Position& b);

/// Lambda = g^-1(g(delta) h(a, b)) - delta. Closed forms work in the log domain and
/// stay finite; a custom g returns kInf when g(delta) h < 1e-300.
double aed(const Kernel& k, const Position& a, const Position& b, double delta);
double aed_log_h(const Kernel& k, double log_h, double delta);
/// Same quantity through g_inverse_bisect, independent of the closed forms.
double aed_generic(const Kernel& k, const Position& a, const Position& b, double delta);

/// Inverse shift: the AoI x >= 0 whose 2D-AoI x + aed(x) equals y.
/// Returns a negative value when y is below the support threshold aed(0).
double age_for_2d_aoi(const Kernel& k, double log_h, double y);

}  // namespace aoi2d
