#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grids.hpp"

namespace spmex {

/** Node weights w_i such that M = sum_i w_i c_i plays the role of
 *  integral r^2 c dr for the companion finite-difference diffusion scheme:
 *  dM/dt = -surface_flux * R_p^2 exactly (not merely to truncation order),
 *  and sum_i w_i = R_p^3 / 3 exactly, so a uniform profile has the right
 *  total.  Derived by requiring the scheme's interior stencil to
 *  telescope; the usual trapezoid weights do not have this property.
 */
inline std::vector<double> radial_mass_weights(const RadialGrid& g) {
  const int N = g.n_shells;
  const double dr3 = g.dr() * g.dr() * g.dr();
  const double beta = static_cast<double>(N) * N / (static_cast<double>(N) * N - 1.0);
  std::vector<double> w(static_cast<std::size_t>(N) + 1);
  w[0] = 0.0;
  for (int i = 1; i < N; ++i) w[i] = static_cast<double>(i) * i * dr3 * beta;
  w[N] = 0.5 * N * (N - 1.0) * dr3 * beta;
  return w;
}

/// Volume average (3/R_p^3) * sum w_i c_i; exact for uniform profiles.
inline double volume_average(const std::vector<double>& c, const RadialGrid& g) {
  if (c.size() != static_cast<std::size_t>(g.n_nodes()))
    throw std::invalid_argument("volume_average: vector size does not match grid");
  const auto w = radial_mass_weights(g);
  double m = 0;
  for (std::size_t i = 0; i < c.size(); ++i) m += w[i] * c[i];
  return 3.0 * m / (g.R_p * g.R_p * g.R_p);
}

/// (1/R_p^2) * integral_0^R_p rho^2 f(rho) drho, composite trapezoid.
inline double radial_moment_integral(const std::vector<double>& f, const RadialGrid& g) {
  if (f.size() != static_cast<std::size_t>(g.n_nodes()))
    throw std::invalid_argument("radial_moment_integral: vector size does not match grid");
  const double dr = g.dr();
  double s = 0.5 * g.R_p * g.R_p * f.back(); // r=0 endpoint contributes nothing
  for (int i = 1; i < g.n_shells; ++i) {
    const double r = g.r(i);
    s += r * r * f[static_cast<std::size_t>(i)];
  }
  return s * dr / (g.R_p * g.R_p);
}

} // namespace spmex
