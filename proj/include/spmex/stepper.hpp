#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "diffusion.hpp"
#include "grids.hpp"
#include "params.hpp"

namespace spmex {

/** Largest dt the explicit scheme tolerates on the given grids: the solid
 *  bound 0.2 dr^2/D_s per particle and the analogous electrolyte bound
 *  0.5 eps_e dx^2/D_eff per region (porosity slows the effective diffusion,
 *  the Bruggeman correction speeds the bound's decay with dx).
 */
inline double max_stable_dt(const ParamSet& p, const RadialGrid& g_neg,
                            const RadialGrid& g_pos, const PlanarGrid& g_e) {
  double bound = 0.2 * g_neg.dr() * g_neg.dr() / p.D_s_neg;
  bound = std::min(bound, 0.2 * g_pos.dr() * g_pos.dr() / p.D_s_pos);
  for (Region r : {Region::Neg, Region::Sep, Region::Pos}) {
    const double dx = (r == Region::Neg)   ? g_e.l_neg / g_e.n_neg
                      : (r == Region::Sep) ? g_e.l_sep / g_e.n_sep
                                           : g_e.l_pos / g_e.n_pos;
    bound = std::min(bound, 0.5 * eps_e_of(p, r) * dx * dx / d_eff_of(p, r));
  }
  return bound;
}

struct StepperConfig {
  double dt = 0;
  std::string method = "rk4";

  StepperConfig() = default;

  /// Checks dt against the diffusion stability bound for the grids in use.
  StepperConfig(double dt_, const ParamSet& p, const RadialGrid& g_neg,
                const RadialGrid& g_pos, const PlanarGrid& g_e)
      : dt(dt_) {
    if (!(dt > 0))
      throw std::invalid_argument("dt = " + std::to_string(dt) + " must be positive");
    const double bound = max_stable_dt(p, g_neg, g_pos, g_e);
    if (dt > bound)
      throw std::invalid_argument("dt = " + std::to_string(dt) +
                                  " exceeds the diffusion stability bound " +
                                  std::to_string(bound));
  }
};

/** Classical explicit 4-stage Runge-Kutta step.  rhs must be pure; the result
 *  is checked for finiteness component-wise.
 */
template <class Rhs>
std::vector<double> rk4_step(const std::vector<double>& y, Rhs&& rhs, double dt) {
  const std::size_t n = y.size();
  std::vector<double> k1 = rhs(y);
  std::vector<double> tmp(n);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = rhs(tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + dt * k3[i];
  std::vector<double> k4 = rhs(tmp);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::isfinite(out[i]))
      throw std::runtime_error("rk4_step produced a non-finite value at component " +
                               std::to_string(i));
  }
  return out;
}

} // namespace spmex
