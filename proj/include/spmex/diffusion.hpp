#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "grids.hpp"
#include "params.hpp"

namespace spmex {

namespace detail {
inline void check_finite(const std::vector<double>& v, const char* who) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!std::isfinite(v[i]))
      throw std::invalid_argument(std::string(who) + ": non-finite value at index " +
                                  std::to_string(i));
}
} // namespace detail

/** RHS of dc/dt = (1/r^2) d/dr (D_s r^2 dc/dr) on a RadialGrid, second-order
 *  central stencil.  r=0 uses the symmetry limit 6 D (c1-c0)/dr^2; r=R_p
 *  eliminates a ghost node with D dc/dr = -surface_flux, so surface_flux > 0
 *  drains the particle.
 */
inline std::vector<double> spherical_diffusion_rhs(const RadialGrid& g,
                                                   const std::vector<double>& c,
                                                   double D_s, double surface_flux) {
  if (c.size() != static_cast<std::size_t>(g.n_nodes()))
    throw std::invalid_argument("spherical_diffusion_rhs: vector size does not match grid");
  detail::check_finite(c, "spherical_diffusion_rhs");
  const int N = g.n_shells;
  const double dr = g.dr();
  std::vector<double> out(c.size());
  out[0] = 6.0 * D_s * (c[1] - c[0]) / (dr * dr);
  for (int i = 1; i < N; ++i) {
    const double r = g.r(i);
    out[static_cast<std::size_t>(i)] =
        D_s * ((c[i + 1] - 2.0 * c[i] + c[i - 1]) / (dr * dr) +
               (c[i + 1] - c[i - 1]) / (dr * r));
  }
  out[static_cast<std::size_t>(N)] =
      2.0 * D_s * (c[N - 1] - c[N]) / (dr * dr) -
      2.0 * surface_flux * (1.0 / dr + 1.0 / g.R_p);
  return out;
}

inline double eps_e_of(const ParamSet& p, Region r) {
  switch (r) {
    case Region::Neg: return p.eps_e_neg;
    case Region::Sep: return p.eps_e_sep;
    default: return p.eps_e_pos;
  }
}

inline double brugg_of(const ParamSet& p, Region r) {
  switch (r) {
    case Region::Neg: return p.brugg_neg;
    case Region::Sep: return p.brugg_sep;
    default: return p.brugg_pos;
  }
}

inline double d_eff_of(const ParamSet& p, Region r) {
  return p.D_e * std::pow(eps_e_of(p, r), brugg_of(p, r));
}

/** RHS of eps_e dc_e/dt = d/dx (D_eff dc_e/dx) + source on a PlanarGrid,
 *  conservative finite volumes with zero-flux outer boundaries.  Each interval
 *  lies in one region, so the interface diffusivity needs no averaging between
 *  unequal coefficients.  Charging (I > 0) consumes salt on the negative side
 *  and releases it on the positive side; the two source integrals cancel, so
 *  total salt is invariant for any current.
 */
inline std::vector<double> electrolyte_rhs(const PlanarGrid& g,
                                           const std::vector<double>& c_e,
                                           double I, const ParamSet& p) {
  const std::size_t n = static_cast<std::size_t>(g.n_nodes());
  if (c_e.size() != n)
    throw std::invalid_argument("electrolyte_rhs: vector size does not match grid");
  detail::check_finite(c_e, "electrolyte_rhs");

  auto source_density = [&](Region r) -> double {
    const double s = (1.0 - p.t_plus0) * I / (p.F * p.A);
    if (r == Region::Neg) return -s / p.l_neg;
    if (r == Region::Pos) return s / p.l_pos;
    return 0.0;
  };

  std::vector<double> out(n, 0.0);
  std::vector<double> epsvol(n, 0.0); // porosity-weighted control volumes
  // accumulate interval fluxes and half-interval source/volume contributions
  for (int k = 0; k < g.n_intervals(); ++k) {
    const Region reg = g.region_of_interval(k);
    const double dx = g.dx(k);
    const double q = -d_eff_of(p, reg) * (c_e[k + 1] - c_e[k]) / dx; // flux toward +x
    out[static_cast<std::size_t>(k)] -= q;
    out[static_cast<std::size_t>(k) + 1] += q;
    const double src_half = source_density(reg) * dx * 0.5;
    out[static_cast<std::size_t>(k)] += src_half;
    out[static_cast<std::size_t>(k) + 1] += src_half;
    const double vol_half = eps_e_of(p, reg) * dx * 0.5;
    epsvol[static_cast<std::size_t>(k)] += vol_half;
    epsvol[static_cast<std::size_t>(k) + 1] += vol_half;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= epsvol[i];
  return out;
}

/// sum_i epsvol_i * c_i, the discrete salt total per unit plate area [mol/m2].
inline double electrolyte_salt_total(const PlanarGrid& g, const std::vector<double>& c_e,
                                     const ParamSet& p) {
  double total = 0;
  for (int k = 0; k < g.n_intervals(); ++k) {
    const double vol_half = eps_e_of(p, g.region_of_interval(k)) * g.dx(k) * 0.5;
    total += vol_half * (c_e[static_cast<std::size_t>(k)] + c_e[static_cast<std::size_t>(k) + 1]);
  }
  return total;
}

/// Trapezoid spatial mean of c_e over one region (interface nodes half-weighted).
inline double region_mean_ce(const PlanarGrid& g, const std::vector<double>& c_e, Region r) {
  const int a = g.first_node(r), b = g.last_node(r);
  double s = 0.5 * (c_e[static_cast<std::size_t>(a)] + c_e[static_cast<std::size_t>(b)]);
  for (int i = a + 1; i < b; ++i) s += c_e[static_cast<std::size_t>(i)];
  return s / (b - a);
}

} // namespace spmex
