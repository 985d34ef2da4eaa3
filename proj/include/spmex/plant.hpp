#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "diffusion.hpp"
#include "grids.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "stepper.hpp"

namespace spmex {

struct CellGrids {
  RadialGrid neg, pos;
  PlanarGrid elyte;

  static CellGrids make(const ParamSet& p, int n_shells = 16, int n_neg = 8, int n_sep = 4,
                        int n_pos = 8) {
    return {RadialGrid(n_shells, p.R_p_neg), RadialGrid(n_shells, p.R_p_pos),
            PlanarGrid(n_neg, n_sep, n_pos, p.l_neg, p.l_sep, p.l_pos)};
  }
};

struct PlantState {
  std::vector<double> c_s_neg; //!< negative particle concentration [mol/m3]
  std::vector<double> c_s_pos; //!< positive particle concentration [mol/m3]
  std::vector<double> c_e;     //!< electrolyte concentration [mol/m3]
  double T_b = 0;              //!< lumped battery temperature [K]

  static PlantState init(const ParamSet& p, const CellGrids& g, double soc0) {
    const auto c0 = initial_concentrations(p, soc0);
    PlantState s;
    s.c_s_neg.assign(static_cast<std::size_t>(g.neg.n_nodes()), c0.c_s0_neg);
    s.c_s_pos.assign(static_cast<std::size_t>(g.pos.n_nodes()), c0.c_s0_pos);
    s.c_e.assign(static_cast<std::size_t>(g.elyte.n_nodes()), p.c_e0);
    s.T_b = p.T_a;
    return s;
  }
};

struct PlantOutputs {
  double V_t = 0;        //!< terminal voltage [V]
  double T_b = 0;        //!< battery temperature [K]
  double dt_b = 0;       //!< total thickness change [m]
  double c_ss_neg = 0, c_ss_pos = 0;       //!< surface concentrations [mol/m3]
  double c_s_avg_neg = 0, c_s_avg_pos = 0; //!< volume averages [mol/m3]
  double eta_neg = 0, eta_pos = 0;         //!< overpotentials [V]
  double phi_e = 0;                        //!< electrolyte potential drop [V]
  double dt_neg = 0, dt_pos = 0, dt_th = 0; //!< expansion parts [m]
  double soc = 0;                          //!< from the negative window [-]
};

/** Molar flux out of the particle surface [mol/(m2 s)].  Charging (I > 0)
 *  fills the negative particle (flux < 0) and drains the positive one. */
inline double intercalation_flux(double I, Electrode e, const ParamSet& p) {
  const double mag = I / (p.F * p.a_s(e) * p.l(e) * p.A);
  return e == Electrode::Neg ? -mag : mag;
}

inline double exchange_current(double c_e_bar, double c_ss, Electrode e, const ParamSet& p) {
  const double c_max = p.c_s_max(e);
  if (!(c_ss > 0) || !(c_ss < c_max))
    throw std::runtime_error("kinetics singular: c_ss = " + std::to_string(c_ss) +
                             " outside (0, " + std::to_string(c_max) + ")");
  if (!(c_e_bar > 0))
    throw std::runtime_error("exchange_current: c_e_bar = " + std::to_string(c_e_bar) +
                             " must be positive");
  return p.k0(e) * std::pow(c_e_bar, p.alpha) *
         std::pow((c_max - c_ss) * c_ss, p.alpha);
}

/// Closed-form Butler-Volmer inverse under symmetric transfer coefficients.
inline double overpotential(double j, double i0, double T, const ParamSet& p) {
  if (!(i0 > 0))
    throw std::runtime_error("overpotential: i0 = " + std::to_string(i0) +
                             " must be positive");
  return p.R_gas * T / (p.alpha * p.F) * std::asinh(p.F * j / (2.0 * i0));
}

/** Electrolyte potential drop across the cell: ohmic part (odd in I, raises
 *  the charging voltage) plus the concentration part from the log ratio of
 *  the boundary concentrations. */
inline double electrolyte_potential(const PlanarGrid& g, const std::vector<double>& c_e,
                                    double I, double T, const ParamSet& p) {
  if (!(c_e.front() > 0) || !(c_e.back() > 0))
    throw std::runtime_error("electrolyte_potential: boundary c_e must be positive");
  const double ohmic_len = g.l_neg / (2.0 * std::pow(p.eps_e_neg, p.brugg_neg)) +
                           g.l_sep / std::pow(p.eps_e_sep, p.brugg_sep) +
                           g.l_pos / (2.0 * std::pow(p.eps_e_pos, p.brugg_pos));
  const double ohmic = ohmic_len * (I / p.A) / p.kappa;
  const double conc = 2.0 * p.R_gas * T / p.F * (1.0 - p.t_plus0) * p.t_f *
                      (std::log(c_e.back()) - std::log(c_e.front()));
  return ohmic + conc;
}

struct VoltageBreakdown {
  double V_t = 0, eta_neg = 0, eta_pos = 0, phi_e = 0;
};

/** Full output map from surface/electrolyte states to terminal voltage.  The
 *  observer reuses it with estimated states substituted. */
inline VoltageBreakdown voltage_breakdown(double c_ss_neg, double c_ss_pos,
                                          const PlanarGrid& g, const std::vector<double>& c_e,
                                          double I, double T, const ParamSet& p,
                                          const MaterialCurves& m) {
  const double j_neg = intercalation_flux(I, Electrode::Neg, p);
  const double j_pos = intercalation_flux(I, Electrode::Pos, p);
  const double ce_bar_neg = region_mean_ce(g, c_e, Region::Neg);
  const double ce_bar_pos = region_mean_ce(g, c_e, Region::Pos);
  VoltageBreakdown out;
  out.eta_neg = overpotential(j_neg, exchange_current(ce_bar_neg, c_ss_neg, Electrode::Neg, p),
                              T, p);
  out.eta_pos = overpotential(j_pos, exchange_current(ce_bar_pos, c_ss_pos, Electrode::Pos, p),
                              T, p);
  out.phi_e = electrolyte_potential(g, c_e, I, T, p);
  const double film_pos = p.R_f_pos * p.F * j_pos;
  const double film_neg = p.R_f_neg * p.F * j_neg;
  out.V_t = m.U_pos(c_ss_pos / p.c_s_max_pos) + out.eta_pos + film_pos -
            m.U_neg(c_ss_neg / p.c_s_max_neg) - out.eta_neg - film_neg + out.phi_e;
  return out;
}

inline double terminal_voltage(const PlantState& s, double I, const CellGrids& g,
                               const ParamSet& p, const MaterialCurves& m) {
  return voltage_breakdown(s.c_s_neg.back(), s.c_s_pos.back(), g.elyte, s.c_e, I, s.T_b, p, m)
      .V_t;
}

/** Lumped thermal balance: Newton cooling plus joule heating
 *  I*(V_t - U+(surface) + U-(surface)), which is nonnegative for charge and
 *  discharge alike. */
inline double thermal_rhs(double T_b, double I, double V_t, double c_ss_neg, double c_ss_pos,
                          const ParamSet& p, const MaterialCurves& m) {
  const double u_gap = m.U_pos(c_ss_pos / p.c_s_max_pos) - m.U_neg(c_ss_neg / p.c_s_max_neg);
  return (-p.h * (T_b - p.T_a) + I * (V_t - u_gap)) / p.C_th;
}

/// a_s * l * u_R for one electrode, u_R the radial moment of the swell strain.
inline double electrode_swell(const RadialGrid& g, const std::vector<double>& c_s,
                              const Curve& dV, Electrode e, const ParamSet& p) {
  std::vector<double> strain(c_s.size());
  for (std::size_t i = 0; i < c_s.size(); ++i) strain[i] = dV(c_s[i]);
  return p.a_s(e) * p.l(e) * radial_moment_integral(strain, g);
}

struct ExpansionBreakdown {
  double dt_neg = 0, dt_pos = 0, dt_th = 0, dt_b = 0;
};

inline ExpansionBreakdown expansion_outputs(const PlantState& s, const CellGrids& g,
                                            const ParamSet& p, const MaterialCurves& m) {
  ExpansionBreakdown out;
  out.dt_neg = electrode_swell(g.neg, s.c_s_neg, m.dV_neg, Electrode::Neg, p);
  out.dt_pos = electrode_swell(g.pos, s.c_s_pos, m.dV_pos, Electrode::Pos, p);
  out.dt_th = p.alpha_th * (s.T_b - p.T0);
  out.dt_b = p.kappa_b * (out.dt_neg + out.dt_pos) + out.dt_th;
  return out;
}

inline PlantOutputs plant_outputs(const PlantState& s, double I, const CellGrids& g,
                                  const ParamSet& p, const MaterialCurves& m) {
  PlantOutputs o;
  o.c_ss_neg = s.c_s_neg.back();
  o.c_ss_pos = s.c_s_pos.back();
  o.c_s_avg_neg = volume_average(s.c_s_neg, g.neg);
  o.c_s_avg_pos = volume_average(s.c_s_pos, g.pos);
  const auto v = voltage_breakdown(o.c_ss_neg, o.c_ss_pos, g.elyte, s.c_e, I, s.T_b, p, m);
  o.V_t = v.V_t;
  o.eta_neg = v.eta_neg;
  o.eta_pos = v.eta_pos;
  o.phi_e = v.phi_e;
  o.T_b = s.T_b;
  const auto e = expansion_outputs(s, g, p, m);
  o.dt_neg = e.dt_neg;
  o.dt_pos = e.dt_pos;
  o.dt_th = e.dt_th;
  o.dt_b = e.dt_b;
  o.soc = soc_from_avg_concentration(p, o.c_s_avg_neg);
  return o;
}

namespace detail {

inline void check_plant_range(const PlantState& s, const ParamSet& p, double t) {
  auto fail = [t](const std::string& what) {
    throw std::runtime_error("plant state out of physical range at t = " + std::to_string(t) +
                             " s: " + what);
  };
  for (std::size_t i = 0; i < s.c_s_neg.size(); ++i)
    if (!(s.c_s_neg[i] > 0) || !(s.c_s_neg[i] < p.c_s_max_neg))
      fail("c_s_neg[" + std::to_string(i) + "] = " + std::to_string(s.c_s_neg[i]));
  for (std::size_t i = 0; i < s.c_s_pos.size(); ++i)
    if (!(s.c_s_pos[i] > 0) || !(s.c_s_pos[i] < p.c_s_max_pos))
      fail("c_s_pos[" + std::to_string(i) + "] = " + std::to_string(s.c_s_pos[i]));
  for (std::size_t i = 0; i < s.c_e.size(); ++i)
    if (!(s.c_e[i] > 0)) fail("c_e[" + std::to_string(i) + "] = " + std::to_string(s.c_e[i]));
  if (!std::isfinite(s.T_b)) fail("T_b non-finite");
}

} // namespace detail

/** One RK4 step of the coupled solid/electrolyte/thermal dynamics under
 *  constant current I over [t, t+dt]; all states advance simultaneously from
 *  the same stage values.  Outputs are evaluated at the new state. */
inline std::pair<PlantState, PlantOutputs> step_plant(const PlantState& s, double I, double dt,
                                                      double t, const CellGrids& g,
                                                      const ParamSet& p,
                                                      const MaterialCurves& m) {
  const std::size_t n_neg = s.c_s_neg.size();
  const std::size_t n_pos = s.c_s_pos.size();
  const std::size_t n_e = s.c_e.size();
  const double j_neg = intercalation_flux(I, Electrode::Neg, p);
  const double j_pos = intercalation_flux(I, Electrode::Pos, p);

  std::vector<double> y(n_neg + n_pos + n_e + 1);
  std::copy(s.c_s_neg.begin(), s.c_s_neg.end(), y.begin());
  std::copy(s.c_s_pos.begin(), s.c_s_pos.end(), y.begin() + static_cast<long>(n_neg));
  std::copy(s.c_e.begin(), s.c_e.end(), y.begin() + static_cast<long>(n_neg + n_pos));
  y.back() = s.T_b;

  auto rhs = [&](const std::vector<double>& v) {
    std::vector<double> c_neg(v.begin(), v.begin() + static_cast<long>(n_neg));
    std::vector<double> c_pos(v.begin() + static_cast<long>(n_neg),
                              v.begin() + static_cast<long>(n_neg + n_pos));
    std::vector<double> c_e(v.begin() + static_cast<long>(n_neg + n_pos),
                            v.begin() + static_cast<long>(n_neg + n_pos + n_e));
    const double T = v.back();
    std::vector<double> d(v.size());
    const auto d_neg = spherical_diffusion_rhs(g.neg, c_neg, p.D_s_neg, j_neg);
    const auto d_pos = spherical_diffusion_rhs(g.pos, c_pos, p.D_s_pos, j_pos);
    const auto d_e = electrolyte_rhs(g.elyte, c_e, I, p);
    std::copy(d_neg.begin(), d_neg.end(), d.begin());
    std::copy(d_pos.begin(), d_pos.end(), d.begin() + static_cast<long>(n_neg));
    std::copy(d_e.begin(), d_e.end(), d.begin() + static_cast<long>(n_neg + n_pos));
    const double V_t =
        voltage_breakdown(c_neg.back(), c_pos.back(), g.elyte, c_e, I, T, p, m).V_t;
    d.back() = thermal_rhs(T, I, V_t, c_neg.back(), c_pos.back(), p, m);
    return d;
  };

  std::vector<double> yn;
  try {
    yn = rk4_step(y, rhs, dt);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(e.what()) + " (plant step at t = " +
                             std::to_string(t) + " s)");
  }

  PlantState out;
  out.c_s_neg.assign(yn.begin(), yn.begin() + static_cast<long>(n_neg));
  out.c_s_pos.assign(yn.begin() + static_cast<long>(n_neg),
                     yn.begin() + static_cast<long>(n_neg + n_pos));
  out.c_e.assign(yn.begin() + static_cast<long>(n_neg + n_pos),
                 yn.begin() + static_cast<long>(n_neg + n_pos + n_e));
  out.T_b = yn.back();
  detail::check_plant_range(out, p, t + dt);
  return {out, plant_outputs(out, I, g, p, m)};
}

} // namespace spmex
