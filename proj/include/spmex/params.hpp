#pragma once

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "curve.hpp"

namespace spmex {

enum class Electrode { Neg, Pos };

/** Multiplicative perturbations applied to a nominal parameter set to mimic
 *  cell aging.  A scale of 1 leaves the parameter untouched. */
struct DriftSpec {
  double scale_x100 = 1.0;      //!< scales the 100% SOC negative stoichiometry
  double scale_y0 = 1.0;        //!< scales the 0% SOC positive stoichiometry
  double scale_eps_s_neg = 1.0; //!< scales the negative active-material fraction
};

struct ParamSet {
  double A = 0;          //!< electrode plate area [m2]
  double l_neg = 0;      //!< negative electrode thickness [m]
  double l_sep = 0;      //!< separator thickness [m]
  double l_pos = 0;      //!< positive electrode thickness [m]
  double R_p_neg = 0;    //!< negative particle radius [m]
  double R_p_pos = 0;    //!< positive particle radius [m]
  double eps_s_neg = 0;  //!< negative active-material volume fraction [-]
  double eps_s_pos = 0;  //!< positive active-material volume fraction [-]
  double eps_e_neg = 0;  //!< negative electrolyte volume fraction [-]
  double eps_e_sep = 0;  //!< separator electrolyte volume fraction [-]
  double eps_e_pos = 0;  //!< positive electrolyte volume fraction [-]
  double brugg_neg = 0;  //!< negative Bruggeman exponent [-]
  double brugg_sep = 0;  //!< separator Bruggeman exponent [-]
  double brugg_pos = 0;  //!< positive Bruggeman exponent [-]
  double D_s_neg = 0;    //!< negative solid diffusivity [m2/s]
  double D_s_pos = 0;    //!< positive solid diffusivity [m2/s]
  double D_e = 0;        //!< electrolyte diffusivity [m2/s]
  double t_plus0 = 0;    //!< cation transference number [-]
  double t_f = 1.0;      //!< electrolyte thermodynamic factor [-]
  double kappa = 0;      //!< electrolyte conductivity [S/m]
  double k0_neg = 0;     //!< negative reaction rate constant [m^2.5/(mol^0.5 s)]
  double k0_pos = 0;     //!< positive reaction rate constant [m^2.5/(mol^0.5 s)]
  double alpha = 0.5;    //!< charge-transfer symmetry factor [-]
  double R_f_neg = 0;    //!< negative film resistance [ohm m2]
  double R_f_pos = 0;    //!< positive film resistance [ohm m2]
  double c_s_max_neg = 0; //!< negative maximum solid concentration [mol/m3]
  double c_s_max_pos = 0; //!< positive maximum solid concentration [mol/m3]
  double c_e0 = 0;       //!< initial electrolyte concentration [mol/m3]
  double x0 = 0;         //!< negative stoichiometry at 0% SOC [-]
  double x100 = 0;       //!< negative stoichiometry at 100% SOC [-]
  double y0 = 0;         //!< positive stoichiometry at 0% SOC [-]
  double y100 = 0;       //!< positive stoichiometry at 100% SOC [-]
  double C_th = 0;       //!< lumped heat capacity [J/K]
  double h = 0;          //!< heat transfer coefficient times surface area [W/K]
  double alpha_th = 0;   //!< thermal expansion coefficient of the stack [m/K]
  double T0 = 0;         //!< reference temperature [K]
  double T_a = 0;        //!< ambient temperature [K]
  double kappa_b = 0;    //!< layer multiplier, electrode swell to cell thickness [-]
  int n_layers = 0;      //!< number of stacked layer pairs [-]
  double F = 96485.33212;    //!< Faraday constant [C/mol]
  double R_gas = 8.314462618; //!< gas constant [J/(mol K)]

  double l(Electrode e) const { return e == Electrode::Neg ? l_neg : l_pos; }
  double R_p(Electrode e) const { return e == Electrode::Neg ? R_p_neg : R_p_pos; }
  double eps_s(Electrode e) const { return e == Electrode::Neg ? eps_s_neg : eps_s_pos; }
  double D_s(Electrode e) const { return e == Electrode::Neg ? D_s_neg : D_s_pos; }
  double k0(Electrode e) const { return e == Electrode::Neg ? k0_neg : k0_pos; }
  double R_f(Electrode e) const { return e == Electrode::Neg ? R_f_neg : R_f_pos; }
  double c_s_max(Electrode e) const { return e == Electrode::Neg ? c_s_max_neg : c_s_max_pos; }

  /// Interfacial area per electrode volume [1/m]; never stored, always derived.
  double a_s(Electrode e) const { return 3.0 * eps_s(e) / R_p(e); }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " = " + std::to_string(v) +
                                    " must be positive");
    };
    auto fraction = [](double v, const char* name) {
      if (!(v > 0) || !(v < 1))
        throw std::invalid_argument(std::string(name) + " = " + std::to_string(v) +
                                    " out of (0,1)");
    };
    auto nonneg = [](double v, const char* name) {
      if (!(v >= 0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " = " + std::to_string(v) +
                                    " must be nonnegative");
    };
    positive(A, "A");
    positive(l_neg, "l_neg");
    positive(l_sep, "l_sep");
    positive(l_pos, "l_pos");
    positive(R_p_neg, "R_p_neg");
    positive(R_p_pos, "R_p_pos");
    fraction(eps_s_neg, "eps_s_neg");
    fraction(eps_s_pos, "eps_s_pos");
    fraction(eps_e_neg, "eps_e_neg");
    fraction(eps_e_sep, "eps_e_sep");
    fraction(eps_e_pos, "eps_e_pos");
    positive(brugg_neg, "brugg_neg");
    positive(brugg_sep, "brugg_sep");
    positive(brugg_pos, "brugg_pos");
    positive(D_s_neg, "D_s_neg");
    positive(D_s_pos, "D_s_pos");
    positive(D_e, "D_e");
    fraction(t_plus0, "t_plus0");
    positive(t_f, "t_f");
    positive(kappa, "kappa");
    positive(k0_neg, "k0_neg");
    positive(k0_pos, "k0_pos");
    fraction(alpha, "alpha");
    nonneg(R_f_neg, "R_f_neg");
    nonneg(R_f_pos, "R_f_pos");
    positive(c_s_max_neg, "c_s_max_neg");
    positive(c_s_max_pos, "c_s_max_pos");
    positive(c_e0, "c_e0");
    positive(C_th, "C_th");
    positive(h, "h");
    nonneg(alpha_th, "alpha_th");
    positive(T0, "T0");
    positive(T_a, "T_a");
    nonneg(kappa_b, "kappa_b");
    if (n_layers < 1)
      throw std::invalid_argument("n_layers = " + std::to_string(n_layers) +
                                  " must be at least 1");
    positive(F, "F");
    positive(R_gas, "R_gas");
    auto window = [](double lo, double hi, const char* lo_name, const char* hi_name) {
      if (!(lo >= 0) || !(hi <= 1) || !(lo < hi))
        throw std::invalid_argument(std::string(lo_name) + "/" + hi_name +
                                    " must satisfy 0 <= " + lo_name + " < " + hi_name + " <= 1");
    };
    window(x0, x100, "x0", "x100");
    window(y100, y0, "y100", "y0"); // positive stoichiometry falls as SOC rises
  }
};

/** Sampled open-circuit potentials (vs stoichiometry) and volumetric swell
 *  strain (vs solid concentration) for both electrodes. */
struct MaterialCurves {
  Curve U_pos; //!< positive OCP [V] over stoichiometry [0,1]
  Curve U_neg; //!< negative OCP [V] over stoichiometry [0,1]
  Curve dV_pos; //!< positive swell strain [-] over concentration [mol/m3]
  Curve dV_neg; //!< negative swell strain [-] over concentration [mol/m3]

  void validate() const {
    auto min_points = [](const Curve& c) {
      if (c.size() < 8)
        throw std::invalid_argument(c.name() + ": needs at least 8 sample points");
    };
    auto check_ocp = [&](const Curve& c) {
      min_points(c);
      if (!c.strictly_decreasing())
        throw std::invalid_argument(c.name() + ": open-circuit potential must fall "
                                               "with stoichiometry");
    };
    check_ocp(U_pos);
    check_ocp(U_neg);
    min_points(dV_pos);
    min_points(dV_neg);
  }
};

struct Cell {
  ParamSet params;
  MaterialCurves curves;

  void validate() const {
    params.validate();
    curves.validate();
  }
};

inline ParamSet apply_drift(ParamSet p, const DriftSpec& d) {
  auto check_scale = [](double s, const char* name) {
    if (!(s > 0) || !(s <= 1.5))
      throw std::invalid_argument(std::string(name) + " = " + std::to_string(s) +
                                  " out of (0, 1.5]");
  };
  check_scale(d.scale_x100, "scale_x100");
  check_scale(d.scale_y0, "scale_y0");
  check_scale(d.scale_eps_s_neg, "scale_eps_s_neg");
  p.x100 *= d.scale_x100;
  p.y0 *= d.scale_y0;
  p.eps_s_neg *= d.scale_eps_s_neg;
  p.validate();
  return p;
}

struct InitialConcentrations {
  double c_s0_neg = 0; //!< bulk negative solid concentration [mol/m3]
  double c_s0_pos = 0; //!< bulk positive solid concentration [mol/m3]
};

inline InitialConcentrations initial_concentrations(const ParamSet& p, double soc0) {
  if (!(soc0 >= 0) || !(soc0 <= 1))
    throw std::invalid_argument("soc0 = " + std::to_string(soc0) + " out of [0,1]");
  return {p.c_s_max_neg * (p.x0 + soc0 * (p.x100 - p.x0)),
          p.c_s_max_pos * (p.y0 + soc0 * (p.y100 - p.y0))};
}

/// Inverse of the negative-electrode window map; deliberately unclamped so
/// out-of-window states report SOC outside [0,1].
inline double soc_from_avg_concentration(const ParamSet& p, double c_avg_neg) {
  return (c_avg_neg / p.c_s_max_neg - p.x0) / (p.x100 - p.x0);
}

/// Charge moved across the negative stoichiometry window [C].
inline double capacity_coulombs(const ParamSet& p) {
  return p.F * p.eps_s_neg * p.l_neg * p.A * p.c_s_max_neg * (p.x100 - p.x0);
}

namespace detail {

inline double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key))
    throw std::invalid_argument("missing parameter: " + key);
  if (!j.at(key).is_number())
    throw std::invalid_argument("parameter " + key + " must be a number");
  return j.at(key).get<double>();
}

/// Curves are stored as arrays of [abscissa, ordinate] pairs.
inline Curve read_curve(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw std::invalid_argument("missing curve: " + key);
  std::vector<double> x, y;
  for (const auto& pt : j.at(key)) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      throw std::invalid_argument("curve " + key + ": entries must be [abscissa, ordinate] pairs");
    x.push_back(pt[0].get<double>());
    y.push_back(pt[1].get<double>());
  }
  return Curve(std::move(x), std::move(y), key);
}

} // namespace detail

inline Cell load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open parameter file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("parameter file " + path + " is not valid JSON: " + e.what());
  }

  using detail::require_number;
  Cell cell;
  ParamSet& p = cell.params;
  p.A = require_number(j, "A_m2");
  p.l_neg = require_number(j, "l_neg_m");
  p.l_sep = require_number(j, "l_sep_m");
  p.l_pos = require_number(j, "l_pos_m");
  p.R_p_neg = require_number(j, "R_p_neg_m");
  p.R_p_pos = require_number(j, "R_p_pos_m");
  p.eps_s_neg = require_number(j, "eps_s_neg");
  p.eps_s_pos = require_number(j, "eps_s_pos");
  p.eps_e_neg = require_number(j, "eps_e_neg");
  p.eps_e_sep = require_number(j, "eps_e_sep");
  p.eps_e_pos = require_number(j, "eps_e_pos");
  p.brugg_neg = require_number(j, "brugg_neg");
  p.brugg_sep = require_number(j, "brugg_sep");
  p.brugg_pos = require_number(j, "brugg_pos");
  p.D_s_neg = require_number(j, "D_s_neg_m2_s");
  p.D_s_pos = require_number(j, "D_s_pos_m2_s");
  p.D_e = require_number(j, "D_e_m2_s");
  p.t_plus0 = require_number(j, "t_plus0");
  if (j.contains("t_f")) p.t_f = require_number(j, "t_f");
  p.kappa = require_number(j, "kappa_S_m");
  p.k0_neg = require_number(j, "k0_neg");
  p.k0_pos = require_number(j, "k0_pos");
  if (j.contains("alpha")) p.alpha = require_number(j, "alpha");
  p.R_f_neg = require_number(j, "R_f_neg_ohm_m2");
  p.R_f_pos = require_number(j, "R_f_pos_ohm_m2");
  p.c_s_max_neg = require_number(j, "c_s_max_neg_mol_m3");
  p.c_s_max_pos = require_number(j, "c_s_max_pos_mol_m3");
  p.c_e0 = require_number(j, "c_e0_mol_m3");
  p.x0 = require_number(j, "x0");
  p.x100 = require_number(j, "x100");
  p.y0 = require_number(j, "y0");
  p.y100 = require_number(j, "y100");
  p.C_th = require_number(j, "C_th_J_K");
  p.h = require_number(j, "h_W_K");
  p.alpha_th = require_number(j, "alpha_th_m_K");
  p.T0 = require_number(j, "T0_K");
  p.T_a = require_number(j, "T_a_K");
  p.kappa_b = require_number(j, "kappa_b");
  p.n_layers = static_cast<int>(require_number(j, "n_layers"));
  if (j.contains("F_C_mol")) p.F = require_number(j, "F_C_mol");
  if (j.contains("R_gas_J_molK")) p.R_gas = require_number(j, "R_gas_J_molK");

  cell.curves.U_pos = detail::read_curve(j, "U_pos");
  cell.curves.U_neg = detail::read_curve(j, "U_neg");
  cell.curves.dV_pos = detail::read_curve(j, "dV_pos");
  cell.curves.dV_neg = detail::read_curve(j, "dV_neg");

  cell.validate();
  return cell;
}

} // namespace spmex
