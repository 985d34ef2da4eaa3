#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bessel.hpp"
#include "plant.hpp"

namespace spmex {

enum class ObserverMode { VOnly, VPlusExp };

struct BacksteppingGains {
  std::vector<double> p_bar; //!< distributed injection gain on the radial nodes [1/s per mol/m3... scaled internally]
  double p0 = 0;             //!< boundary injection gain [1/m]
};

/** Distributed and boundary injection gains for the positive-particle
 *  observer.  lambda <= 0 places the error eigenvalues; the kernel argument
 *  lambda (r^2/R^2 - 1) is then nonnegative everywhere so the Bessel series
 *  stays real.  Near r = R_p the z -> 0 limit is taken by series expansion.
 */
inline BacksteppingGains compute_backstepping_gains(double lambda, const RadialGrid& g,
                                                    double D_s_pos) {
  if (!(lambda < 0.25))
    throw std::invalid_argument("lambda = " + std::to_string(lambda) + " must be < 1/4");
  if (lambda > 0)
    throw std::invalid_argument("lambda = " + std::to_string(lambda) +
                                " must be <= 0 for a real-valued gain kernel");
  BacksteppingGains out;
  out.p0 = (3.0 - lambda) / (2.0 * g.R_p);
  out.p_bar.assign(static_cast<std::size_t>(g.n_nodes()), 0.0);
  if (lambda == 0) return out;

  const double scale = -lambda * D_s_pos / (2.0 * g.R_p);
  for (int i = 0; i < g.n_nodes(); ++i) {
    const double rr = g.r(i) / g.R_p;
    // nonnegative for lambda <= 0; the max guards surface-node roundoff
    const double z2 = std::max(0.0, lambda * (rr * rr - 1.0));
    const double z = std::sqrt(z2);
    double gz; // p_bar = scale * gz with gz = I1(z)/z - 2 lambda I2(z)/z^2
    if (z < 1e-4) {
      gz = 0.5 - lambda / 4.0 + z2 * (1.0 / 16.0 - lambda / 48.0);
    } else {
      gz = bessel_I(1, z) / z - 2.0 * lambda * bessel_I(2, z) / z2;
    }
    out.p_bar[static_cast<std::size_t>(i)] = scale * gz;
  }
  return out;
}

struct ObserverGains {
  double lambda = -20.0;  //!< backstepping eigenvalue parameter
  double gamma_v = 1e8;   //!< voltage-inversion gradient gain
  double gamma_e = 1e22;  //!< expansion-inversion gradient gain
  double k_neg = 0.01;    //!< negative-observer injection gain [1/s]
  int n_sub = 100;        //!< Euler sub-steps per plant step for the inversions
  ObserverMode mode = ObserverMode::VPlusExp;
  std::vector<double> p_bar;
  double p0 = 0;
  // bulk concentrations at observer initialization; the lithium-bookkeeping
  // reference for the voltage-only negative-electrode estimate
  double c_ref_neg = 0, c_ref_pos = 0;

  static ObserverGains make(const ParamSet& p, const CellGrids& g, ObserverMode mode,
                            double soc0_observer, double lambda = -20.0, double gamma_v = 1e8,
                            double gamma_e = 1e22, double k_neg = 0.01) {
    ObserverGains out;
    out.lambda = lambda;
    out.gamma_v = gamma_v;
    out.gamma_e = gamma_e;
    out.k_neg = k_neg;
    out.mode = mode;
    const auto bs = compute_backstepping_gains(lambda, g.pos, p.D_s_pos);
    out.p_bar = bs.p_bar;
    out.p0 = bs.p0;
    const auto c0 = initial_concentrations(p, soc0_observer);
    out.c_ref_neg = c0.c_s0_neg;
    out.c_ref_pos = c0.c_s0_pos;
    return out;
  }
};

struct ObserverState {
  std::vector<double> chat_s_neg; //!< negative particle estimate [mol/m3]
  std::vector<double> chat_s_pos; //!< positive particle estimate [mol/m3]
  std::vector<double> chat_e;     //!< electrolyte estimate [mol/m3]
  double check_css_pos = 0;       //!< voltage-inverted positive surface concentration
  double check_csavg_neg = 0;     //!< expansion-inverted negative average concentration

  static ObserverState init(const ParamSet& p, const CellGrids& g, double soc0) {
    const auto c0 = initial_concentrations(p, soc0);
    ObserverState s;
    s.chat_s_neg.assign(static_cast<std::size_t>(g.neg.n_nodes()), c0.c_s0_neg);
    s.chat_s_pos.assign(static_cast<std::size_t>(g.pos.n_nodes()), c0.c_s0_pos);
    s.chat_e.assign(static_cast<std::size_t>(g.elyte.n_nodes()), p.c_e0);
    s.check_css_pos = c0.c_s0_pos;
    s.check_csavg_neg = c0.c_s0_neg;
    return s;
  }
};

struct Measurement {
  double V_t = 0;  //!< measured terminal voltage [V]
  double T_b = 0;  //!< measured temperature [K]
  double dt_b = 0; //!< measured thickness change [m]
  double I = 0;    //!< applied current [A]
  double t = 0;    //!< timestamp [s]
};

struct StepDiagnostics {
  bool clamp_v = false; //!< voltage-inversion clamp fired this step
  bool clamp_e = false; //!< expansion-inversion clamp fired this step
};

struct GradientResult {
  double value = 0;
  bool clamped = false;
};

namespace detail {

/** Sub-stepped forward-Euler gradient flow x' = gamma * h'(x) * (target - h(x)),
 *  with x clamped to [eps, c_max - eps] after every sub-step and h' by central
 *  finite difference (one-sided near the bounds).
 */
template <class H>
GradientResult gradient_inversion(double x0, double target, H&& h, double gamma, double c_max,
                                  double dt, int n_sub) {
  const double eps = 1e-6 * c_max;
  const double delta = 1e-4 * c_max;
  const double h_sub = dt / n_sub;
  double x = x0;
  bool clamped = false;
  for (int k = 0; k < n_sub; ++k) {
    const double err = target - h(x);
    const double xp = std::min(x + delta, c_max - eps);
    const double xm = std::max(x - delta, eps);
    const double phi = (h(xp) - h(xm)) / (xp - xm);
    x += h_sub * gamma * phi * err;
    if (x < eps) {
      x = eps;
      clamped = true;
    } else if (x > c_max - eps) {
      x = c_max - eps;
      clamped = true;
    }
  }
  return {x, clamped};
}

} // namespace detail

/// Terminal-voltage output map with the inverted positive surface
/// concentration substituted; everything else comes from the observer.
inline double h_v(double css_pos, const ObserverState& obs, const Measurement& meas,
                  const CellGrids& g, const ParamSet& p, const MaterialCurves& m) {
  return voltage_breakdown(obs.chat_s_neg.back(), css_pos, g.elyte, obs.chat_e, meas.I,
                           meas.T_b, p, m)
      .V_t;
}

inline GradientResult voltage_inversion_step(double check_css_pos, const Measurement& meas,
                                             const ObserverState& obs, const CellGrids& g,
                                             const ParamSet& p, const MaterialCurves& m,
                                             const ObserverGains& gains, double dt) {
  auto h = [&](double x) { return h_v(x, obs, meas, g, p, m); };
  return detail::gradient_inversion(check_css_pos, meas.V_t, h, gains.gamma_v, p.c_s_max_pos,
                                    dt, gains.n_sub);
}

/** Positive-particle observer: open-loop diffusion plus distributed injection
 *  p_bar(r) * innovation and a boundary-flux correction D p0 * innovation,
 *  where innovation = check_css_pos - chat_ss_pos. */
inline std::vector<double> positive_observer_rhs(const RadialGrid& g,
                                                 const std::vector<double>& chat_s_pos,
                                                 double I, double check_css_pos,
                                                 const ObserverGains& gains, const ParamSet& p) {
  const double innov = check_css_pos - chat_s_pos.back();
  const double flux_eff =
      intercalation_flux(I, Electrode::Pos, p) - p.D_s_pos * gains.p0 * innov;
  auto out = spherical_diffusion_rhs(g, chat_s_pos, p.D_s_pos, flux_eff);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gains.p_bar[i] * innov;
  return out;
}

/// Same dynamics as the plant electrolyte; no feedback.
inline std::vector<double> electrolyte_observer_rhs(const PlanarGrid& g,
                                                    const std::vector<double>& chat_e, double I,
                                                    const ParamSet& p) {
  return electrolyte_rhs(g, chat_e, I, p);
}

/** Expansion output map for the negative electrode: the radial strain moment
 *  of the zero-mean profile shifted to average x.  The profile shape is
 *  frozen while the gradient flow moves the average. */
inline GradientResult expansion_inversion_step(const ObserverState& obs, const Measurement& meas,
                                               const CellGrids& g, const ParamSet& p,
                                               const MaterialCurves& m,
                                               const ObserverGains& gains, double dt) {
  if (p.kappa_b == 0)
    throw std::runtime_error("expansion inversion undefined: kappa_b = 0");
  const double dt_th = p.alpha_th * (meas.T_b - p.T0);
  const double dt_pos = electrode_swell(g.pos, obs.chat_s_pos, m.dV_pos, Electrode::Pos, p);
  const double dt_neg = (meas.dt_b - dt_th) / p.kappa_b - dt_pos;
  const double u_R_target = dt_neg / (p.a_s(Electrode::Neg) * p.l_neg);

  const double avg = volume_average(obs.chat_s_neg, g.neg);
  std::vector<double> ctilde(obs.chat_s_neg.size());
  for (std::size_t i = 0; i < ctilde.size(); ++i) ctilde[i] = obs.chat_s_neg[i] - avg;
  std::vector<double> strain(ctilde.size());
  auto h_e = [&](double x) {
    for (std::size_t i = 0; i < ctilde.size(); ++i) strain[i] = m.dV_neg(ctilde[i] + x);
    return radial_moment_integral(strain, g.neg);
  };
  return detail::gradient_inversion(obs.check_csavg_neg, u_R_target, h_e, gains.gamma_e,
                                    p.c_s_max_neg, dt, gains.n_sub);
}

/** Negative-particle observer: open-loop boundary flux, spatially uniform
 *  injection k_neg * (check_csavg_neg - volume average), so the injection
 *  shifts the mean without touching the gradient profile. */
inline std::vector<double> negative_observer_rhs(const RadialGrid& g,
                                                 const std::vector<double>& chat_s_neg,
                                                 double I, double check_csavg_neg, double k_neg,
                                                 const ParamSet& p) {
  auto out =
      spherical_diffusion_rhs(g, chat_s_neg, p.D_s_neg, intercalation_flux(I, Electrode::Neg, p));
  const double innov = check_csavg_neg - volume_average(chat_s_neg, g);
  for (auto& v : out) v += k_neg * innov;
  return out;
}

namespace detail {
inline bool clamp_solid(std::vector<double>& c, double c_max) {
  const double eps = 1e-6 * c_max;
  bool hit = false;
  for (auto& v : c) {
    if (v < eps) {
      v = eps;
      hit = true;
    } else if (v > c_max - eps) {
      v = c_max - eps;
      hit = true;
    }
  }
  return hit;
}
} // namespace detail

/** One observer step.  Blocks run in dependency order so each uses the
 *  freshest upstream estimate: voltage inversion, positive particle,
 *  electrolyte, negative-average target (expansion inversion or lithium
 *  bookkeeping), negative particle.
 */
inline std::pair<ObserverState, StepDiagnostics> step_observer(const ObserverState& obs,
                                                               const Measurement& meas,
                                                               const ObserverGains& gains,
                                                               const CellGrids& g,
                                                               const ParamSet& p,
                                                               const MaterialCurves& m,
                                                               double dt) {
  ObserverState s = obs;
  StepDiagnostics diag;

  const auto vres = voltage_inversion_step(s.check_css_pos, meas, s, g, p, m, gains, dt);
  s.check_css_pos = vres.value;
  diag.clamp_v = vres.clamped;

  s.chat_s_pos = rk4_step(
      s.chat_s_pos,
      [&](const std::vector<double>& v) {
        return positive_observer_rhs(g.pos, v, meas.I, s.check_css_pos, gains, p);
      },
      dt);

  s.chat_e = rk4_step(
      s.chat_e,
      [&](const std::vector<double>& v) { return electrolyte_observer_rhs(g.elyte, v, meas.I, p); },
      dt);

  if (gains.mode == ObserverMode::VPlusExp) {
    const auto eres = expansion_inversion_step(s, meas, g, p, m, gains, dt);
    s.check_csavg_neg = eres.value;
    diag.clamp_e = eres.clamped;
  } else {
    // Total solid lithium is invariant, so the positive-electrode estimate
    // maps onto the negative average relative to the initialization point.
    const double ratio = (p.eps_s_pos * p.l_pos) / (p.eps_s_neg * p.l_neg);
    s.check_csavg_neg =
        gains.c_ref_neg + ratio * (gains.c_ref_pos - volume_average(s.chat_s_pos, g.pos));
  }

  s.chat_s_neg = rk4_step(
      s.chat_s_neg,
      [&](const std::vector<double>& v) {
        return negative_observer_rhs(g.neg, v, meas.I, s.check_csavg_neg, gains.k_neg, p);
      },
      dt);

  detail::clamp_solid(s.chat_s_neg, p.c_s_max_neg);
  detail::clamp_solid(s.chat_s_pos, p.c_s_max_pos);
  return {s, diag};
}

struct ObserverOutputs {
  double V_hat = 0;          //!< voltage reconstructed from the grid estimates [V]
  double dt_hat = 0;         //!< expansion reconstructed from the grid estimates [m]
  double c_ss_neg_hat = 0, c_ss_pos_hat = 0;
  double c_avg_neg_hat = 0, c_avg_pos_hat = 0;
  double soc_hat = 0;
};

inline ObserverOutputs observer_outputs(const ObserverState& obs, const Measurement& meas,
                                        const CellGrids& g, const ParamSet& p,
                                        const MaterialCurves& m) {
  ObserverOutputs o;
  o.c_ss_neg_hat = obs.chat_s_neg.back();
  o.c_ss_pos_hat = obs.chat_s_pos.back();
  o.c_avg_neg_hat = volume_average(obs.chat_s_neg, g.neg);
  o.c_avg_pos_hat = volume_average(obs.chat_s_pos, g.pos);
  o.V_hat = voltage_breakdown(o.c_ss_neg_hat, o.c_ss_pos_hat, g.elyte, obs.chat_e, meas.I,
                              meas.T_b, p, m)
                .V_t;
  const double swell = p.kappa_b * (electrode_swell(g.neg, obs.chat_s_neg, m.dV_neg,
                                                    Electrode::Neg, p) +
                                    electrode_swell(g.pos, obs.chat_s_pos, m.dV_pos,
                                                    Electrode::Pos, p));
  o.dt_hat = swell + p.alpha_th * (meas.T_b - p.T0);
  o.soc_hat = soc_from_avg_concentration(p, o.c_avg_neg_hat);
  return o;
}

} // namespace spmex
