#pragma once

#include <cstdint>

namespace icsim {

/// Physical parameters of the two-crystal induced-coherence interferometer.
/// Both crystals share one parametric gain G; t and gamma are stored as
/// magnitude + phase because every derived rate formula depends on the
/// magnitudes only.
struct ExperimentParams {
  double gain = 0.0;  ///< parametric gain G = sigma*L, dimensionless, >= 0
  double v2 = 0.0;    ///< mean photon number |V|^2 = sinh^2(G); recomputed by validate()
  double t_mag = 1.0;       ///< |t| of the idler loss element, in [0,1]
  double t_phase = 0.0;     ///< arg(t), rad
  double gamma_mag = 1.0;   ///< idler mode overlap |gamma|, in [0,1]
  double gamma_phase = 0.0; ///< arg(gamma), rad
  double phi_p1 = 0.0;      ///< pump phase at NLC1, rad
  double phi_p2 = 0.0;      ///< pump phase at NLC2, rad
  double phi_s1 = 0.0;      ///< propagation phase of s1, rad
  double phi_s2 = 0.0;
  double phi_i1 = 0.0;
  double phi_i3 = 0.0;
  double k_s = 0.0;  ///< signal wavenumber, rad/m; enters only the U,V phase factors
  double k_i = 0.0;  ///< idler wavenumber, rad/m
  double crystal_length = 0.02;  ///< L, m
};

/// Detector and counting parameters of the coincidence measurement.
struct DetectionParams {
  double t_window = 2.5e-9;      ///< coincidence window T_R, s
  double t_coherence = 580e-15;  ///< signal-idler coherence time T_c, s
  double rate_signal = 2000.0;   ///< measured singles rate R_m, Hz
  double rate_idler = 2000.0;    ///< measured singles rate R_n, Hz
  double bg_rate_signal = 0.0;   ///< background (dark/stray) singles on the signal detector, Hz
  double bg_rate_idler = 0.0;    ///< background singles on the idler detector, Hz
  double integration_time = 30.0;  ///< total counting time, s
  double eta_signal = 0.6;         ///< signal detector efficiency, in [0,1]
  double eta_idler = 0.25;         ///< idler detector efficiency, in [0,1]
  std::uint64_t rng_seed = 1;      ///< reproducibility seed
};

/// Reduce an angle to [0, 2*pi).
double wrap_phase(double phi);

/// Canonicalize and check: wraps phases, recomputes v2 = sinh^2(gain).
/// Throws RangeError naming the offending field. Idempotent.
ExperimentParams validate(ExperimentParams p);

/// Checks windows, rates and efficiencies. Throws RangeError.
DetectionParams validate(DetectionParams p);

}  // namespace icsim
