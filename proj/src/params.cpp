#include "icsim/params.hpp"

#include <cmath>
#include <numbers>

#include "icsim/errors.hpp"

namespace icsim {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;  // fmod rounding can land exactly on 2*pi
  return w;
}

ExperimentParams validate(ExperimentParams p) {
  if (!(p.gain >= 0.0) || !std::isfinite(p.gain))
    throw RangeError("gain", p.gain, "[0, inf)");
  if (!(p.t_mag >= 0.0 && p.t_mag <= 1.0))
    throw RangeError("t_mag", p.t_mag, "[0, 1]");
  if (!(p.gamma_mag >= 0.0 && p.gamma_mag <= 1.0))
    throw RangeError("gamma_mag", p.gamma_mag, "[0, 1]");
  if (!std::isfinite(p.crystal_length) || p.crystal_length < 0.0)
    throw RangeError("crystal_length", p.crystal_length, "[0, inf)");

  const double s = std::sinh(p.gain);
  p.v2 = s * s;

  p.t_phase = wrap_phase(p.t_phase);
  p.gamma_phase = wrap_phase(p.gamma_phase);
  p.phi_p1 = wrap_phase(p.phi_p1);
  p.phi_p2 = wrap_phase(p.phi_p2);
  p.phi_s1 = wrap_phase(p.phi_s1);
  p.phi_s2 = wrap_phase(p.phi_s2);
  p.phi_i1 = wrap_phase(p.phi_i1);
  p.phi_i3 = wrap_phase(p.phi_i3);
  return p;
}

DetectionParams validate(DetectionParams p) {
  if (!(p.t_window > 0.0)) throw RangeError("t_window", p.t_window, "(0, inf)");
  if (!(p.t_coherence > 0.0))
    throw RangeError("t_coherence", p.t_coherence, "(0, inf)");
  if (!(p.t_coherence < p.t_window))
    throw RangeError("t_coherence", p.t_coherence, "(0, t_window)");
  if (!(p.rate_signal >= 0.0))
    throw RangeError("rate_signal", p.rate_signal, "[0, inf)");
  if (!(p.rate_idler >= 0.0))
    throw RangeError("rate_idler", p.rate_idler, "[0, inf)");
  if (!(p.bg_rate_signal >= 0.0))
    throw RangeError("bg_rate_signal", p.bg_rate_signal, "[0, inf)");
  if (!(p.bg_rate_idler >= 0.0))
    throw RangeError("bg_rate_idler", p.bg_rate_idler, "[0, inf)");
  if (!(p.integration_time > 0.0))
    throw RangeError("integration_time", p.integration_time, "(0, inf)");
  if (!(p.eta_signal >= 0.0 && p.eta_signal <= 1.0))
    throw RangeError("eta_signal", p.eta_signal, "[0, 1]");
  if (!(p.eta_idler >= 0.0 && p.eta_idler <= 1.0))
    throw RangeError("eta_idler", p.eta_idler, "[0, 1]");
  return p;
}

}  // namespace icsim
