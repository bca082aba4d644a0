#include "icsim/closed_form.hpp"

#include <cmath>

#include "icsim/errors.hpp"

namespace icsim::closed_form {

namespace {
constexpr double kRadicandTol = 1e-12;

void require_positive_v2(double v2) {
  if (v2 < 0.0) throw RangeError("v2", v2, "[0, inf)");
  if (v2 == 0.0)
    throw ZeroGainError("g^(2) is undefined on the vacuum (v2 = 0)");
}
}  // namespace

std::pair<std::complex<double>, std::complex<double>> bogoliubov_uv(double gain,
                                                                    double k,
                                                                    double length) {
  if (!(gain >= 0.0)) throw RangeError("gain", gain, "[0, inf)");
  const std::complex<double> phase = std::exp(std::complex<double>(0.0, k * length));
  return {std::cosh(gain) * phase,
          std::complex<double>(0.0, -1.0) * std::sinh(gain) * phase};
}

SinglesRates singles_rates(double t_mag, double v2) {
  const double t2 = t_mag * t_mag;
  const double u2 = 1.0 + v2;
  return {v2, v2 * (1.0 + t2 * v2), v2 * (1.0 + t2 * u2)};
}

double g13_full(double t_mag, double v2) {
  require_positive_v2(v2);
  const double t2 = t_mag * t_mag;
  const double u2 = 1.0 + v2;
  return 1.0 + t2 * (u2 * u2) / (v2 * (1.0 + t2 * u2));
}

double g23_full(double t_mag, double v2) {
  require_positive_v2(v2);
  const double t2 = t_mag * t_mag;
  const double u2 = 1.0 + v2;
  // Factored numerator: t^4 u^6 + 2 t^2 u^4 - 2 t^4 u^4 + u^2 (1-t^2)^2
  // = (1 + t^2 v2)^2 (1 + v2); one (1 + t^2 v2) cancels against the
  // denominator.  This form is exactly equal to g13_full at t = 1.
  return 1.0 + (1.0 + t2 * v2) * (1.0 + v2) / (v2 * (1.0 + t2 * u2));
}

double g13_low(double t_mag, double v2) {
  require_positive_v2(v2);
  const double t2 = t_mag * t_mag;
  return 1.0 + t2 / ((1.0 + t2) * v2);
}

double g23_low(double t_mag, double v2) {
  require_positive_v2(v2);
  const double t2 = t_mag * t_mag;
  return 1.0 + 1.0 / ((1.0 + t2) * v2);
}

double dist_from_g2(double g13, double g23) { return dist_from_g2_overlap(g13, g23, 1.0); }

double dist_from_g2(const G2Pair& pair) { return dist_from_g2(pair.g13, pair.g23); }

G2Pair g2_pair_full(double t_mag, double v2) {
  return {g13_full(t_mag, v2), g23_full(t_mag, v2)};
}

double dist_from_g2_overlap(double g13, double g23, double gamma_mag) {
  if (!(g23 > 1.0))
    throw DomainError("dist_from_g2: g23 must exceed 1, got " + std::to_string(g23));
  const double radicand = 1.0 - gamma_mag * gamma_mag * (g13 - 1.0) / (g23 - 1.0);
  if (radicand < 0.0) {
    if (radicand >= -kRadicandTol) return 0.0;
    throw DomainError("dist_from_g2: negative radicand " + std::to_string(radicand) +
                      " signals inconsistent g^(2) inputs");
  }
  return std::sqrt(radicand);
}

double dist_trace(double t_mag, double gamma_mag) {
  return std::sqrt(1.0 - gamma_mag * gamma_mag * t_mag * t_mag);
}

double visibility_low(double t_mag, double gamma_mag) { return gamma_mag * t_mag; }

double dist_highgain(double t_mag, double v2) {
  const double t2 = t_mag * t_mag;
  const double num = 1.0 - t2 + t2 * (1.0 - t2) * v2;
  const double den = 1.0 + 2.0 * t2 * v2 + t2 * t2 * v2 * v2;
  return std::sqrt(num / den);
}

double g12_coherence(double t_mag, double v2) {
  return t_mag * std::sqrt((1.0 + v2) / (1.0 + v2 * t_mag * t_mag));
}

double complementarity_residual(double t_mag, double v2) {
  const double d = dist_highgain(t_mag, v2);
  const double g = g12_coherence(t_mag, v2);
  return d * d + g * g - 1.0;
}

double coincidence_rate(double rate_m, double rate_n, double t_window,
                        double t_coherence, double big_gamma) {
  return rate_m * rate_n * t_window * (1.0 + t_coherence / t_window * big_gamma);
}

double ratio_r13(double t_coherence, double t_window, double v2) {
  require_positive_v2(v2);
  return t_coherence / (t_window * v2);
}

double ratio_r23() { return 1.0; }

double visibility_from_g1(double n1, double n2, double g1_mag) {
  if (n1 < 0.0 || n2 < 0.0 || n1 + n2 <= 0.0)
    throw DomainError("visibility_from_g1: mean photon numbers must be >= 0 and not both zero");
  if (!(g1_mag >= 0.0 && g1_mag <= 1.0))
    throw DomainError("visibility_from_g1: |g12| must lie in [0, 1]");
  const double delta = std::abs(n1 - n2) / (n1 + n2);
  return std::sqrt(1.0 - delta * delta) * g1_mag;
}

}  // namespace icsim::closed_form
