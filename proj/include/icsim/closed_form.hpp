#pragma once

#include <complex>
#include <utility>

namespace icsim::closed_form {

/// Normalized second-order correlations between a signal arm and the
/// detected idler. For physical inputs g23 >= g13, with equality at |t| = 1.
struct G2Pair {
  double g13 = 1.0;
  double g23 = 1.0;
};

/// Photon flux per mode at the three outputs.
struct SinglesRates {
  double n_s1 = 0.0;
  double n_s2 = 0.0;
  double n_i3 = 0.0;
};

/// U = cosh(G) e^{ikL}, V = -i sinh(G) e^{ikL}; |U|^2 - |V|^2 = 1.
std::pair<std::complex<double>, std::complex<double>> bogoliubov_uv(double gain,
                                                                    double k,
                                                                    double length);

/// n_s1 = v2, n_s2 = v2 (1 + t^2 v2), n_i3 = v2 (1 + t^2 (1 + v2)).
SinglesRates singles_rates(double t_mag, double v2);

/// g13 = 1 + t^2 |U|^4 / [(1 + t^2 |U|^2) v2].  Throws ZeroGainError at v2 = 0.
double g13_full(double t_mag, double v2);

/// g23 = 1 + (1 + t^2 v2)(1 + v2) / [v2 (1 + t^2 |U|^2)].  Throws ZeroGainError at v2 = 0.
double g23_full(double t_mag, double v2);

/// Low-gain limits: 1 + t^2 / [(1 + t^2) v2] and 1 + 1 / [(1 + t^2) v2].
double g13_low(double t_mag, double v2);
double g23_low(double t_mag, double v2);

/// D = sqrt[(g23 - g13) / (g23 - 1)].  DomainError if g23 <= 1 or if the
/// radicand is negative beyond 1e-12 (inconsistent inputs).
double dist_from_g2(double g13, double g23);
double dist_from_g2(const G2Pair& pair);

/// Both correlations from the exact expressions.  Throws ZeroGainError at v2 = 0.
G2Pair g2_pair_full(double t_mag, double v2);

/// D = sqrt[1 - gamma^2 (g13 - 1) / (g23 - 1)], the overlap-corrected form.
/// Radicand within 1e-12 below zero is clamped to 0; worse is a DomainError.
double dist_from_g2_overlap(double g13, double g23, double gamma_mag);

/// Trace-distance distinguishability sqrt(1 - gamma^2 t^2).
double dist_trace(double t_mag, double gamma_mag);

/// Low-gain fringe visibility |gamma| |t|.
double visibility_low(double t_mag, double gamma_mag);

/// Distinguishability at arbitrary gain:
/// sqrt[(1 - t^2 + t^2 (1 - t^2) v2) / (1 + 2 t^2 v2 + t^4 v2^2)].
double dist_highgain(double t_mag, double v2);

/// First-order coherence |t| sqrt[(1 + v2) / (1 + v2 t^2)], in [0, 1].
double g12_coherence(double t_mag, double v2);

/// dist_highgain^2 + g12_coherence^2 - 1; analytically zero everywhere.
double complementarity_residual(double t_mag, double v2);

/// R_mn = R_m R_n T_R [1 + (T_c / T_R) Gamma_mn].
double coincidence_rate(double rate_m, double rate_n, double t_window,
                        double t_coherence, double big_gamma);

/// Peak-ratio approximation T_c / (T_R v2) for the s1 arm.  This is the
/// approximate form, valid when T_c / (T_R v2) >> 1; the exact ratio follows
/// from coincidence_rate composed with g13_low.  Throws ZeroGainError at v2 = 0.
double ratio_r13(double t_coherence, double t_window, double v2);

/// Peak ratio for the s2 arm: 1, independent of the transmission.
double ratio_r23();

/// V = sqrt(1 - Delta^2) |g12| with Delta = |n1 - n2| / (n1 + n2).
double visibility_from_g1(double n1, double n2, double g1_mag);

}  // namespace icsim::closed_form
