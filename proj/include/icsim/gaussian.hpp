#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "icsim/params.hpp"

namespace icsim::gaussian {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Fixed slot layout of the two-crystal chain.  Before the chain the slots
/// hold the inputs (b_s, b_i, c_s, f, v3_aux); after build_setup the same
/// slots hold the outputs named here.  w3 is the component of the NLC1 idler
/// orthogonal to the NLC2 idler mode v3.
enum Mode : int { kS1 = 0, kV3 = 1, kS2 = 2, kI2 = 3, kW3 = 4, kModeCount = 5 };

std::vector<std::string> setup_mode_labels();

/// Both idler slots a photon-counting detector behind the i3 port collects.
std::vector<int> detected_idler_modes();

/// One linear bosonic (Bogoliubov) step: a_out = A a_in + B a_in^dag.
struct LinearBosonicMap {
  Matrix a_coeff;
  Matrix b_coeff;

  int size() const { return static_cast<int>(a_coeff.rows()); }

  /// Max entrywise violation of A A^+ - B B^+ = I and A B^T = B A^T.
  double bogoliubov_defect() const;
};

/// Second moments of a zero-mean Gaussian multimode state:
/// n_corr(i,j) = <a_i^dag a_j>, m_corr(i,j) = <a_i a_j>.
struct MomentState {
  std::vector<std::string> modes;
  Matrix n_corr;
  Matrix m_corr;

  int size() const { return static_cast<int>(n_corr.rows()); }
};

MomentState vacuum(std::vector<std::string> modes);

/// Two-mode squeezer on (mode_s, mode_i) embedded in the identity:
/// a_s -> U_s a_s + V_s e^{i phi_p} a_i^dag with U = cosh(G) e^{ikL},
/// V = -i sinh(G) e^{ikL}.
LinearBosonicMap squeezer_map(int mode_s, int mode_i, double gain, double pump_phase,
                              double k_s, double k_i, double length, int total_modes);

/// Number-conserving beamsplitter [[t, r'], [-r'*, t*]] with r' = sqrt(1-|t|^2).
LinearBosonicMap beamsplitter_map(int mode_a, int mode_b, Complex amplitude,
                                  int total_modes);

LinearBosonicMap phase_map(int mode, double phi, int total_modes);

/// Moment update by direct substitution of a_out = A a + B a^dag:
///   N' = conj(A) N A^T + conj(A) conj(M) B^T + conj(B) M A^T + conj(B) (I + N^T) B^T
///   M' = A M A^T + A (I + N^T) B^T + B N A^T + B conj(M) B^T
/// The (I + N^T) terms carry the vacuum commutator <a a^dag> = 1 + <a^dag a>.
MomentState apply_map(const MomentState& state, const LinearBosonicMap& map);

/// Full interferometer chain: NLC1 squeezer, propagation phases, loss
/// beamsplitter onto the i2 slot, overlap beamsplitter routing the NLC1
/// idler into (v3, w3), NLC2 squeezer on (c_s, v3), output phases.
MomentState build_setup(const ExperimentParams& params);

double mean_photon(const MomentState& state, int mode);
Complex normal_corr(const MomentState& state, int m, int n);
Complex anomalous_corr(const MomentState& state, int m, int n);

/// g2 = 1 + (|<a_m^dag a_n>|^2 + |<a_m a_n>|^2) / (<n_m> <n_n>), from the
/// Gaussian factorization of the fourth moment.  Throws ZeroPhotonError.
double g2(const MomentState& state, int m, int n);

/// g2 between mode m and a photon-counting detector summing several modes.
/// Reduces to g2(m, n) when all but one detector mode are dark.
double g2_detected(const MomentState& state, int m, const std::vector<int>& detector_modes);

/// |<a_m^dag a_n>| / sqrt(<n_m> <n_n>), in [0, 1].  Throws ZeroPhotonError.
double g1(const MomentState& state, int m, int n);

/// N3(phi) = N_m + N_n + 2 Re[e^{i phi} <a_m^dag a_n>] per grid phase.
std::vector<std::pair<double, double>> fringe_scan(const MomentState& state, int m, int n,
                                                   const std::vector<double>& phase_grid);

/// Visibility (max-min)/(max+min) extracted by a least-squares sinusoid fit
/// c0 + c1 cos(phi) + c2 sin(phi); exact for any grid of >= 3 distinct phases.
double visibility_from_scan(const std::vector<std::pair<double, double>>& scan);

double fringe_visibility(const MomentState& state, int m, int n, int n_phases = 64);

/// Most negative eigenvalue (as a positive defect, 0 if none) of the moment
/// block matrix [[N^T + I, M], [M^+, N]]; physical states give 0.
double physicality_defect(const MomentState& state);

}  // namespace icsim::gaussian
