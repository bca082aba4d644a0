#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>

#include "icsim/params.hpp"

namespace icsim::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kNumModes = 5;

/// Fixed mode order of the amplitude vector (first index is slowest):
/// (b_s, b_i, f, v3_aux, c_s).  After the chain, b_s holds s1, b_i holds
/// v3, f holds i2, v3_aux holds w3 and c_s holds s2.
enum FockMode : int { kBs = 0, kBi = 1, kF = 2, kAux = 3, kCs = 4 };

/// Multimode state in a per-mode photon-number cutoff basis.  Operators are
/// compressions of the exact infinite-space unitaries, so the norm decays by
/// exactly the probability that leaked past the cutoff.
struct TruncatedFockState {
  int cutoff = 0;
  Vector amplitudes;  // length cutoff^kNumModes

  double norm_deficit() const { return 1.0 - amplitudes.squaredNorm(); }
};

/// |vac>; throws RangeError if cutoff < 4, ResourceError if cutoff^5 > basis_cap.
TruncatedFockState vacuum_state(int cutoff, std::size_t basis_cap = 100000);

/// Single-mode (lower, raise) with the standard sqrt(n) matrix elements.
std::pair<Matrix, Matrix> ladder_ops(int cutoff);

/// Two-mode squeezer exp[xi a^dag b^dag - xi* a b] with xi = G e^{i(phi_p - pi/2)},
/// exponentiated on a padded space and compressed to cutoff^2 x cutoff^2.
/// Throws TruncationError if the vacuum-output norm deficit exceeds deficit_tol.
Matrix squeeze_unitary(double gain, double pump_phase, int cutoff,
                       double deficit_tol = 1e-3, int pad = 10);

/// Number-conserving beamsplitter realizing the 2x2 mode map
/// [[t, r'], [-r'*, t*]]; exactly unitary at any cutoff.
Matrix bs_unitary(Complex amplitude, int cutoff);

/// Max |(U^+ U - I)| over the block with total photons <= cutoff - 2
/// (edge-of-truncation rows are where compression loss lives).
double unitarity_defect(const Matrix& two_mode_op, int cutoff);

/// Apply a two-mode operator to the pair (mode_p, mode_q) of the state;
/// mode_p indexes the operator's first tensor factor.
void apply_two_mode(TruncatedFockState& state, const Matrix& op, int mode_p, int mode_q);

void apply_phase(TruncatedFockState& state, int mode, double phi);

/// a_mode applied to the amplitude vector.
Vector lower_mode(const TruncatedFockState& state, int mode);

double mean_photon(const TruncatedFockState& state, int mode);
Complex normal_corr(const TruncatedFockState& state, int m, int n);
Complex anomalous_corr(const TruncatedFockState& state, int m, int n);

struct SimulationReport {
  double n_s1 = 0.0;
  double n_s2 = 0.0;
  double n_i2 = 0.0;
  double n_v3 = 0.0;
  double n_w3 = 0.0;
  double n_detected = 0.0;  // n_v3 + n_w3, what the i3 detector counts
  bool vacuum = false;      // zero-gain run; correlations undefined
  std::optional<double> g13;
  std::optional<double> g23;
  std::optional<double> g12;
  std::optional<double> visibility;
  double norm_deficit = 0.0;
};

/// Build the full chain on the truncated space and read every quantity as a
/// direct matrix expectation (no Gaussian factorization anywhere).
/// Throws TruncationError if the final norm deficit exceeds 1e-3.
SimulationReport simulate(const ExperimentParams& params, int cutoff,
                          std::size_t basis_cap = 100000);

struct LowGainReport {
  Complex amp_i2;    // NLC1 pair, idler reflected into i2
  Complex amp_v3;    // NLC1 pair, idler transmitted into the NLC2 mode v3
  Complex amp_w3;    // NLC1 pair, idler transmitted into the orthogonal mode w3
  Complex amp_nlc2;  // NLC2 pair (idler in v3)
  double ratio_i2 = 0.0;  // branch magnitudes normalized over the NLC1 triple
  double ratio_v3 = 0.0;
  double ratio_w3 = 0.0;
  double overlap_mag = 0.0;         // |<Psi_1|Psi_2>| of the conditional idler states
  double distinguishability = 0.0;  // sqrt(1 - overlap^2)
  double norm_deficit = 0.0;
};

/// Single-pair-sector amplitudes of the low-gain state; requires gain <= 0.1.
LowGainReport low_gain_amplitudes(const ExperimentParams& params, int cutoff,
                                  std::size_t basis_cap = 100000);

}  // namespace icsim::fock
