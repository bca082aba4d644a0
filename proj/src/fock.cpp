#include "icsim/fock.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <vector>

#include "icsim/errors.hpp"

namespace icsim::fock {

namespace {

long pow_long(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long stride_of(int cutoff, int mode) { return pow_long(cutoff, kNumModes - 1 - mode); }

void require_mode(int mode) {
  if (mode < 0 || mode >= kNumModes)
    throw DimensionMismatch("fock mode index " + std::to_string(mode) + " out of range");
}

/// Offsets of all basis states whose occupation is zero on modes p and q.
std::vector<long> rest_offsets(int cutoff, int mode_p, int mode_q) {
  std::vector<long> offsets{0};
  offsets.reserve(pow_long(cutoff, kNumModes - 2));
  for (int m = 0; m < kNumModes; ++m) {
    if (m == mode_p || m == mode_q) continue;
    const long s = stride_of(cutoff, m);
    std::vector<long> next;
    next.reserve(offsets.size() * cutoff);
    for (long base : offsets)
      for (int n = 0; n < cutoff; ++n) next.push_back(base + n * s);
    offsets = std::move(next);
  }
  return offsets;
}

Matrix single_mode_lower(int cutoff) {
  Matrix a = Matrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

/// log of a 2x2 unitary via eigendecomposition.
Eigen::Matrix2cd unitary_log(const Eigen::Matrix2cd& w) {
  const Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(w);
  const Eigen::Vector2cd log_eig = solver.eigenvalues().array().log();
  const Eigen::Matrix2cd p = solver.eigenvectors();
  return p * log_eig.asDiagonal() * p.inverse();
}

}  // namespace

TruncatedFockState vacuum_state(int cutoff, std::size_t basis_cap) {
  if (cutoff < 4) throw RangeError("cutoff", cutoff, "[4, ...]");
  const long dim = pow_long(cutoff, kNumModes);
  if (static_cast<std::size_t>(dim) > basis_cap)
    throw ResourceError("basis size " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(basis_cap));
  TruncatedFockState state;
  state.cutoff = cutoff;
  state.amplitudes = Vector::Zero(dim);
  state.amplitudes(0) = 1.0;
  return state;
}

std::pair<Matrix, Matrix> ladder_ops(int cutoff) {
  Matrix lower = single_mode_lower(cutoff);
  Matrix raise = lower.adjoint();
  return {std::move(lower), std::move(raise)};
}

Matrix squeeze_unitary(double gain, double pump_phase, int cutoff, double deficit_tol,
                       int pad) {
  if (!(gain >= 0.0)) throw RangeError("gain", gain, "[0, inf)");
  if (cutoff < 2) throw RangeError("cutoff", cutoff, "[2, ...]");
  const int dw = cutoff + pad;
  const Matrix a = single_mode_lower(dw);
  const Matrix eye = Matrix::Identity(dw, dw);
  const Matrix lower_a = Eigen::kroneckerProduct(a, eye);
  const Matrix lower_b = Eigen::kroneckerProduct(eye, a);

  const Complex xi = gain * std::exp(Complex(0.0, pump_phase - std::numbers::pi / 2.0));
  const Matrix generator = xi * (lower_a.adjoint() * lower_b.adjoint()) -
                           std::conj(xi) * (lower_a * lower_b);
  const Matrix padded = generator.exp();
  // The generator is anti-Hermitian, so the exponential must come out
  // unitary on its construction space; anything worse is a numerical fault.
  const double exp_defect =
      (padded.adjoint() * padded - Matrix::Identity(dw * dw, dw * dw))
          .cwiseAbs()
          .maxCoeff();
  if (exp_defect > 1e-10)
    throw TruncationError("squeeze_unitary: matrix exponential lost unitarity (defect " +
                          std::to_string(exp_defect) + ")");

  // Compress to occupations below the requested cutoff on both modes; the
  // column norms then decay by exactly the weight lost to truncation.
  Matrix op(cutoff * cutoff, cutoff * cutoff);
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n)
      for (int mm = 0; mm < cutoff; ++mm)
        for (int nn = 0; nn < cutoff; ++nn)
          op(m * cutoff + n, mm * cutoff + nn) = padded(m * dw + n, mm * dw + nn);

  const double vac_deficit = 1.0 - op.col(0).squaredNorm();
  if (vac_deficit > deficit_tol)
    throw TruncationError("squeeze_unitary: vacuum-output norm deficit " +
                          std::to_string(vac_deficit) + " exceeds tolerance " +
                          std::to_string(deficit_tol));
  return op;
}

Matrix bs_unitary(Complex amplitude, int cutoff) {
  if (cutoff < 2) throw RangeError("cutoff", cutoff, "[2, ...]");
  const double t2 = std::norm(amplitude);
  if (t2 > 1.0 + 1e-12) throw RangeError("amplitude", std::sqrt(t2), "[0, 1]");
  const double reflect = std::sqrt(std::max(0.0, 1.0 - t2));

  Eigen::Matrix2cd w;
  w << amplitude, reflect, -reflect, std::conj(amplitude);
  if ((w - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() == 0.0)
    return Matrix::Identity(cutoff * cutoff, cutoff * cutoff);

  const Eigen::Matrix2cd log_w = unitary_log(w);
  const Matrix a = single_mode_lower(cutoff);
  const Matrix eye = Matrix::Identity(cutoff, cutoff);
  const Matrix ops[2] = {Eigen::kroneckerProduct(a, eye), Eigen::kroneckerProduct(eye, a)};
  Matrix generator = Matrix::Zero(cutoff * cutoff, cutoff * cutoff);
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      generator += log_w(j, k) * (ops[j].adjoint() * ops[k]);
  return generator.exp();
}

double unitarity_defect(const Matrix& two_mode_op, int cutoff) {
  const Matrix gram = two_mode_op.adjoint() * two_mode_op;
  double defect = 0.0;
  for (int m = 0; m < cutoff; ++m)
    for (int n = 0; n < cutoff; ++n) {
      if (m + n > cutoff - 2) continue;
      for (int mm = 0; mm < cutoff; ++mm)
        for (int nn = 0; nn < cutoff; ++nn) {
          if (mm + nn > cutoff - 2) continue;
          const double expected = (m == mm && n == nn) ? 1.0 : 0.0;
          defect = std::max(defect,
                            std::abs(gram(m * cutoff + n, mm * cutoff + nn) - expected));
        }
    }
  return defect;
}

void apply_two_mode(TruncatedFockState& state, const Matrix& op, int mode_p, int mode_q) {
  require_mode(mode_p);
  require_mode(mode_q);
  if (mode_p == mode_q) throw DimensionMismatch("apply_two_mode: modes must differ");
  const int d = state.cutoff;
  if (op.rows() != d * d || op.cols() != d * d)
    throw DimensionMismatch("apply_two_mode: operator is " + std::to_string(op.rows()) +
                            "-dim, expected " + std::to_string(d * d));

  const long sp = stride_of(d, mode_p);
  const long sq = stride_of(d, mode_q);
  const std::vector<long> rest = rest_offsets(d, mode_p, mode_q);

  Matrix gathered(d * d, static_cast<long>(rest.size()));
  for (std::size_t c = 0; c < rest.size(); ++c)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        gathered(m * d + n, c) = state.amplitudes(rest[c] + m * sp + n * sq);

  const Matrix transformed = op * gathered;

  for (std::size_t c = 0; c < rest.size(); ++c)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        state.amplitudes(rest[c] + m * sp + n * sq) = transformed(m * d + n, c);
}

void apply_phase(TruncatedFockState& state, int mode, double phi) {
  require_mode(mode);
  const int d = state.cutoff;
  const long s = stride_of(d, mode);
  for (long idx = 0; idx < state.amplitudes.size(); ++idx) {
    const int n = static_cast<int>((idx / s) % d);
    if (n != 0) state.amplitudes(idx) *= std::exp(Complex(0.0, phi * n));
  }
}

Vector lower_mode(const TruncatedFockState& state, int mode) {
  require_mode(mode);
  const int d = state.cutoff;
  const long s = stride_of(d, mode);
  Vector out = Vector::Zero(state.amplitudes.size());
  for (long idx = 0; idx < state.amplitudes.size(); ++idx) {
    const int n = static_cast<int>((idx / s) % d);
    if (n >= 1) out(idx - s) = std::sqrt(double(n)) * state.amplitudes(idx);
  }
  return out;
}

double mean_photon(const TruncatedFockState& state, int mode) {
  return lower_mode(state, mode).squaredNorm();
}

Complex normal_corr(const TruncatedFockState& state, int m, int n) {
  return lower_mode(state, m).dot(lower_mode(state, n));
}

Complex anomalous_corr(const TruncatedFockState& state, int m, int n) {
  TruncatedFockState lowered{state.cutoff, lower_mode(state, m)};
  return state.amplitudes.dot(lower_mode(lowered, n));
}

namespace {

TruncatedFockState run_chain(const ExperimentParams& p, int cutoff, std::size_t basis_cap) {
  TruncatedFockState state = vacuum_state(cutoff, basis_cap);
  const Complex t_amp = std::polar(p.t_mag, p.t_phase);
  const Complex gamma_amp = std::polar(p.gamma_mag, p.gamma_phase);
  const double kl_s = p.k_s * p.crystal_length;
  const double kl_i = p.k_i * p.crystal_length;

  const Matrix nlc1 = squeeze_unitary(p.gain, p.phi_p1, cutoff);
  apply_two_mode(state, nlc1, kBs, kBi);
  apply_phase(state, kBs, kl_s);
  apply_phase(state, kBi, kl_i);
  apply_phase(state, kBi, p.phi_i1);
  apply_phase(state, kBs, p.phi_s1);

  apply_two_mode(state, bs_unitary(t_amp, cutoff), kBi, kF);
  apply_two_mode(state, bs_unitary(gamma_amp, cutoff), kBi, kAux);

  const Matrix nlc2 =
      (p.phi_p2 == p.phi_p1) ? nlc1 : squeeze_unitary(p.gain, p.phi_p2, cutoff);
  apply_two_mode(state, nlc2, kCs, kBi);
  apply_phase(state, kCs, kl_s);
  apply_phase(state, kBi, kl_i);
  apply_phase(state, kCs, p.phi_s2);
  apply_phase(state, kBi, p.phi_i3);
  return state;
}

}  // namespace

SimulationReport simulate(const ExperimentParams& raw, int cutoff, std::size_t basis_cap) {
  const ExperimentParams p = validate(raw);
  const TruncatedFockState state = run_chain(p, cutoff, basis_cap);

  SimulationReport report;
  report.norm_deficit = state.norm_deficit();
  if (report.norm_deficit > 1e-3)
    throw TruncationError("simulate: norm deficit " + std::to_string(report.norm_deficit) +
                          " exceeds 1e-3; raise the cutoff");

  const Vector a_s1 = lower_mode(state, kBs);
  const Vector a_s2 = lower_mode(state, kCs);
  const Vector a_v3 = lower_mode(state, kBi);
  const Vector a_w3 = lower_mode(state, kAux);
  report.n_s1 = a_s1.squaredNorm();
  report.n_s2 = a_s2.squaredNorm();
  report.n_i2 = mean_photon(state, kF);
  report.n_v3 = a_v3.squaredNorm();
  report.n_w3 = a_w3.squaredNorm();
  report.n_detected = report.n_v3 + report.n_w3;

  report.vacuum = (p.gain == 0.0);
  if (report.vacuum) return report;

  // Direct fourth moments <a_m^+ a_n^+ a_n a_m> = |a_n a_m psi|^2 summed
  // over the two detected idler slots.
  const TruncatedFockState s1_lowered{cutoff, a_s1};
  const TruncatedFockState s2_lowered{cutoff, a_s2};
  double fourth_13 = lower_mode(s1_lowered, kBi).squaredNorm() +
                     lower_mode(s1_lowered, kAux).squaredNorm();
  double fourth_23 = lower_mode(s2_lowered, kBi).squaredNorm() +
                     lower_mode(s2_lowered, kAux).squaredNorm();
  report.g13 = fourth_13 / (report.n_s1 * report.n_detected);
  report.g23 = fourth_23 / (report.n_s2 * report.n_detected);
  report.g12 = std::abs(a_s1.dot(a_s2)) / std::sqrt(report.n_s1 * report.n_s2);
  // Exact fringe extremes over the relative phase.
  report.visibility = 2.0 * std::abs(a_s1.dot(a_s2)) / (report.n_s1 + report.n_s2);
  return report;
}

LowGainReport low_gain_amplitudes(const ExperimentParams& raw, int cutoff,
                                  std::size_t basis_cap) {
  const ExperimentParams p = validate(raw);
  if (p.gain > 0.1) throw RangeError("gain", p.gain, "[0, 0.1] for amplitude extraction");
  if (p.gain == 0.0)
    throw ZeroGainError("low_gain_amplitudes: no pair sector at zero gain");
  const TruncatedFockState state = run_chain(p, cutoff, basis_cap);
  const int d = cutoff;

  const auto at = [&](int n_bs, int n_bi, int n_f, int n_aux, int n_cs) {
    const long idx = ((static_cast<long>(n_bs) * d + n_bi) * d + n_f) * d * d +
                     static_cast<long>(n_aux) * d + n_cs;
    return state.amplitudes(idx);
  };

  LowGainReport report;
  report.norm_deficit = state.norm_deficit();
  report.amp_i2 = at(1, 0, 1, 0, 0);
  report.amp_v3 = at(1, 1, 0, 0, 0);
  report.amp_w3 = at(1, 0, 0, 1, 0);
  report.amp_nlc2 = at(0, 1, 0, 0, 1);

  const double norm1 = std::sqrt(std::norm(report.amp_i2) + std::norm(report.amp_v3) +
                                 std::norm(report.amp_w3));
  if (norm1 == 0.0 || std::abs(report.amp_nlc2) == 0.0)
    throw ZeroGainError("low_gain_amplitudes: empty single-pair sector");
  report.ratio_i2 = std::abs(report.amp_i2) / norm1;
  report.ratio_v3 = std::abs(report.amp_v3) / norm1;
  report.ratio_w3 = std::abs(report.amp_w3) / norm1;
  report.overlap_mag = std::abs(std::conj(report.amp_v3) * report.amp_nlc2) /
                       (norm1 * std::abs(report.amp_nlc2));
  report.distinguishability =
      std::sqrt(std::max(0.0, 1.0 - report.overlap_mag * report.overlap_mag));
  return report;
}

}  // namespace icsim::fock
