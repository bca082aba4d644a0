#include "icsim/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "icsim/errors.hpp"

namespace icsim::gaussian {

namespace {

void require_mode(const MomentState& state, int mode) {
  if (mode < 0 || mode >= state.size())
    throw DimensionMismatch("mode index " + std::to_string(mode) + " out of range for " +
                            std::to_string(state.size()) + " modes");
}

void require_distinct_modes(int a, int b, int total) {
  if (a < 0 || b < 0 || a >= total || b >= total || a == b)
    throw DimensionMismatch("invalid mode pair (" + std::to_string(a) + ", " +
                            std::to_string(b) + ") for " + std::to_string(total) + " modes");
}

}  // namespace

std::vector<std::string> setup_mode_labels() { return {"s1", "v3", "s2", "i2", "w3"}; }

std::vector<int> detected_idler_modes() { return {kV3, kW3}; }

double LinearBosonicMap::bogoliubov_defect() const {
  const int k = size();
  const Matrix unit = a_coeff * a_coeff.adjoint() - b_coeff * b_coeff.adjoint() -
                      Matrix::Identity(k, k);
  const Matrix sym = a_coeff * b_coeff.transpose() - b_coeff * a_coeff.transpose();
  return std::max(unit.cwiseAbs().maxCoeff(), sym.cwiseAbs().maxCoeff());
}

MomentState vacuum(std::vector<std::string> modes) {
  const int k = static_cast<int>(modes.size());
  MomentState state;
  state.modes = std::move(modes);
  state.n_corr = Matrix::Zero(k, k);
  state.m_corr = Matrix::Zero(k, k);
  return state;
}

LinearBosonicMap squeezer_map(int mode_s, int mode_i, double gain, double pump_phase,
                              double k_s, double k_i, double length, int total_modes) {
  require_distinct_modes(mode_s, mode_i, total_modes);
  if (!(gain >= 0.0)) throw RangeError("gain", gain, "[0, inf)");

  const Complex i_unit(0.0, 1.0);
  const Complex us = std::cosh(gain) * std::exp(i_unit * (k_s * length));
  const Complex ui = std::cosh(gain) * std::exp(i_unit * (k_i * length));
  const Complex vs = -i_unit * std::sinh(gain) * std::exp(i_unit * (k_s * length));
  const Complex vi = -i_unit * std::sinh(gain) * std::exp(i_unit * (k_i * length));
  const Complex pump = std::exp(i_unit * pump_phase);

  LinearBosonicMap map{Matrix::Identity(total_modes, total_modes),
                       Matrix::Zero(total_modes, total_modes)};
  map.a_coeff(mode_s, mode_s) = us;
  map.a_coeff(mode_i, mode_i) = ui;
  map.b_coeff(mode_s, mode_i) = vs * pump;
  map.b_coeff(mode_i, mode_s) = vi * pump;
  return map;
}

LinearBosonicMap beamsplitter_map(int mode_a, int mode_b, Complex amplitude,
                                  int total_modes) {
  require_distinct_modes(mode_a, mode_b, total_modes);
  const double t2 = std::norm(amplitude);
  if (t2 > 1.0 + 1e-12)
    throw RangeError("amplitude", std::sqrt(t2), "[0, 1]");
  const double reflect = std::sqrt(std::max(0.0, 1.0 - t2));

  LinearBosonicMap map{Matrix::Identity(total_modes, total_modes),
                       Matrix::Zero(total_modes, total_modes)};
  map.a_coeff(mode_a, mode_a) = amplitude;
  map.a_coeff(mode_a, mode_b) = reflect;
  map.a_coeff(mode_b, mode_a) = -reflect;
  map.a_coeff(mode_b, mode_b) = std::conj(amplitude);
  return map;
}

LinearBosonicMap phase_map(int mode, double phi, int total_modes) {
  if (mode < 0 || mode >= total_modes)
    throw DimensionMismatch("phase_map: mode out of range");
  LinearBosonicMap map{Matrix::Identity(total_modes, total_modes),
                       Matrix::Zero(total_modes, total_modes)};
  map.a_coeff(mode, mode) = std::exp(Complex(0.0, phi));
  return map;
}

MomentState apply_map(const MomentState& state, const LinearBosonicMap& map) {
  const int k = state.size();
  if (map.size() != k || map.b_coeff.rows() != k || map.a_coeff.cols() != k ||
      map.b_coeff.cols() != k)
    throw DimensionMismatch("apply_map: map is " + std::to_string(map.size()) +
                            "-mode, state is " + std::to_string(k) + "-mode");

  const Matrix& a = map.a_coeff;
  const Matrix& b = map.b_coeff;
  const Matrix& n = state.n_corr;
  const Matrix& m = state.m_corr;
  const Matrix comm = Matrix::Identity(k, k) + n.transpose();  // <a a^dag> ordering

  MomentState out;
  out.modes = state.modes;
  out.n_corr = a.conjugate() * n * a.transpose() + a.conjugate() * m.conjugate() * b.transpose() +
               b.conjugate() * m * a.transpose() + b.conjugate() * comm * b.transpose();
  out.m_corr = a * m * a.transpose() + a * comm * b.transpose() + b * n * a.transpose() +
               b * m.conjugate() * b.transpose();
  return out;
}

MomentState build_setup(const ExperimentParams& raw) {
  const ExperimentParams p = validate(raw);
  const int k = kModeCount;
  const Complex t_amp = std::polar(p.t_mag, p.t_phase);
  const Complex gamma_amp = std::polar(p.gamma_mag, p.gamma_phase);

  MomentState state = vacuum(setup_mode_labels());
  state = apply_map(state, squeezer_map(kS1, kV3, p.gain, p.phi_p1, p.k_s, p.k_i,
                                        p.crystal_length, k));
  state = apply_map(state, phase_map(kV3, p.phi_i1, k));
  state = apply_map(state, phase_map(kS1, p.phi_s1, k));
  state = apply_map(state, beamsplitter_map(kV3, kI2, t_amp, k));
  state = apply_map(state, beamsplitter_map(kV3, kW3, gamma_amp, k));
  state = apply_map(state, squeezer_map(kS2, kV3, p.gain, p.phi_p2, p.k_s, p.k_i,
                                        p.crystal_length, k));
  state = apply_map(state, phase_map(kS2, p.phi_s2, k));
  state = apply_map(state, phase_map(kV3, p.phi_i3, k));
  return state;
}

double mean_photon(const MomentState& state, int mode) {
  require_mode(state, mode);
  return state.n_corr(mode, mode).real();
}

Complex normal_corr(const MomentState& state, int m, int n) {
  require_mode(state, m);
  require_mode(state, n);
  return state.n_corr(m, n);
}

Complex anomalous_corr(const MomentState& state, int m, int n) {
  require_mode(state, m);
  require_mode(state, n);
  return state.m_corr(m, n);
}

double g2(const MomentState& state, int m, int n) { return g2_detected(state, m, {n}); }

double g2_detected(const MomentState& state, int m, const std::vector<int>& detector_modes) {
  require_mode(state, m);
  const double n_m = mean_photon(state, m);
  double n_det = 0.0;
  double cross = 0.0;
  for (int n : detector_modes) {
    require_mode(state, n);
    n_det += mean_photon(state, n);
    cross += std::norm(state.n_corr(m, n)) + std::norm(state.m_corr(m, n));
  }
  if (n_m <= 0.0 || n_det <= 0.0)
    throw ZeroPhotonError("g2 undefined: zero mean photon number on mode " +
                          std::to_string(m) + " or the detector");
  return 1.0 + cross / (n_m * n_det);
}

double g1(const MomentState& state, int m, int n) {
  require_mode(state, m);
  require_mode(state, n);
  const double n_m = mean_photon(state, m);
  const double n_n = mean_photon(state, n);
  if (n_m <= 0.0 || n_n <= 0.0)
    throw ZeroPhotonError("g1 undefined: zero mean photon number on mode " +
                          std::to_string(n_m <= 0.0 ? m : n));
  return std::abs(state.n_corr(m, n)) / std::sqrt(n_m * n_n);
}

std::vector<std::pair<double, double>> fringe_scan(const MomentState& state, int m, int n,
                                                   const std::vector<double>& phase_grid) {
  require_mode(state, m);
  require_mode(state, n);
  const double n_m = mean_photon(state, m);
  const double n_n = mean_photon(state, n);
  const Complex corr = state.n_corr(m, n);

  std::vector<std::pair<double, double>> scan;
  scan.reserve(phase_grid.size());
  for (double phi : phase_grid) {
    const double combined =
        n_m + n_n + 2.0 * (std::exp(Complex(0.0, phi)) * corr).real();
    scan.emplace_back(phi, combined);
  }
  return scan;
}

double visibility_from_scan(const std::vector<std::pair<double, double>>& scan) {
  if (scan.size() < 3)
    throw DomainError("visibility_from_scan: need at least 3 scan points");
  // Normal equations for N3 = c0 + c1 cos(phi) + c2 sin(phi); the scan is
  // exactly in this span, so the fit recovers the extremes to round-off.
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (const auto& [phi, value] : scan) {
    const Eigen::Vector3d row(1.0, std::cos(phi), std::sin(phi));
    ata += row * row.transpose();
    atb += row * value;
  }
  const Eigen::Vector3d coeff = ata.ldlt().solve(atb);
  const double mean = coeff(0);
  const double amp = std::hypot(coeff(1), coeff(2));
  if (!(mean > 0.0))
    throw DomainError("visibility_from_scan: non-positive mean intensity");
  return amp / mean;
}

double fringe_visibility(const MomentState& state, int m, int n, int n_phases) {
  if (n_phases < 3) throw DomainError("fringe_visibility: need at least 3 phases");
  std::vector<double> grid(n_phases);
  for (int i = 0; i < n_phases; ++i)
    grid[i] = 2.0 * std::numbers::pi * i / n_phases;
  return visibility_from_scan(fringe_scan(state, m, n, grid));
}

double physicality_defect(const MomentState& state) {
  const int k = state.size();
  Matrix block(2 * k, 2 * k);
  block.topLeftCorner(k, k) = state.n_corr.transpose() + Matrix::Identity(k, k);
  block.topRightCorner(k, k) = state.m_corr;
  block.bottomLeftCorner(k, k) = state.m_corr.adjoint();
  block.bottomRightCorner(k, k) = state.n_corr;
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(block, Eigen::EigenvaluesOnly);
  const double lambda_min = solver.eigenvalues().minCoeff();
  return std::max(0.0, -lambda_min);
}

}  // namespace icsim::gaussian
