#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "icsim/closed_form.hpp"
#include "icsim/errors.hpp"
#include "icsim/fock.hpp"
#include "icsim/gaussian.hpp"

using namespace icsim;
using namespace icsim::fock;
namespace cf = icsim::closed_form;
namespace ge = icsim::gaussian;

namespace {

ExperimentParams setup_params(double gain, double t, double gamma) {
  ExperimentParams p;
  p.gain = gain;
  p.t_mag = t;
  p.gamma_mag = gamma;
  return p;
}

}  // namespace

TEST_CASE("ladder operators") {
  const int d = 6;
  const auto [lower, raise] = ladder_ops(d);
  // lower |1> = |0>, raise |0> = |1>
  CHECK(lower(0, 1) == std::complex<double>(1.0, 0.0));
  CHECK(raise(1, 0) == std::complex<double>(1.0, 0.0));
  CHECK((raise - lower.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  // [lower, raise] = I except the last diagonal entry (truncation artifact)
  const Matrix comm = lower * raise - raise * lower;
  for (int n = 0; n < d - 1; ++n)
    CHECK(std::abs(comm(n, n) - std::complex<double>(1.0, 0.0)) <= 1e-14);
  CHECK(comm(d - 1, d - 1).real() == doctest::Approx(-(d - 1.0)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) CHECK(std::abs(comm(i, j)) == 0.0);
}

TEST_CASE("squeeze unitary basics") {
  const int d = 8;
  CHECK((squeeze_unitary(0.0, 0.0, d) - Matrix::Identity(d * d, d * d))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  const double gain = 0.2;
  const auto op = squeeze_unitary(gain, 0.4, d);
  // vacuum output: mean photons sinh^2(G) on each mode, diagonal |nn> support
  Vector vac = Vector::Zero(d * d);
  vac(0) = 1.0;
  const Vector out = op * vac;
  double mean_a = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) mean_a += m * std::norm(out(m * d + n));
  CHECK(mean_a == doctest::Approx(std::sinh(gain) * std::sinh(gain)).epsilon(1e-6));
  // pair-amplitude ratio c1/c0 = -i e^{i phi} tanh(G)
  const std::complex<double> ratio = out(1 * d + 1) / out(0);
  const std::complex<double> expected =
      std::complex<double>(0.0, -1.0) * std::polar(std::tanh(gain), 0.4);
  CHECK(std::abs(ratio - expected) <= 1e-12);
  // off-diagonal pair sectors stay empty
  CHECK(std::abs(out(1 * d + 0)) == 0.0);
  CHECK(std::abs(out(0 * d + 2)) == 0.0);

  // Compression decays the vacuum column by exactly the weight above the
  // cutoff, tanh(G)^{2d} for two-mode squeezed vacuum.
  const double vac_deficit = 1.0 - out.squaredNorm();
  const double edge_weight = std::pow(std::tanh(gain), 2 * d);
  CHECK(vac_deficit == doctest::Approx(edge_weight).epsilon(0.05));
  CHECK(vac_deficit <= 1e-10);
  // heavy squeezing at a tiny cutoff loses too much norm
  CHECK_THROWS_AS(squeeze_unitary(2.0, 0.0, 4), TruncationError);
}

TEST_CASE("beamsplitter unitary") {
  const int d = 5;
  CHECK((bs_unitary(1.0, d) - Matrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() ==
        0.0);

  const std::complex<double> amp = std::polar(0.6, 0.3);
  const auto op = bs_unitary(amp, d);
  CHECK(unitarity_defect(op, d) <= 1e-10);
  // exactly number conserving: no matrix element changes the total
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int mm = 0; mm < d; ++mm)
        for (int nn = 0; nn < d; ++nn)
          if (m + n != mm + nn) CHECK(std::abs(op(m * d + n, mm * d + nn)) <= 1e-14);
  // single-photon sector realizes the 2x2 mode map up to convention phases
  Vector one = Vector::Zero(d * d);
  one(1 * d + 0) = 1.0;  // |1 0>
  const Vector mapped = op * one;
  CHECK(std::abs(mapped(1 * d + 0)) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(std::abs(mapped(0 * d + 1)) == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("state plumbing and resource guards") {
  CHECK_THROWS_AS(vacuum_state(3), RangeError);
  CHECK_THROWS_AS(vacuum_state(11), ResourceError);
  auto state = vacuum_state(4);
  CHECK(state.amplitudes.size() == 1024);
  CHECK(state.norm_deficit() == doctest::Approx(0.0));
  for (int m = 0; m < kNumModes; ++m) CHECK(mean_photon(state, m) == 0.0);

  // phases leave occupation alone
  apply_phase(state, kBi, 1.3);
  CHECK(state.amplitudes(0) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("simulate: zero gain is vacuum") {
  const auto report = simulate(setup_params(0.0, 0.7, 1.0), 4);
  CHECK(report.vacuum);
  CHECK(report.n_s1 == 0.0);
  CHECK(report.n_s2 == 0.0);
  CHECK(report.n_detected == 0.0);
  CHECK(!report.g13.has_value());
  CHECK(!report.g12.has_value());
  CHECK(report.norm_deficit == doctest::Approx(0.0));
}

TEST_CASE("simulate agrees with the closed form at G = 0.2, d = 8") {
  const double gain = 0.2;
  const double v2 = std::sinh(gain) * std::sinh(gain);
  const auto report = simulate(setup_params(gain, 0.5, 1.0), 8);
  CHECK(report.norm_deficit <= 1e-9);
  CHECK(std::abs(*report.g13 - cf::g13_full(0.5, v2)) <= 1e-4);
  CHECK(std::abs(*report.g23 - cf::g23_full(0.5, v2)) <= 1e-4);
  CHECK(std::abs(report.n_s1 - v2) <= 1e-8);
  const auto singles = cf::singles_rates(0.5, v2);
  CHECK(std::abs(report.n_s2 - singles.n_s2) <= 1e-8);
  CHECK(std::abs(report.n_detected - singles.n_i3) <= 1e-8);
}

TEST_CASE("oracle-engine agreement across t and gamma") {
  for (double t : {0.0, 0.5, 1.0})
    for (double gamma : {1.0, 0.855}) {
      const auto p = setup_params(0.2, t, gamma);
      const auto report = simulate(p, 8);
      const auto state = ge::build_setup(p);
      const auto det = ge::detected_idler_modes();
      const double tol = std::max(1e-4, 10.0 * report.norm_deficit);
      CHECK(std::abs(report.n_s1 - ge::mean_photon(state, ge::kS1)) <= tol);
      CHECK(std::abs(report.n_s2 - ge::mean_photon(state, ge::kS2)) <= tol);
      CHECK(std::abs(report.n_detected - (ge::mean_photon(state, ge::kV3) +
                                          ge::mean_photon(state, ge::kW3))) <= tol);
      CHECK(std::abs(*report.g13 - ge::g2_detected(state, ge::kS1, det)) <= tol);
      CHECK(std::abs(*report.g23 - ge::g2_detected(state, ge::kS2, det)) <= tol);
      CHECK(std::abs(*report.g12 - ge::g1(state, ge::kS1, ge::kS2)) <= tol);
    }
}

TEST_CASE("cutoff convergence is monotone") {
  const double gain = 0.2;
  const double v2 = std::sinh(gain) * std::sinh(gain);
  const double reference = cf::g13_full(0.5, v2);
  double prev_gap = 1e9;
  double prev_deficit = 1e9;
  for (int d = 4; d <= 10; ++d) {
    const auto report = simulate(setup_params(gain, 0.5, 1.0), d);
    const double gap = std::abs(*report.g13 - reference);
    CHECK(gap <= prev_gap);
    CHECK(report.norm_deficit <= prev_deficit);
    prev_gap = gap;
    prev_deficit = report.norm_deficit;
  }
  CHECK(prev_gap <= 1e-4);
}

TEST_CASE("simulate raises TruncationError when the cutoff is too small") {
  CHECK_THROWS_AS(simulate(setup_params(0.9, 0.5, 1.0), 4), TruncationError);
}

TEST_CASE("fringe visibility reproduces the overlap calibration") {
  const auto report = simulate(setup_params(0.05, 1.0, 0.855), 6);
  CHECK(std::abs(*report.visibility - 0.855) <= 1e-3);
}

TEST_CASE("phase invariance of oracle magnitudes") {
  auto p = setup_params(0.2, 0.6, 0.9);
  const auto plain = simulate(p, 6);
  p.phi_p1 = 0.4;
  p.phi_p2 = 1.7;
  p.phi_s1 = 0.2;
  p.phi_s2 = 2.0;
  p.phi_i1 = 0.8;
  p.phi_i3 = 1.1;
  p.t_phase = 0.3;
  p.k_s = 7.76e6;
  p.k_i = 4.05e6;
  const auto phased = simulate(p, 6);
  CHECK(*phased.g13 == doctest::Approx(*plain.g13).epsilon(1e-10));
  CHECK(*phased.g23 == doctest::Approx(*plain.g23).epsilon(1e-10));
  CHECK(*phased.g12 == doctest::Approx(*plain.g12).epsilon(1e-10));
  CHECK(phased.n_s2 == doctest::Approx(plain.n_s2).epsilon(1e-10));
}

TEST_CASE("low-gain amplitude extraction") {
  {
    const auto report = low_gain_amplitudes(setup_params(0.05, 1.0, 1.0), 4);
    CHECK(report.ratio_i2 == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(report.ratio_v3 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(report.ratio_w3 == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(report.distinguishability <= 2e-3);
  }
  {
    const auto report = low_gain_amplitudes(setup_params(0.05, 0.0, 0.7), 4);
    CHECK(report.ratio_i2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(report.ratio_v3 == doctest::Approx(0.0));
    CHECK(report.distinguishability == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    // branch ratios (r : t gamma : t sqrt(1-gamma^2)) to O(G^2)
    const double t = 0.6, gamma = 0.855, gain = 0.05;
    const auto report = low_gain_amplitudes(setup_params(gain, t, gamma), 4);
    const double r = std::sqrt(1.0 - t * t);
    CHECK(report.ratio_i2 == doctest::Approx(r).epsilon(3.0 * gain * gain));
    CHECK(report.ratio_v3 == doctest::Approx(t * gamma).epsilon(3.0 * gain * gain));
    CHECK(report.ratio_w3 ==
          doctest::Approx(t * std::sqrt(1.0 - gamma * gamma)).epsilon(3.0 * gain * gain));
    CHECK(report.overlap_mag == doctest::Approx(gamma * t).epsilon(3.0 * gain * gain));
    // D = sqrt(1 - 0.855^2 * 0.36) = 0.8583886066345475
    CHECK(std::abs(report.distinguishability - 0.8583886066345475) <= 3e-3);
  }
  CHECK_THROWS_AS(low_gain_amplitudes(setup_params(0.3, 0.5, 1.0), 6), RangeError);
  CHECK_THROWS_AS(low_gain_amplitudes(setup_params(0.0, 0.5, 1.0), 4), ZeroGainError);
}
