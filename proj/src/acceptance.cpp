#include "icsim/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "icsim/closed_form.hpp"
#include "icsim/counting.hpp"
#include "icsim/fock.hpp"
#include "icsim/gaussian.hpp"
#include "icsim/params.hpp"
#include "icsim/rng.hpp"

namespace icsim::acceptance {

namespace cf = icsim::closed_form;
namespace ge = icsim::gaussian;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 20240817ULL;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::vector<double> t_grid_51() {
  std::vector<double> grid(51);
  for (int i = 0; i <= 50; ++i) grid[i] = static_cast<double>(i) / 50.0;
  return grid;
}

std::vector<double> v2_grid_50() {
  std::vector<double> grid(50);
  for (int j = 0; j < 50; ++j)
    grid[j] = std::pow(10.0, -4.0 + 5.0 * static_cast<double>(j) / 49.0);
  return grid;
}

CriterionResult timed(int id, const std::string& name,
                      const std::function<std::pair<bool, std::string>()>& body) {
  CriterionResult result;
  result.id = id;
  result.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    auto [passed, detail] = body();
    result.passed = passed;
    result.detail = std::move(detail);
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

ge::MomentState engine_setup(double gain, double t_mag, double gamma_mag) {
  ExperimentParams p;
  p.gain = gain;
  p.t_mag = t_mag;
  p.gamma_mag = gamma_mag;
  return ge::build_setup(p);
}

struct EngineColumns {
  double n_s1, n_s2, n_det, g13, g23, g12;
};

EngineColumns engine_columns(const ge::MomentState& state) {
  const auto det = ge::detected_idler_modes();
  EngineColumns c{};
  c.n_s1 = ge::mean_photon(state, ge::kS1);
  c.n_s2 = ge::mean_photon(state, ge::kS2);
  c.n_det = ge::mean_photon(state, ge::kV3) + ge::mean_photon(state, ge::kW3);
  c.g13 = ge::g2_detected(state, ge::kS1, det);
  c.g23 = ge::g2_detected(state, ge::kS2, det);
  c.g12 = ge::g1(state, ge::kS1, ge::kS2);
  return c;
}

}  // namespace

CriterionResult complementarity_identity() {
  return timed(1, "complementarity identity D^2 + g12^2 = 1 (all gains)", [] {
    double worst = 0.0;
    for (double t : t_grid_51())
      for (double v2 : v2_grid_50())
        worst = std::max(worst, std::abs(cf::complementarity_residual(t, v2)));
    return std::make_pair(worst <= 1e-12,
                          "max |D^2+g12^2-1| = " + fmt(worst) + " (tol 1e-12)");
  });
}

CriterionResult distinguishability_routes() {
  return timed(2, "D from g2 pair equals closed-form D at all gains", [] {
    double worst = 0.0;
    for (double t : t_grid_51())
      for (double v2 : v2_grid_50()) {
        const double from_g2 = cf::dist_from_g2(cf::g2_pair_full(t, v2));
        worst = std::max(worst, std::abs(from_g2 - cf::dist_highgain(t, v2)));
      }
    return std::make_pair(worst <= 1e-12, "max |D_g2 - D| = " + fmt(worst) + " (tol 1e-12)");
  });
}

CriterionResult low_gain_agreement() {
  return timed(3, "low-gain D from g2 equals sqrt(1-t^2)", [] {
    const double v2 = 1e-4;
    double worst = 0.0;
    for (double t : t_grid_51()) {
      const double from_g2 = cf::dist_from_g2(cf::g13_low(t, v2), cf::g23_low(t, v2));
      worst = std::max(worst, std::abs(from_g2 - std::sqrt(1.0 - t * t)));
    }
    return std::make_pair(worst <= 5e-4, "max diff = " + fmt(worst) + " (tol 5e-4)");
  });
}

CriterionResult engine_vs_closed_form() {
  return timed(4, "moment engine reproduces closed-form g2 and flux rates", [] {
    double worst = 0.0;
    for (double gain : {0.1, 0.5, 1.0, 1.5}) {
      const double s = std::sinh(gain);
      const double v2 = s * s;
      for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto state = engine_setup(gain, t, 1.0);
        const auto cols = engine_columns(state);
        const auto singles = cf::singles_rates(t, v2);
        worst = std::max({worst, rel_diff(cols.g13, cf::g13_full(t, v2)),
                          rel_diff(cols.g23, cf::g23_full(t, v2)),
                          rel_diff(cols.n_s1, singles.n_s1),
                          rel_diff(cols.n_s2, singles.n_s2),
                          rel_diff(cols.n_det, singles.n_i3)});
      }
    }
    return std::make_pair(worst <= 1e-10,
                          "max rel diff = " + fmt(worst) + " (tol 1e-10)");
  });
}

CriterionResult oracle_vs_engine() {
  return timed(5, "Fock oracle agrees with the moment engine and converges", [] {
    std::ostringstream detail;
    bool passed = true;

    double worst = 0.0;
    double worst_tol = 1e-4;
    for (double t : {0.0, 0.5, 1.0}) {
      for (double gamma : {1.0, 0.855}) {
        ExperimentParams p;
        p.gain = 0.2;
        p.t_mag = t;
        p.gamma_mag = gamma;
        const auto report = fock::simulate(p, 8);
        const auto cols = engine_columns(ge::build_setup(p));
        const double tol = std::max(1e-4, 10.0 * report.norm_deficit);
        worst_tol = std::max(worst_tol, tol);
        const double gap = std::max(
            {std::abs(report.n_s1 - cols.n_s1), std::abs(report.n_s2 - cols.n_s2),
             std::abs(report.n_detected - cols.n_det), std::abs(*report.g13 - cols.g13),
             std::abs(*report.g23 - cols.g23), std::abs(*report.g12 - cols.g12)});
        worst = std::max(worst, gap);
        if (gap > tol) passed = false;
      }
    }
    detail << "max |oracle-engine| = " << fmt(worst) << " (tol " << fmt(worst_tol) << ")";

    // Convergence in the cutoff at G = 0.2, t = 0.5, gamma = 1.
    ExperimentParams p;
    p.gain = 0.2;
    p.t_mag = 0.5;
    const double engine_g13 = engine_columns(ge::build_setup(p)).g13;
    double previous_gap = 0.0;
    bool monotone = true;
    double final_gap = 0.0;
    for (int cutoff = 4; cutoff <= 10; ++cutoff) {
      const auto report = fock::simulate(p, cutoff);
      final_gap = std::abs(*report.g13 - engine_g13);
      if (cutoff > 4 && final_gap > previous_gap) monotone = false;
      previous_gap = final_gap;
    }
    detail << "; g13 gap monotone over d=4..10: " << (monotone ? "yes" : "NO")
           << ", final gap = " << fmt(final_gap);
    if (!monotone || final_gap > 1e-4) passed = false;
    return std::make_pair(passed, detail.str());
  });
}

CriterionResult overlap_calibration() {
  return timed(6, "imperfect overlap: visibility 0.855 and D^2+V^2 = 1", [] {
    const double gamma = 0.855;
    const double gain = 0.05;

    const auto state_t1 = engine_setup(gain, 1.0, gamma);
    const double vis_t1 = ge::fringe_visibility(state_t1, ge::kS1, ge::kS2);
    bool passed = std::abs(vis_t1 - 0.855) <= 1e-3;
    double worst_sum = 0.0;
    double worst_d = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double t = static_cast<double>(i) / 20.0;
      const auto state = engine_setup(gain, t, gamma);
      const auto cols = engine_columns(state);
      const double d = cf::dist_from_g2_overlap(cols.g13, cols.g23, gamma);
      const double v = ge::fringe_visibility(state, ge::kS1, ge::kS2);
      worst_sum = std::max(worst_sum, std::abs(d * d + v * v - 1.0));
      worst_d = std::max(worst_d, std::abs(d - cf::dist_trace(t, gamma)));
    }
    if (worst_sum > 1e-3 || worst_d > 1e-3) passed = false;
    return std::make_pair(passed, "V(t=1) = " + fmt(vis_t1) +
                                      ", max |D^2+V^2-1| = " + fmt(worst_sum) +
                                      ", max |D - sqrt(1-g^2 t^2)| = " + fmt(worst_d) +
                                      " (tol 1e-3)");
  });
}

CriterionResult mc_rate_model() {
  return timed(7, "Monte Carlo reproduces the coincidence rate model", [] {
    std::ostringstream detail;
    bool passed = true;

    DetectionParams det;
    det.t_window = 2.5e-9;
    det.t_coherence = 580e-15;
    det.integration_time = 30.0;
    det.rng_seed = kAcceptanceSeed;
    const double matched = counting::matched_gate_delay(det);

    // (a) accidental floor: background-only streams at 2000 Hz each,
    // 100 seeds x 30 s.
    {
      ExperimentParams p;
      p.gain = 0.0;
      DetectionParams d = det;
      d.bg_rate_signal = 2000.0;
      d.bg_rate_idler = 2000.0;
      d.eta_signal = 0.0;
      d.eta_idler = 0.0;
      const auto hist = counting::delay_scan(p, d, counting::Arm::kS1, {matched}, 100);
      const double expected = 2000.0 * 2000.0 * det.t_window * hist.duration;
      const double sigma = std::sqrt(expected);
      const bool ok = std::abs(hist.counts[0] - expected) <= 3.0 * sigma;
      detail << "floor " << hist.counts[0] << " vs " << fmt(expected) << " +- "
             << fmt(sigma) << (ok ? "" : " FAIL");
      passed = passed && ok;
    }

    // Desk-scale pair configuration: detected signal singles 2000 Hz.
    const double pair = 10000.0 / 3.0;
    ExperimentParams pe;
    DetectionParams dd = det;
    dd.eta_signal = 0.6;
    dd.eta_idler = 0.25;
    pe.gain = std::asinh(std::sqrt(pair * det.t_coherence));
    const double v2 = validate(pe).v2;

    // (b) s2-arm peak flat in t, 100 seeds per point.
    {
      std::vector<double> rates, sigmas;
      const double t_points[] = {0.0, 0.25, 0.5, 0.75, 1.0};
      for (int i = 0; i < 5; ++i) {
        ExperimentParams p = pe;
        p.t_mag = t_points[i];
        DetectionParams d = dd;
        d.rng_seed = rng::derive_seed(kAcceptanceSeed, 23, i);
        const auto hist = counting::delay_scan(p, d, counting::Arm::kS2, {matched}, 100);
        rates.push_back(hist.rate_hz(0));
        sigmas.push_back(hist.rate_err_hz(0));
      }
      bool flat = true;
      for (std::size_t i = 0; i < rates.size(); ++i)
        for (std::size_t j = i + 1; j < rates.size(); ++j)
          if (std::abs(rates[i] - rates[j]) >
              3.0 * std::hypot(sigmas[i], sigmas[j]))
            flat = false;
      detail << "; s2 peaks [" << fmt(rates.front()) << ".." << fmt(rates.back())
             << "] flat: " << (flat ? "yes" : "NO");
      passed = passed && flat;
    }

    // (c) s1-arm peak ratio vs the T_c/(T_R v2) prediction, 100 seeds.
    {
      const auto scan_at = [&](double t, int salt) {
        ExperimentParams p = pe;
        p.t_mag = t;
        DetectionParams d = dd;
        d.rng_seed = rng::derive_seed(kAcceptanceSeed, 31, salt);
        return counting::delay_scan(p, d, counting::Arm::kS1, {matched}, 100);
      };
      const auto hist1 = scan_at(1.0, 0);
      const auto hist0 = scan_at(0.0, 1);
      const double predicted_ratio =
          cf::ratio_r13(det.t_coherence, det.t_window, v2);
      // Test the ratio through the low-count side: the t=0 peak should be
      // peak(t=1)/prediction within its own Poisson error.
      const double lambda0 = hist1.counts[0] / predicted_ratio;
      const bool ok = std::abs(hist0.counts[0] - lambda0) <= 3.0 * std::sqrt(lambda0);
      detail << "; ratio " << fmt(hist1.counts[0] / std::max(hist0.counts[0], 1.0))
             << " vs " << fmt(predicted_ratio) << (ok ? "" : " FAIL");
      passed = passed && ok;
    }

    // (c, absolute scale) pair rate from inverting the ratio approximation to
    // 22.5; idler efficiency and background pinned by the two peak readings
    // 112.5/s and 5/s; 10 seeds (peak sigma ~0.5% << the 10% tolerance).
    {
      const double v2_cal = det.t_coherence / (det.t_window * 22.5);
      const double pair_cal = v2_cal / det.t_coherence;
      ExperimentParams p;
      p.gain = std::asinh(std::sqrt(v2_cal));
      p.t_mag = 1.0;
      DetectionParams d = det;
      d.eta_signal = 2000.0 / pair_cal;
      const double detected_idler =
          107.5 / (2000.0 * det.t_window + d.eta_signal);  // pair-idler singles
      d.eta_idler = detected_idler / pair_cal;
      d.bg_rate_idler = 1e6 - detected_idler;
      d.rng_seed = rng::derive_seed(kAcceptanceSeed, 47, 0);
      const auto hist1 = counting::delay_scan(p, d, counting::Arm::kS1, {matched}, 10);
      p.t_mag = 0.0;
      d.rng_seed = rng::derive_seed(kAcceptanceSeed, 47, 1);
      const auto hist0 = counting::delay_scan(p, d, counting::Arm::kS1, {matched}, 10);
      const double peak1 = hist1.rate_hz(0);
      const double peak0 = hist0.rate_hz(0);
      const bool ok = std::abs(peak1 - 112.5) <= 0.1 * 112.5;
      detail << "; calibrated peaks " << fmt(peak1) << "/s and " << fmt(peak0)
             << "/s (targets 112.5, 5)" << (ok ? "" : " FAIL");
      passed = passed && ok;
    }
    return std::make_pair(passed, detail.str());
  });
}

CriterionResult mc_closed_loop() {
  return timed(8, "MC-estimated correlations recover the distinguishability", [] {
    const double gamma = 0.855;
    const double pair = 10000.0 / 3.0;
    ExperimentParams pe;
    pe.gain = std::asinh(std::sqrt(pair * 580e-15));
    pe.gamma_mag = gamma;
    DetectionParams det;
    det.integration_time = 30.0;
    det.eta_signal = 0.6;
    det.eta_idler = 0.25;
    const double matched = counting::matched_gate_delay(det);

    bool passed = true;
    double worst_pull = 0.0;
    for (int i = 0; i <= 5; ++i) {
      const double t = static_cast<double>(i) / 5.0;
      ExperimentParams p = pe;
      p.t_mag = t;
      DetectionParams d13 = det;
      d13.rng_seed = rng::derive_seed(kAcceptanceSeed, 61, i);
      const auto hist13 = counting::delay_scan(p, d13, counting::Arm::kS1, {matched}, 10);
      DetectionParams d23 = det;
      d23.rng_seed = rng::derive_seed(kAcceptanceSeed, 67, i);
      const auto hist23 = counting::delay_scan(p, d23, counting::Arm::kS2, {matched}, 10);

      const auto g13 = counting::estimate_big_gamma(hist13, det, matched);
      const auto g23 = counting::estimate_big_gamma(hist23, det, matched);
      const double d_hat =
          cf::dist_from_g2_overlap(1.0 + g13.gamma_mn, 1.0 + g23.gamma_mn, gamma);
      const double sigma_q =
          std::hypot(gamma * gamma / g23.gamma_mn * g13.std_error,
                     gamma * gamma * g13.gamma_mn / (g23.gamma_mn * g23.gamma_mn) *
                         g23.std_error);
      const double sigma_d = sigma_q / (2.0 * std::max(d_hat, 0.1));
      const double pull = std::abs(d_hat - cf::dist_trace(t, gamma)) / sigma_d;
      worst_pull = std::max(worst_pull, pull);
      if (pull > 3.0) passed = false;
    }
    return std::make_pair(passed, "worst |pull| = " + fmt(worst_pull) + " (limit 3)");
  });
}

CriterionResult fringe_identity() {
  return timed(9, "fringe-scan visibility equals sqrt(1-Delta^2) g12", [] {
    const auto state = engine_setup(1.0, 0.5, 1.0);
    const double n1 = ge::mean_photon(state, ge::kS1);
    const double n2 = ge::mean_photon(state, ge::kS2);
    const double target =
        cf::visibility_from_g1(n1, n2, ge::g1(state, ge::kS1, ge::kS2));
    const double scanned = ge::fringe_visibility(state, ge::kS1, ge::kS2);
    const double diff = std::abs(scanned - target);
    return std::make_pair(diff <= 1e-10, "diff = " + fmt(diff) + " (tol 1e-10)");
  });
}

std::vector<CriterionResult> run_all(bool quick) {
  std::vector<CriterionResult> results;
  results.push_back(complementarity_identity());
  results.push_back(distinguishability_routes());
  results.push_back(low_gain_agreement());
  results.push_back(engine_vs_closed_form());
  if (!quick) results.push_back(oracle_vs_engine());
  results.push_back(overlap_calibration());
  if (!quick) {
    results.push_back(mc_rate_model());
    results.push_back(mc_closed_loop());
  }
  results.push_back(fringe_identity());
  return results;
}

std::string format_results(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    char line[64];
    std::snprintf(line, sizeof(line), "[%s] criterion %d (%6.2fs) ",
                  r.passed ? "PASS" : "FAIL", r.id, r.seconds);
    out << line << r.name << ": " << r.detail << "\n";
  }
  return out.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace icsim::acceptance
