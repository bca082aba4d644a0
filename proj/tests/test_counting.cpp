#include <doctest.h>

#include <cmath>

#include "icsim/closed_form.hpp"
#include "icsim/counting.hpp"
#include "icsim/errors.hpp"

using namespace icsim;
using namespace icsim::counting;

namespace {

ExperimentParams pair_params(double pair_rate_hz, double t, const DetectionParams& det) {
  ExperimentParams p;
  p.gain = std::asinh(std::sqrt(pair_rate_hz * det.t_coherence));
  p.t_mag = t;
  return p;
}

DetectionParams desk_detection() {
  DetectionParams det;
  det.integration_time = 30.0;
  det.eta_signal = 0.6;
  det.eta_idler = 0.25;
  det.rng_seed = 321;
  return det;
}

}  // namespace

TEST_CASE("identical seeds give bit-identical streams and histograms") {
  const DetectionParams det = desk_detection();
  const ExperimentParams p = pair_params(3000.0, 0.7, det);
  const auto a = generate_streams(p, det, Arm::kS1, 99, 1.0);
  const auto b = generate_streams(p, det, Arm::kS1, 99, 1.0);
  REQUIRE(a.signal.size() == b.signal.size());
  REQUIRE(a.idler.size() == b.idler.size());
  for (std::size_t i = 0; i < a.signal.size(); ++i)
    CHECK(a.signal[i].time == b.signal[i].time);
  for (std::size_t i = 0; i < a.idler.size(); ++i)
    CHECK(a.idler[i].time == b.idler[i].time);

  const std::vector<double> delays{-2e-9, matched_gate_delay(det), 2e-9};
  const auto h1 = delay_scan(p, det, Arm::kS1, delays, 2);
  const auto h2 = delay_scan(p, det, Arm::kS1, delays, 2);
  CHECK(h1.counts == h2.counts);
  CHECK(h1.rate_m == h2.rate_m);

  DetectionParams other = det;
  other.rng_seed = 322;
  const auto h3 = delay_scan(p, other, Arm::kS1, delays, 2);
  CHECK(h1.counts != h3.counts);
}

TEST_CASE("streams are sorted, tagged and within the duration") {
  const DetectionParams det = desk_detection();
  const ExperimentParams p = pair_params(5000.0, 0.5, det);
  const auto streams = generate_streams(p, det, Arm::kS1, 7, 2.0);
  CHECK(!streams.signal.empty());
  for (std::size_t i = 1; i < streams.idler.size(); ++i)
    CHECK(streams.idler[i - 1].time <= streams.idler[i].time);
  for (const auto& e : streams.idler) {
    CHECK(e.time >= 0.0);
    CHECK(e.time < 2.0);
  }
}

TEST_CASE("blocked idler leaves only NLC2 and background events") {
  DetectionParams det = desk_detection();
  det.bg_rate_idler = 500.0;
  const ExperimentParams p = pair_params(4000.0, 0.0, det);
  const auto streams = generate_streams(p, det, Arm::kS1, 11, 5.0);
  bool saw_nlc2 = false;
  for (const auto& e : streams.idler) {
    CHECK(e.source != EventSource::kNlc1Pair);
    saw_nlc2 = saw_nlc2 || e.source == EventSource::kNlc2Pair;
  }
  CHECK(saw_nlc2);
}

TEST_CASE("zero efficiencies give empty detected streams") {
  DetectionParams det = desk_detection();
  det.eta_signal = 0.0;
  det.eta_idler = 0.0;
  const ExperimentParams p = pair_params(4000.0, 1.0, det);
  const auto streams = generate_streams(p, det, Arm::kS1, 3, 2.0);
  CHECK(streams.signal.empty());
  CHECK(streams.idler.empty());
}

TEST_CASE("event model refuses high gain") {
  DetectionParams det = desk_detection();
  ExperimentParams p;
  p.gain = std::asinh(std::sqrt(0.02));  // v2 = 0.02 > 1e-2
  CHECK_THROWS_AS(generate_streams(p, det, Arm::kS1, 1, 1.0), RegimeError);
}

TEST_CASE("gated coincidence logic on hand-built streams") {
  DetectionParams det = desk_detection();
  const double window = det.t_window;
  const double delay = matched_gate_delay(det);

  EventStream signal{{1.0, EventSource::kNlc1Pair}};
  EventStream empty;
  CHECK(gated_coincidences(signal, empty, det, delay) == 0);

  // perfectly aligned pair
  EventStream idler{{1.0, EventSource::kNlc1Pair}};
  CHECK(gated_coincidences(signal, idler, det, delay) == 1);
  // same pair misses when the gate is displaced by a full window
  CHECK(gated_coincidences(signal, idler, det, delay + 2.0 * window) == 0);

  // one count max per gate
  EventStream crowd{{1.0 - 0.2 * window, EventSource::kBackground},
                    {1.0, EventSource::kNlc1Pair},
                    {1.0 + 0.3 * window, EventSource::kBackground}};
  CHECK(gated_coincidences(signal, crowd, det, delay) == 1);

  // two gates, two idlers, two counts
  EventStream two_sig{{1.0, EventSource::kNlc1Pair}, {2.0, EventSource::kNlc1Pair}};
  EventStream two_idl{{1.0, EventSource::kNlc1Pair}, {2.0, EventSource::kNlc1Pair}};
  CHECK(gated_coincidences(two_sig, two_idl, det, delay) == 2);
}

TEST_CASE("accidental floor matches R_m R_n T_R") {
  DetectionParams det = desk_detection();
  det.bg_rate_signal = 2000.0;
  det.bg_rate_idler = 2000.0;
  det.eta_signal = 0.0;
  det.eta_idler = 0.0;
  det.rng_seed = 5150;
  ExperimentParams p;  // zero gain: background only
  const auto hist = delay_scan(p, det, Arm::kS1, {matched_gate_delay(det)}, 20);
  const double expected = 2000.0 * 2000.0 * det.t_window * hist.duration;
  CHECK(std::abs(hist.counts[0] - expected) <= 3.0 * std::sqrt(expected));
  // measured stream rates sit within 3 sigma of the configured 2000 Hz
  CHECK(std::abs(hist.rate_m - 2000.0) <= 3.0 * std::sqrt(2000.0 / hist.duration));
  CHECK(std::abs(hist.rate_n - 2000.0) <= 3.0 * std::sqrt(2000.0 / hist.duration));
}

TEST_CASE("pure accidentals give a zero big-Gamma estimate") {
  DetectionParams det = desk_detection();
  det.bg_rate_signal = 5000.0;
  det.bg_rate_idler = 5000.0;
  det.eta_signal = 0.0;
  det.eta_idler = 0.0;
  det.rng_seed = 777;
  ExperimentParams p;
  const double delay = matched_gate_delay(det);
  const auto hist = delay_scan(p, det, Arm::kS1, {delay}, 20);
  const auto est = estimate_big_gamma(hist, det, delay);
  CHECK(std::abs(est.gamma_mn) <= 3.0 * est.std_error);
  CHECK_THROWS_AS(estimate_big_gamma(hist, det, delay, 1e-3), InsufficientCounts);
}

TEST_CASE("injected correlation is recovered within 3 sigma") {
  const DetectionParams det = desk_detection();
  const double v2 = 10000.0 / 3.0 * det.t_coherence;
  for (double t : {0.4, 1.0}) {
    ExperimentParams p = pair_params(10000.0 / 3.0, t, det);
    const double delay = matched_gate_delay(det);
    const auto hist = delay_scan(p, det, Arm::kS1, {delay}, 4);
    const auto est = estimate_big_gamma(hist, det, delay);
    const double expected = closed_form::g13_low(t, v2) - 1.0;
    CHECK(std::abs(est.gamma_mn - expected) <= 3.0 * est.std_error);
  }
}

TEST_CASE("s2-arm coincidences do not depend on the transmission") {
  const DetectionParams det = desk_detection();
  const double delay = matched_gate_delay(det);
  std::vector<double> rates, errs;
  for (double t : {0.0, 1.0}) {
    DetectionParams d = det;
    d.rng_seed = 900 + static_cast<int>(t);
    const auto hist = delay_scan(pair_params(10000.0 / 3.0, t, d), d, Arm::kS2, {delay}, 4);
    rates.push_back(hist.rate_hz(0));
    errs.push_back(hist.rate_err_hz(0));
  }
  CHECK(std::abs(rates[0] - rates[1]) <= 3.0 * std::hypot(errs[0], errs[1]));
}

TEST_CASE("estimator error shrinks as one over sqrt(time)") {
  DetectionParams det = desk_detection();
  det.integration_time = 10.0;
  const ExperimentParams p = pair_params(10000.0 / 3.0, 0.8, det);
  const double delay = matched_gate_delay(det);
  const auto err_for = [&](int trials) {
    const auto hist = delay_scan(p, det, Arm::kS1, {delay}, trials);
    return estimate_big_gamma(hist, det, delay).std_error;
  };
  const double e1 = err_for(1);
  const double e4 = err_for(4);
  const double e16 = err_for(16);
  CHECK(e4 == doctest::Approx(e1 / 2.0).epsilon(0.25));
  CHECK(e16 == doctest::Approx(e1 / 4.0).epsilon(0.25));
}

TEST_CASE("delay scan shows a peak only at the matched delay") {
  const DetectionParams det = desk_detection();
  const ExperimentParams p = pair_params(10000.0 / 3.0, 1.0, det);
  const double matched = matched_gate_delay(det);
  const std::vector<double> delays{matched - 10.0 * det.t_window, matched,
                                   matched + 10.0 * det.t_window};
  const auto hist = delay_scan(p, det, Arm::kS1, delays, 2);
  CHECK(hist.counts[1] > 100.0);
  CHECK(hist.counts[0] <= 10.0);
  CHECK(hist.counts[2] <= 10.0);
  CHECK(hist.errors[1] == doctest::Approx(std::sqrt(hist.counts[1])));
  CHECK(hist.t_mag == 1.0);
  CHECK(hist.arm == Arm::kS1);
}
