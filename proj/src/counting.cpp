#include "icsim/counting.hpp"

#include <algorithm>
#include <cmath>

#include "icsim/errors.hpp"
#include "icsim/rng.hpp"

namespace icsim::counting {

namespace {

constexpr double kMaxEventModelV2 = 1e-2;
constexpr double kEventsPerSlice = 4e6;

void append_poisson(EventStream& stream, double rate, double duration,
                    EventSource source, rng::Sampler& sampler) {
  double t = sampler.exponential(rate);
  while (t < duration) {
    stream.push_back({t, source});
    t += sampler.exponential(rate);
  }
}

}  // namespace

std::string arm_name(Arm arm) { return arm == Arm::kS1 ? "s1" : "s2"; }

double pair_rate(const ExperimentParams& params, const DetectionParams& det) {
  return params.v2 / det.t_coherence;
}

StreamPair generate_streams(const ExperimentParams& raw_params,
                            const DetectionParams& raw_det, Arm arm, std::uint64_t seed,
                            double duration) {
  const ExperimentParams params = validate(raw_params);
  const DetectionParams det = validate(raw_det);
  if (params.v2 > kMaxEventModelV2)
    throw RegimeError("generate_streams: v2 = " + std::to_string(params.v2) +
                      " is outside the single-pair event model (v2 <= 1e-2)");
  if (!(duration > 0.0) || duration > det.integration_time)
    throw RangeError("duration", duration, "(0, integration_time]");

  const double pairs = pair_rate(params, det);
  const double t2 = params.t_mag * params.t_mag;
  // Detection probability of the partner idler, given the signal fired.
  const double partner_prob =
      (arm == Arm::kS1) ? t2 * det.eta_idler : det.eta_idler;
  // Idler detections whose partner signal is not in the selected stream.
  const EventSource own_source =
      (arm == Arm::kS1) ? EventSource::kNlc1Pair : EventSource::kNlc2Pair;
  const EventSource other_source =
      (arm == Arm::kS1) ? EventSource::kNlc2Pair : EventSource::kNlc1Pair;
  const double own_unpartnered = pairs * (1.0 - det.eta_signal) * partner_prob;
  const double other_unpartnered =
      (arm == Arm::kS1) ? pairs * det.eta_idler : pairs * t2 * det.eta_idler;

  rng::Sampler sampler(seed);
  StreamPair out;

  append_poisson(out.signal, pairs * det.eta_signal, duration, own_source, sampler);
  out.idler.reserve(out.signal.size() / 4);
  for (const Event& sig : out.signal) {
    if (sampler.bernoulli(partner_prob)) {
      const double t = sig.time + sampler.normal(det.t_coherence);
      if (t >= 0.0 && t < duration) out.idler.push_back({t, own_source});
    }
  }
  append_poisson(out.idler, own_unpartnered, duration, own_source, sampler);
  append_poisson(out.idler, other_unpartnered, duration, other_source, sampler);
  append_poisson(out.signal, det.bg_rate_signal, duration, EventSource::kBackground,
                 sampler);
  append_poisson(out.idler, det.bg_rate_idler, duration, EventSource::kBackground,
                 sampler);

  const auto by_time = [](const Event& a, const Event& b) { return a.time < b.time; };
  std::sort(out.signal.begin(), out.signal.end(), by_time);
  std::sort(out.idler.begin(), out.idler.end(), by_time);
  return out;
}

std::size_t gated_coincidences(const EventStream& signal, const EventStream& idler,
                               const DetectionParams& det, double gate_delay) {
  std::size_t count = 0;
  auto gate_start = idler.begin();
  for (const Event& sig : signal) {
    const double open = sig.time + gate_delay;
    gate_start = std::lower_bound(gate_start, idler.end(), open,
                                  [](const Event& e, double t) { return e.time < t; });
    if (gate_start != idler.end() && gate_start->time < open + det.t_window) ++count;
  }
  return count;
}

double matched_gate_delay(const DetectionParams& det) { return -det.t_window / 2.0; }

CoincidenceHistogram delay_scan(const ExperimentParams& params, const DetectionParams& det,
                                Arm arm, const std::vector<double>& gate_delays,
                                int n_trials) {
  if (gate_delays.empty()) throw DomainError("delay_scan: empty gate-delay grid");
  if (n_trials < 1) throw RangeError("n_trials", n_trials, "[1, ...]");

  const double pairs = pair_rate(validate(params), det);
  const double t2 = params.t_mag * params.t_mag;
  const double expected_rate = pairs * det.eta_signal + det.bg_rate_signal +
                               pairs * (1.0 + t2) * det.eta_idler + det.bg_rate_idler;
  const int n_slices = std::max(
      1, static_cast<int>(std::ceil(expected_rate * det.integration_time / kEventsPerSlice)));
  const double slice = det.integration_time / n_slices;

  CoincidenceHistogram hist;
  hist.tau_bins = gate_delays;
  hist.counts.assign(gate_delays.size(), 0.0);
  hist.errors.assign(gate_delays.size(), 0.0);
  hist.arm = arm;
  hist.t_mag = params.t_mag;
  hist.seed = det.rng_seed;
  hist.duration = static_cast<double>(n_trials) * det.integration_time;

  double signal_events = 0.0;
  double idler_events = 0.0;
  for (int trial = 0; trial < n_trials; ++trial) {
    for (int s = 0; s < n_slices; ++s) {
      const StreamPair streams = generate_streams(
          params, det, arm, rng::derive_seed(det.rng_seed, trial, s), slice);
      signal_events += static_cast<double>(streams.signal.size());
      idler_events += static_cast<double>(streams.idler.size());
      for (std::size_t bin = 0; bin < gate_delays.size(); ++bin)
        hist.counts[bin] += static_cast<double>(
            gated_coincidences(streams.signal, streams.idler, det, gate_delays[bin]));
    }
  }
  for (std::size_t bin = 0; bin < gate_delays.size(); ++bin)
    hist.errors[bin] = std::sqrt(hist.counts[bin]);
  hist.rate_m = signal_events / hist.duration;
  hist.rate_n = idler_events / hist.duration;
  return hist;
}

GammaEstimate estimate_big_gamma(const CoincidenceHistogram& hist,
                                 const DetectionParams& det, double at_delay,
                                 double max_rel_error) {
  if (hist.tau_bins.empty()) throw DomainError("estimate_big_gamma: empty histogram");
  std::size_t bin = 0;
  for (std::size_t i = 1; i < hist.tau_bins.size(); ++i)
    if (std::abs(hist.tau_bins[i] - at_delay) < std::abs(hist.tau_bins[bin] - at_delay))
      bin = i;

  const double accidental = hist.rate_m * hist.rate_n * det.t_window;
  if (!(accidental > 0.0))
    throw InsufficientCounts("estimate_big_gamma: zero accidental rate");
  const double window_ratio = det.t_window / det.t_coherence;
  const double rate = hist.counts[bin] / hist.duration;
  const double rate_err = std::sqrt(std::max(hist.counts[bin], 1.0)) / hist.duration;

  GammaEstimate est;
  est.gamma_mn = window_ratio * (rate / accidental - 1.0);
  est.std_error = window_ratio * rate_err / accidental;
  const double scale = std::max(std::abs(est.gamma_mn), 1e-300);
  if (est.std_error / scale > max_rel_error)
    throw InsufficientCounts("estimate_big_gamma: relative error " +
                             std::to_string(est.std_error / scale) + " exceeds cap " +
                             std::to_string(max_rel_error));
  return est;
}

}  // namespace icsim::counting
