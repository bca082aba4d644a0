#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "icsim/params.hpp"

namespace icsim::counting {

/// Which signal arm the polarizer selects.
enum class Arm { kS1, kS2 };

std::string arm_name(Arm arm);

enum class EventSource : std::uint8_t { kNlc1Pair, kNlc2Pair, kBackground };

struct Event {
  double time = 0.0;  // s, within [0, duration)
  EventSource source = EventSource::kBackground;
};

/// Detector-tagged arrival times, sorted ascending.
using EventStream = std::vector<Event>;

struct StreamPair {
  EventStream signal;
  EventStream idler;
};

/// Pair rate implied by the configured gain: |V|^2 photons per coherence
/// time, i.e. v2 / T_c pairs per second.
double pair_rate(const ExperimentParams& params, const DetectionParams& det);

/// Event-level model of one counting run of the given duration.  Pairs are
/// Poisson at pair_rate(); an NLC1 idler reaches the detector with
/// probability t^2 eta_i, the selected signal with eta_s; detected idlers
/// jitter around their partner signal by a Gaussian of RMS T_c; background
/// singles ride on top at the configured rates.  Only detected events are
/// materialized (Poisson thinning).  Throws RegimeError if v2 > 1e-2.
StreamPair generate_streams(const ExperimentParams& params, const DetectionParams& det,
                            Arm arm, std::uint64_t seed, double duration);

/// Each signal event opens one gate [t + gate_delay, t + gate_delay + T_R);
/// an idler inside an open gate is a coincidence, at most one per gate.
std::size_t gated_coincidences(const EventStream& signal, const EventStream& idler,
                               const DetectionParams& det, double gate_delay);

/// Gate delay centering the gate on the partner-idler arrivals.
double matched_gate_delay(const DetectionParams& det);

struct CoincidenceHistogram {
  std::vector<double> tau_bins;  // gate delays, s
  std::vector<double> counts;    // raw coincidence counts per bin
  std::vector<double> errors;    // sqrt(counts)
  double duration = 0.0;         // total integrated time, s (all trials)
  double rate_m = 0.0;           // measured signal stream rate, Hz
  double rate_n = 0.0;           // measured idler stream rate, Hz
  Arm arm = Arm::kS1;
  double t_mag = 0.0;
  std::uint64_t seed = 0;

  double rate_hz(std::size_t bin) const { return counts[bin] / duration; }
  double rate_err_hz(std::size_t bin) const { return errors[bin] / duration; }
};

/// Coincidence counts across gate delays, aggregated over n_trials
/// independent runs of det.integration_time each.  Long runs are generated
/// in bounded slices; trial t, slice s uses the child seed
/// derive_seed(det.rng_seed, t, s), so histograms are reproducible.
CoincidenceHistogram delay_scan(const ExperimentParams& params, const DetectionParams& det,
                                Arm arm, const std::vector<double>& gate_delays,
                                int n_trials = 1);

struct GammaEstimate {
  double gamma_mn = 0.0;
  double std_error = 0.0;
};

/// Inverts the rate model at the bin nearest at_delay:
/// Gamma = (T_R / T_c) (R / (R_m R_n T_R) - 1), with Poisson error
/// propagated from the bin counts.  Uses the measured stream rates carried
/// by the histogram.  Throws InsufficientCounts when the relative error of
/// the estimate exceeds max_rel_error.
GammaEstimate estimate_big_gamma(const CoincidenceHistogram& hist,
                                 const DetectionParams& det, double at_delay,
                                 double max_rel_error = 1e9);

}  // namespace icsim::counting
