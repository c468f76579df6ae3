#pragma once

// Receive beamformers: conventional carrier phase shift, and baseband true
// time delay (integer + fractional FIR) followed by the same phase shift.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "squint/array_model.hpp"
#include "squint/delay_filters.hpp"
#include "squint/errors.hpp"

namespace squint {

enum class Variant { PhaseOnly, TrueTimeDelay };

inline const char* to_string(Variant v) { return v == Variant::PhaseOnly ? "phase" : "ttd"; }

struct BeamformerSpec {
  Variant variant = Variant::PhaseOnly;
  double steering_deg = 0.0;
  double delta_samples = 0.0;  // per-element incremental baseband delay (TTD only)
  int frac_order = kDefaultFracOrder;
  int bulk_offset = kDefaultBulkOffset;

  static BeamformerSpec phase_only(double steering_deg) { return {Variant::PhaseOnly, steering_deg}; }
  static BeamformerSpec ttd(double steering_deg, double delta_samples, int frac_order = kDefaultFracOrder,
                            int bulk_offset = kDefaultBulkOffset) {
    return {Variant::TrueTimeDelay, steering_deg, delta_samples, frac_order, bulk_offset};
  }

  void validate(const ArrayConfig& config) const {
    check_angle(steering_deg);
    if (variant == Variant::PhaseOnly) return;
    const double bound = config.max_element_delay_samples();
    if (!(std::abs(delta_samples) <= bound * (1.0 + 1e-12)))
      throw ArgumentError("delta_samples " + std::to_string(delta_samples) + " outside +/- f_s*d/c = " +
                          std::to_string(bound));
  }

  /// Leading samples dropped before measuring power (FIR transient).
  std::size_t transient_samples() const {
    return variant == Variant::PhaseOnly ? 0 : static_cast<std::size_t>(frac_order + kIntegerFilterTaps);
  }
};

struct CombinedOutput {
  std::vector<cplx> samples;
  double power = 0.0;  // mean |y|^2 over the steady-state window
};

/// w_n = exp(+j 2pi f_c tau_n(theta)), unit magnitude.
inline std::vector<cplx> phase_weights(const ArrayConfig& config, double steering_deg) {
  config.validate();
  check_angle(steering_deg);
  std::vector<cplx> w(static_cast<std::size_t>(config.num_elements));
  for (int n = 1; n <= config.num_elements; ++n)
    w[static_cast<std::size_t>(n - 1)] = std::polar(1.0, kTwoPi * config.carrier_hz * element_delay(config, n, steering_deg));
  return w;
}

/// Delay filters realizing element n's baseband delay of -(n-1)*delta samples
/// (plus the common bulk offset), so delta = f_s d sin(theta)/c re-aligns the
/// envelopes of a wave from theta.
struct ElementDelayPlan {
  DelayDecomposition decomp;
  IntegerDelayFilter integer;
  FractionalDelayFilter fractional;
};

inline std::vector<ElementDelayPlan> plan_element_delays(const ArrayConfig& config, const BeamformerSpec& spec) {
  std::vector<ElementDelayPlan> plan;
  plan.reserve(static_cast<std::size_t>(config.num_elements));
  for (int n = 1; n <= config.num_elements; ++n) {
    const auto decomp = decompose_delay(-(n - 1) * spec.delta_samples, spec.bulk_offset);
    plan.push_back({decomp, make_integer_filter(decomp.integer_part), design_fractional(decomp.fraction_part, spec.frac_order)});
  }
  return plan;
}

inline double steady_state_power(std::span<const cplx> samples, std::size_t skip) {
  if (skip >= samples.size())
    throw ArgumentError("signal of " + std::to_string(samples.size()) + " samples is shorter than the " +
                        std::to_string(skip) + "-sample filter transient");
  double acc = 0.0;
  for (std::size_t k = skip; k < samples.size(); ++k) acc += std::norm(samples[k]);
  return acc / static_cast<double>(samples.size() - skip);
}

inline void check_rows(const ElementSignals& signals, const ArrayConfig& config) {
  if (signals.rows() != static_cast<std::size_t>(config.num_elements))
    throw ArgumentError("signal has " + std::to_string(signals.rows()) + " rows but the array has " +
                        std::to_string(config.num_elements) + " elements");
}

inline CombinedOutput combine_phase_only(const ElementSignals& signals, const ArrayConfig& config,
                                         double steering_deg) {
  check_rows(signals, config);
  const auto w = phase_weights(config, steering_deg);
  CombinedOutput out;
  out.samples.assign(signals.cols(), cplx{});
  for (std::size_t n = 0; n < signals.rows(); ++n) {
    const auto row = signals.row(n);
    for (std::size_t k = 0; k < row.size(); ++k) out.samples[k] += w[n] * row[k];
  }
  out.power = steady_state_power(out.samples, 0);
  return out;
}

inline CombinedOutput combine_ttd(const ElementSignals& signals, const ArrayConfig& config,
                                  const BeamformerSpec& spec) {
  check_rows(signals, config);
  spec.validate(config);
  const auto w = phase_weights(config, spec.steering_deg);
  const auto plan = plan_element_delays(config, spec);
  CombinedOutput out;
  out.samples.assign(signals.cols(), cplx{});
  for (std::size_t n = 0; n < signals.rows(); ++n) {
    const auto delayed = apply_delay(signals.row(n), plan[n].decomp, plan[n].fractional);
    for (std::size_t k = 0; k < delayed.size(); ++k) out.samples[k] += w[n] * delayed[k];
  }
  out.power = steady_state_power(out.samples, spec.transient_samples());
  return out;
}

inline CombinedOutput combine(const ElementSignals& signals, const ArrayConfig& config, const BeamformerSpec& spec) {
  if (spec.variant == Variant::PhaseOnly) return combine_phase_only(signals, config, spec.steering_deg);
  return combine_ttd(signals, config, spec);
}

/// Complex steady-state gain g_n that element n applies to a tone at
/// `baseband_hz`: the phase weight times the delay filters' frequency response.
/// A tone through an FIR settles to exactly tone * H(f), so the combined output
/// for any incidence is sum_n g_n x_n[k].
inline std::vector<cplx> element_gains(const ArrayConfig& config, const BeamformerSpec& spec, double baseband_hz) {
  spec.validate(config);
  auto g = phase_weights(config, spec.steering_deg);
  if (spec.variant == Variant::PhaseOnly) return g;
  const double nu = baseband_hz / config.sample_rate_hz;
  const auto plan = plan_element_delays(config, spec);
  for (std::size_t n = 0; n < g.size(); ++n)
    g[n] *= frequency_response(plan[n].integer.taps, nu) * frequency_response(plan[n].fractional.taps, nu);
  return g;
}

/// |sum_n g_n exp(-j 2pi f (n-1) d u / c)|^2 at direction cosine u = sin(phi).
/// u outside [-1, 1] evaluates the array factor in invisible space.
inline double array_power(const ArrayConfig& config, std::span<const cplx> gains, double center_hz,
                          double direction_cosine) {
  const double step = -kTwoPi * center_hz * config.spacing_m * direction_cosine / config.light_speed_m_s;
  const cplx rot = std::polar(1.0, step);
  cplx phasor{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (std::size_t n = 0; n < gains.size(); ++n) {
    acc += gains[n] * phasor;
    phasor *= rot;
  }
  return std::norm(acc);
}

}  // namespace squint
