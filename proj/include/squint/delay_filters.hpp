#pragma once

// Baseband true-time-delay filters: a fixed 30-tap integer shift and a
// Blackman-windowed-sinc fractional delay, plus a tone phase-delay meter.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "squint/array_model.hpp"
#include "squint/errors.hpp"

namespace squint {

inline constexpr int kIntegerFilterTaps = 30;
inline constexpr int kDefaultFracOrder = 62;
inline constexpr int kDefaultBulkOffset = 8;

/// Shifted unit impulse: taps[delay_samples] == 1, every other tap 0.
struct IntegerDelayFilter {
  std::vector<double> taps;
  int delay_samples = 0;
};

struct FractionalDelayFilter {
  std::vector<double> taps;
  int order = 0;
  double nominal_fraction = 0.0;
  int bulk_delay_samples = 0;  // order / 2
};

/// Split of a delay in samples: total_samples == integer_part + fraction_part.
struct DelayDecomposition {
  double total_samples = 0.0;
  int integer_part = 0;
  double fraction_part = 0.0;
};

inline IntegerDelayFilter make_integer_filter(int delay_samples) {
  if (delay_samples < 0 || delay_samples >= kIntegerFilterTaps)
    throw CapacityError("integer delay " + std::to_string(delay_samples) + " exceeds the " +
                        std::to_string(kIntegerFilterTaps) + "-tap filter capacity");
  IntegerDelayFilter f;
  f.taps.assign(kIntegerFilterTaps, 0.0);
  f.taps[static_cast<std::size_t>(delay_samples)] = 1.0;
  f.delay_samples = delay_samples;
  return f;
}

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// h[m] = w[m] sinc(m - order/2 - fraction), w = Blackman over [0, order],
/// normalized to unity DC gain.
inline FractionalDelayFilter design_fractional(double fraction, int order = kDefaultFracOrder) {
  if (order < 8 || order % 2 != 0)
    throw ArgumentError("fractional filter order must be even and >= 8, got " + std::to_string(order));
  if (!(fraction >= -0.5 && fraction <= 0.5))
    throw ArgumentError("fraction must lie in [-0.5, 0.5], got " + std::to_string(fraction));

  FractionalDelayFilter f;
  f.order = order;
  f.nominal_fraction = fraction;
  f.bulk_delay_samples = order / 2;
  f.taps.resize(static_cast<std::size_t>(order) + 1);

  const double centre = order / 2.0 + fraction;
  double sum = 0.0;
  for (int m = 0; m <= order; ++m) {
    const double a = kTwoPi * m / order;
    const double window = 0.42 - 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
    const double h = window * sinc(m - centre);
    f.taps[static_cast<std::size_t>(m)] = h;
    sum += h;
  }
  for (auto& h : f.taps) h /= sum;
  return f;
}

/// Shifts `total_samples` by the common `bulk_offset` and rounds to the nearest
/// integer; the remainder in [-0.5, 0.5] goes to the fractional filter.
inline DelayDecomposition decompose_delay(double total_samples, int bulk_offset = kDefaultBulkOffset) {
  const double shifted = total_samples + bulk_offset;
  const double rounded = std::round(shifted);
  if (!(rounded >= 0.0 && rounded < kIntegerFilterTaps))
    throw CapacityError("delay of " + std::to_string(shifted) + " samples (after bulk offset) exceeds the " +
                        std::to_string(kIntegerFilterTaps) + "-tap integer filter");
  DelayDecomposition d;
  d.total_samples = shifted;
  d.integer_part = static_cast<int>(rounded);
  d.fraction_part = shifted - rounded;
  return d;
}

/// Causal FIR, output truncated to the input length (zero initial state).
template <typename Sample>
std::vector<Sample> fir_filter(std::span<const Sample> input, std::span<const double> taps) {
  std::vector<Sample> out(input.size(), Sample{});
  for (std::size_t k = 0; k < input.size(); ++k) {
    Sample acc{};
    const std::size_t span_len = std::min(taps.size(), k + 1);
    for (std::size_t m = 0; m < span_len; ++m) acc += taps[m] * input[k - m];
    out[k] = acc;
  }
  return out;
}

/// Integer shift followed by the fractional filter. Effective delay is
/// integer_part + fraction_part + bulk_delay_samples.
inline std::vector<cplx> apply_delay(std::span<const cplx> signal, const DelayDecomposition& decomp,
                                     const FractionalDelayFilter& frac_filter) {
  if (std::abs(frac_filter.nominal_fraction - decomp.fraction_part) > 1e-12)
    throw ArgumentError("fractional filter was designed for " + std::to_string(frac_filter.nominal_fraction) +
                        " samples but the decomposition needs " + std::to_string(decomp.fraction_part));
  const auto shift = make_integer_filter(decomp.integer_part);
  const auto shifted = fir_filter<cplx>(signal, shift.taps);
  return fir_filter<cplx>(shifted, frac_filter.taps);
}

/// DTFT of a real tap set at `normalized_freq` cycles/sample.
inline cplx frequency_response(std::span<const double> taps, double normalized_freq) {
  cplx acc{0.0, 0.0};
  for (std::size_t m = 0; m < taps.size(); ++m)
    acc += taps[m] * std::polar(1.0, -kTwoPi * normalized_freq * static_cast<double>(m));
  return acc;
}

/// Group delay at DC (tap centroid), in samples.
inline double dc_group_delay(std::span<const double> taps) {
  double moment = 0.0;
  double sum = 0.0;
  for (std::size_t m = 0; m < taps.size(); ++m) {
    moment += static_cast<double>(m) * taps[m];
    sum += taps[m];
  }
  return moment / sum;
}

struct PhaseDelayOptions {
  std::size_t skip_leading = 0;   // transient samples to ignore
  double nominal_samples = 0.0;   // resolves the 2*pi ambiguity of a single tone
};

/// Steady-state delay of `filtered` relative to `reference` for a single tone:
/// -dphase / (2 pi tone_hz) * f_s, with the phase unwrapped around `nominal_samples`.
inline double measure_phase_delay(std::span<const cplx> filtered, std::span<const cplx> reference, double tone_hz,
                                  double sample_rate_hz, const PhaseDelayOptions& opts = {}) {
  if (tone_hz == 0.0) throw DomainError("phase delay is undefined for a DC tone");
  if (filtered.size() != reference.size()) throw ArgumentError("streams must have equal length");
  if (opts.skip_leading >= filtered.size()) throw ArgumentError("no steady-state samples left after skip");

  cplx corr{0.0, 0.0};
  for (std::size_t k = opts.skip_leading; k < filtered.size(); ++k) corr += filtered[k] * std::conj(reference[k]);

  const double omega = kTwoPi * tone_hz / sample_rate_hz;  // rad per sample
  // Remove the nominal rotation first so the residual lies in (-pi, pi].
  const double residual = std::arg(corr * std::polar(1.0, omega * opts.nominal_samples));
  return opts.nominal_samples - residual / omega;
}

}  // namespace squint
