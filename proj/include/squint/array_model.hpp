#pragma once

// Uniform linear array geometry, plane-wave propagation delays and synthesis of
// ideally down-converted element signals for single-tone sources.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "squint/errors.hpp"

namespace squint {

using cplx = std::complex<double>;

inline constexpr double kLightSpeed = 3.0e8;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Element spacing of half a carrier wavelength.
inline double half_wavelength(double carrier_hz, double light_speed = kLightSpeed) {
  return light_speed / (2.0 * carrier_hz);
}

/// ULA geometry, carrier and sampling. Defaults are the 16-element, 1 GHz,
/// 550 MHz design point with half-wavelength spacing.
struct ArrayConfig {
  int num_elements = 16;
  double carrier_hz = 1.0e9;
  double sample_rate_hz = 550.0e6;
  double spacing_m = half_wavelength(1.0e9);
  double light_speed_m_s = kLightSpeed;

  static ArrayConfig half_wavelength_ula(int num_elements, double carrier_hz, double sample_rate_hz) {
    ArrayConfig cfg;
    cfg.num_elements = num_elements;
    cfg.carrier_hz = carrier_hz;
    cfg.sample_rate_hz = sample_rate_hz;
    cfg.spacing_m = half_wavelength(carrier_hz, cfg.light_speed_m_s);
    cfg.validate();
    return cfg;
  }

  /// Largest per-element baseband delay, in samples: f_s * d / c.
  double max_element_delay_samples() const { return sample_rate_hz * spacing_m / light_speed_m_s; }

  void validate() const {
    if (num_elements < 2) throw ArgumentError("num_elements must be >= 2");
    if (!(carrier_hz > 0.0)) throw ArgumentError("carrier_hz must be > 0");
    if (!(sample_rate_hz > 0.0)) throw ArgumentError("sample_rate_hz must be > 0");
    if (!(spacing_m > 0.0)) throw ArgumentError("spacing_m must be > 0");
    if (!(light_speed_m_s > 0.0)) throw ArgumentError("light_speed_m_s must be > 0");
  }
};

/// Plane-wave complex tone at carrier + baseband_hz arriving from incidence_deg.
struct ToneSource {
  double incidence_deg = 0.0;
  double baseband_hz = 0.0;
};

inline void check_angle(double angle_deg) {
  if (!(angle_deg >= -90.0 && angle_deg <= 90.0))
    throw ArgumentError("angle must lie in [-90, 90] degrees, got " + std::to_string(angle_deg));
}

/// N x L matrix of complex baseband samples, one row per element.
class ElementSignals {
 public:
  ElementSignals(std::size_t rows, std::size_t cols, double sample_rate_hz)
      : rows_(rows), cols_(cols), sample_rate_hz_(sample_rate_hz), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw ArgumentError("ElementSignals needs at least one row and one column");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double sample_rate_hz() const { return sample_rate_hz_; }

  std::span<cplx> row(std::size_t n) { return {data_.data() + n * cols_, cols_}; }
  std::span<const cplx> row(std::size_t n) const { return {data_.data() + n * cols_, cols_}; }

  ElementSignals& operator+=(const ElementSignals& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) throw ArgumentError("ElementSignals shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }
  ElementSignals& operator*=(cplx scale) {
    for (auto& v : data_) v *= scale;
    return *this;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  double sample_rate_hz_;
  std::vector<cplx> data_;
};

/// Propagation delay between element 1 and element `element_index` (1-based):
/// tau_n = (n - 1) d sin(theta) / c.
inline double element_delay(const ArrayConfig& config, int element_index, double angle_deg) {
  if (element_index < 1 || element_index > config.num_elements)
    throw ArgumentError("element_index " + std::to_string(element_index) + " outside [1, " +
                        std::to_string(config.num_elements) + "]");
  check_angle(angle_deg);
  return (element_index - 1) * config.spacing_m * std::sin(deg_to_rad(angle_deg)) / config.light_speed_m_s;
}

/// Received tone after ideal down-conversion:
///   x_n[k] = exp(j2pi f_bb (k/f_s - tau_n)) * exp(-j2pi f_c tau_n).
inline ElementSignals synthesize_received(const ArrayConfig& config, const ToneSource& source,
                                          std::size_t num_samples = 4096) {
  config.validate();
  if (num_samples < 1) throw ArgumentError("num_samples must be >= 1");
  if (!(std::abs(source.baseband_hz) < config.sample_rate_hz / 2.0))
    throw ArgumentError("baseband tone violates complex-baseband Nyquist: |f_bb| must be < f_s/2");
  check_angle(source.incidence_deg);

  ElementSignals out(static_cast<std::size_t>(config.num_elements), num_samples, config.sample_rate_hz);
  const double bb_step = kTwoPi * source.baseband_hz / config.sample_rate_hz;
  for (int n = 1; n <= config.num_elements; ++n) {
    const double tau = element_delay(config, n, source.incidence_deg);
    const double static_phase = -kTwoPi * (config.carrier_hz + source.baseband_hz) * tau;
    auto row = out.row(static_cast<std::size_t>(n - 1));
    for (std::size_t k = 0; k < num_samples; ++k) {
      row[k] = std::polar(1.0, bb_step * static_cast<double>(k) + static_phase);
    }
  }
  return out;
}

}  // namespace squint
