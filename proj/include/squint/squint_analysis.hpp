#pragma once

// Beam patterns, steered-angle (beam peak) estimation, squint tables and the
// closed-form phase-only references they are checked against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "squint/array_model.hpp"
#include "squint/beamformers.hpp"
#include "squint/errors.hpp"
#include "squint/parallel.hpp"

namespace squint {

struct ScanSettings {
  double coarse_step_deg = 0.2;
  double refine_step_deg = 0.01;
  double refine_window_deg = 2.0;

  void validate() const {
    if (!(coarse_step_deg > 0.0)) throw ArgumentError("coarse_step_deg must be > 0");
    if (!(refine_step_deg > 0.0)) throw ArgumentError("refine_step_deg must be > 0");
    if (!(refine_window_deg >= refine_step_deg)) throw ArgumentError("refine_window_deg must be >= refine_step_deg");
  }
};

enum class PatternMethod {
  SteadyState,  // tone response through each element's filters (exact for a settled tone)
  TimeDomain,   // synthesize samples, run the FIRs, average power after the transient
};

struct BeamPattern {
  std::vector<double> scan_deg;
  std::vector<double> power_db;  // relative to the pattern maximum
  double steering_deg = 0.0;
  double baseband_hz = 0.0;
  BeamformerSpec beamformer;
};

struct SquintRow {
  double center_hz = 0.0;
  double steered_deg = 0.0;
  double squint_deg = 0.0;
};

/// Uniform grid from lo to hi inclusive; the last point is exactly hi.
inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ArgumentError("uniform_grid needs step > 0 and hi >= lo");
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9));
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i < intervals; ++i) grid[i] = lo + static_cast<double>(i) * step;
  grid[intervals] = hi;
  return grid;
}

inline std::vector<double> default_scan_grid(const ScanSettings& scan = {}) {
  return uniform_grid(-90.0, 90.0, scan.coarse_step_deg);
}

/// Baseband offsets +/-25 .. +/-250 MHz in 25 MHz steps, ascending.
inline std::vector<double> default_baseband_offsets() {
  std::vector<double> out;
  for (int k = -10; k <= 10; ++k)
    if (k != 0) out.push_back(k * 25.0e6);
  return out;
}

/// The 21 centre frequencies carrier - 250 MHz .. carrier + 250 MHz.
inline std::vector<double> default_center_frequencies(double carrier_hz) {
  std::vector<double> out;
  for (int k = -10; k <= 10; ++k) out.push_back(carrier_hz + k * 25.0e6);
  return out;
}

inline double to_db(double power) { return 10.0 * std::log10(std::max(power, 1e-300)); }

namespace detail {

/// Vertex abscissa of the parabola through three points.
inline double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double a = (x1 - x0) * (y1 - y2);
  const double b = (x1 - x2) * (y1 - y0);
  const double den = a - b;
  if (den == 0.0) return x1;
  return x1 - 0.5 * ((x1 - x0) * a - (x1 - x2) * b) / den;
}

/// Index of the maximum; exact ties go to the sample nearest `prefer`.
inline std::size_t argmax_nearest(std::span<const double> x, std::span<const double> y, double prefer) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if (y[i] > y[best] + 1e-9) {
      best = i;
    } else if (y[i] >= y[best] - 1e-9 && std::abs(x[i] - prefer) < std::abs(x[best] - prefer)) {
      best = i;
    }
  }
  return best;
}

/// Global maximum refined by a parabola through its neighbours; boundary maxima
/// are returned as-is.
inline double refined_peak(std::span<const double> x, std::span<const double> y, double prefer) {
  const std::size_t i = argmax_nearest(x, y, prefer);
  if (i == 0 || i + 1 == y.size()) return x[i];
  const double v = parabola_vertex(x[i - 1], y[i - 1], x[i], y[i], x[i + 1], y[i + 1]);
  return std::clamp(v, x[i - 1], x[i + 1]);
}

inline void check_scan_grid(std::span<const double> grid) {
  if (grid.size() < 2) throw ArgumentError("scan grid needs at least 2 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_angle(grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ArgumentError("scan grid must be strictly increasing");
  }
}

}  // namespace detail

/// Output power versus incidence angle for a fixed beamformer and tone,
/// normalized so the maximum is 0 dB.
inline BeamPattern beam_pattern(const ArrayConfig& config, const BeamformerSpec& spec, double baseband_hz,
                                std::span<const double> scan_grid, PatternMethod method = PatternMethod::SteadyState,
                                std::size_t num_samples = 4096) {
  config.validate();
  spec.validate(config);
  detail::check_scan_grid(scan_grid);

  BeamPattern pattern;
  pattern.scan_deg.assign(scan_grid.begin(), scan_grid.end());
  pattern.steering_deg = spec.steering_deg;
  pattern.baseband_hz = baseband_hz;
  pattern.beamformer = spec;

  std::vector<double> power(scan_grid.size());
  if (method == PatternMethod::SteadyState) {
    if (!(std::abs(baseband_hz) < config.sample_rate_hz / 2.0))
      throw ArgumentError("baseband tone violates complex-baseband Nyquist: |f_bb| must be < f_s/2");
    const auto gains = element_gains(config, spec, baseband_hz);
    const double f = config.carrier_hz + baseband_hz;
    for (std::size_t i = 0; i < scan_grid.size(); ++i)
      power[i] = array_power(config, gains, f, std::sin(deg_to_rad(scan_grid[i])));
  } else {
    for (std::size_t i = 0; i < scan_grid.size(); ++i) {
      const auto signals = synthesize_received(config, {scan_grid[i], baseband_hz}, num_samples);
      power[i] = combine(signals, config, spec).power;
    }
  }

  const double peak = *std::max_element(power.begin(), power.end());
  pattern.power_db.resize(power.size());
  for (std::size_t i = 0; i < power.size(); ++i) pattern.power_db[i] = to_db(power[i]) - to_db(peak);
  return pattern;
}

/// Angle of the pattern's global maximum, parabolically interpolated; a maximum
/// on the grid boundary returns that boundary angle. Equal maxima (mirror lobes)
/// resolve toward the steering angle.
inline double steered_angle(const BeamPattern& pattern) {
  if (pattern.scan_deg.empty() || pattern.scan_deg.size() != pattern.power_db.size())
    throw ArgumentError("pattern must be non-empty with matching vectors");
  return detail::refined_peak(pattern.scan_deg, pattern.power_db, pattern.steering_deg);
}

/// Direction of the main beam for one tone.
///
/// The array factor is periodic in direction cosine u = sin(phi) with period
/// c / (f d). The main beam is the lobe inside the period centred on the
/// steering cosine, so grating lobes and sidelobes are never mistaken for it.
/// The lobe is located on a coarse u grid, refined on a fine one and
/// parabolically interpolated; step sizes are the angular steps of `scan`
/// expressed in u at boresight. A peak beyond |u| = 1 lies in invisible space
/// and the visible beam sits at the nearer endfire, +/-90 degrees.
inline double locate_main_beam(const ArrayConfig& config, const BeamformerSpec& spec, double baseband_hz,
                               const ScanSettings& scan = {}) {
  config.validate();
  scan.validate();
  if (!(std::abs(baseband_hz) < config.sample_rate_hz / 2.0))
    throw ArgumentError("baseband tone violates complex-baseband Nyquist: |f_bb| must be < f_s/2");

  const auto gains = element_gains(config, spec, baseband_hz);
  const double f = config.carrier_hz + baseband_hz;
  const double period = config.light_speed_m_s / (f * config.spacing_m);
  const double s0 = std::sin(deg_to_rad(spec.steering_deg));

  auto sample = [&](std::span<const double> u_grid) {
    std::vector<double> db(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i) db[i] = to_db(array_power(config, gains, f, u_grid[i]));
    return db;
  };

  const auto coarse_u = uniform_grid(s0 - period / 2.0, s0 + period / 2.0, deg_to_rad(scan.coarse_step_deg));
  const auto coarse_db = sample(coarse_u);
  const double u_coarse = coarse_u[detail::argmax_nearest(coarse_u, coarse_db, s0)];

  const double half = deg_to_rad(scan.refine_window_deg);
  const auto fine_u = uniform_grid(u_coarse - half, u_coarse + half, deg_to_rad(scan.refine_step_deg));
  const auto fine_db = sample(fine_u);
  const double u_peak = detail::refined_peak(fine_u, fine_db, u_coarse);

  if (u_peak >= 1.0) return 90.0;
  if (u_peak <= -1.0) return -90.0;
  return rad_to_deg(std::asin(u_peak));
}

/// First-order squint estimate -(f_bb / f_c) tan(theta), in signed degrees.
inline double analytic_squint_approx(double theta_deg, double baseband_hz, double carrier_hz) {
  check_angle(theta_deg);
  if (std::abs(theta_deg) == 90.0) throw DomainError("tan(theta) is undefined at +/-90 degrees");
  return rad_to_deg(-(baseband_hz / carrier_hz) * std::tan(deg_to_rad(theta_deg)));
}

/// Exact phase-only array-factor peak: asin((f_c/f) sin(theta)), clamped to
/// +/-90 degrees when the argument leaves [-1, 1].
inline double analytic_steered_exact(double theta_deg, double center_hz, double carrier_hz) {
  check_angle(theta_deg);
  if (!(center_hz > 0.0)) throw ArgumentError("center_hz must be > 0");
  const double s = (carrier_hz / center_hz) * std::sin(deg_to_rad(theta_deg));
  if (s >= 1.0) return 90.0;
  if (s <= -1.0) return -90.0;
  return rad_to_deg(std::asin(s));
}

/// One row per centre frequency: measured main-beam direction and |theta' - theta|.
inline std::vector<SquintRow> squint_table(const ArrayConfig& config, const BeamformerSpec& spec,
                                           std::span<const double> center_freqs, const ScanSettings& scan = {},
                                           int threads = 1) {
  if (center_freqs.empty()) throw ArgumentError("centre frequency list is empty");
  spec.validate(config);
  std::vector<SquintRow> rows(center_freqs.size());
  parallel_for_index(center_freqs.size(), threads, [&](std::size_t i) {
    const double f = center_freqs[i];
    const double steered = locate_main_beam(config, spec, f - config.carrier_hz, scan);
    rows[i] = {f, steered, std::abs(steered - spec.steering_deg)};
  });
  return rows;
}

/// Largest squint in a table and the first centre frequency at which it occurs.
inline SquintRow max_squint(std::span<const SquintRow> rows) {
  if (rows.empty()) throw ArgumentError("empty squint table");
  return *std::max_element(rows.begin(), rows.end(),
                           [](const SquintRow& a, const SquintRow& b) { return a.squint_deg < b.squint_deg; });
}

}  // namespace squint
