#pragma once

// Grid search for the per-element fractional baseband delay that minimizes the
// total squint over a set of baseband tones.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "squint/array_model.hpp"
#include "squint/beamformers.hpp"
#include "squint/errors.hpp"
#include "squint/parallel.hpp"
#include "squint/squint_analysis.hpp"

namespace squint {

struct DelaySearchSpec {
  double min_samples = -0.275;
  double max_samples = 0.275;
  int coarse_points = 111;
  int refine_rounds = 2;
  double refine_shrink = 0.1;

  /// Full solution space +/- f_s d / c with the default schedule.
  static DelaySearchSpec for_array(const ArrayConfig& config) {
    DelaySearchSpec s;
    s.max_samples = config.max_element_delay_samples();
    s.min_samples = -s.max_samples;
    return s;
  }

  void validate() const {
    if (!(min_samples < max_samples)) throw ArgumentError("search min_samples must be < max_samples");
    if (coarse_points < 3) throw ArgumentError("search coarse_points must be >= 3");
    if (refine_rounds < 0) throw ArgumentError("search refine_rounds must be >= 0");
    if (!(refine_shrink > 0.0 && refine_shrink < 1.0)) throw ArgumentError("search refine_shrink must lie in (0, 1)");
  }

  double coarse_step() const { return (max_samples - min_samples) / (coarse_points - 1); }
};

/// Beamformer settings shared by every cost evaluation.
struct CostSettings {
  int frac_order = kDefaultFracOrder;
  int bulk_offset = kDefaultBulkOffset;
  ScanSettings scan;
};

struct OptimizationTrace {
  std::vector<double> delays;  // evaluation order: coarse grid first, then refinement rounds
  std::vector<double> costs;   // degrees
  std::size_t coarse_count = 0;
  double best_delay = 0.0;
  double best_cost = 0.0;
};

/// C = sum_i |theta'(f_bb(i)) - theta| for the TTD beamformer at `delta_samples`.
inline double total_squint_cost(const ArrayConfig& config, double theta_deg, double delta_samples,
                                std::span<const double> baseband_freqs, const CostSettings& settings = {}) {
  if (baseband_freqs.empty()) throw ArgumentError("baseband frequency list is empty");
  const auto spec = BeamformerSpec::ttd(theta_deg, delta_samples, settings.frac_order, settings.bulk_offset);
  double cost = 0.0;
  for (double fbb : baseband_freqs) cost += std::abs(locate_main_beam(config, spec, fbb, settings.scan) - theta_deg);
  return cost;
}

namespace detail {

/// Strictly better cost, or equal cost with smaller |delta|, then smaller delta.
inline bool better_candidate(double cost, double delta, double best_cost, double best_delta) {
  constexpr double kTie = 1e-12;
  if (cost < best_cost - kTie) return true;
  if (cost > best_cost + kTie) return false;
  if (std::abs(delta) != std::abs(best_delta)) return std::abs(delta) < std::abs(best_delta);
  return delta < best_delta;
}

}  // namespace detail

inline OptimizationTrace optimize_delay(const ArrayConfig& config, double theta_deg,
                                        std::span<const double> baseband_freqs, const DelaySearchSpec& search,
                                        const CostSettings& settings = {}, int threads = 1) {
  config.validate();
  search.validate();
  check_angle(theta_deg);

  OptimizationTrace trace;
  auto evaluate = [&](const std::vector<double>& grid) {
    std::vector<double> costs(grid.size());
    parallel_for_index(grid.size(), threads, [&](std::size_t i) {
      costs[i] = total_squint_cost(config, theta_deg, grid[i], baseband_freqs, settings);
    });
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (trace.delays.empty() || detail::better_candidate(costs[i], grid[i], trace.best_cost, trace.best_delay)) {
        trace.best_cost = costs[i];
        trace.best_delay = grid[i];
      }
      trace.delays.push_back(grid[i]);
      trace.costs.push_back(costs[i]);
    }
  };

  // Endpoint-weighted form keeps the grid symmetric, so 0 is hit exactly.
  std::vector<double> coarse(static_cast<std::size_t>(search.coarse_points));
  const double last = search.coarse_points - 1;
  for (int i = 0; i < search.coarse_points; ++i)
    coarse[static_cast<std::size_t>(i)] = (search.min_samples * (last - i) + search.max_samples * i) / last;
  evaluate(coarse);
  trace.coarse_count = coarse.size();

  // Each round brackets the incumbent by +/- the previous step and divides the
  // step by 1/refine_shrink.
  const int intervals = static_cast<int>(std::lround(2.0 / search.refine_shrink));
  double step = search.coarse_step();
  for (int round = 0; round < search.refine_rounds; ++round) {
    const double centre = trace.best_delay;
    const double half = step;
    step = 2.0 * half / intervals;
    std::vector<double> grid;
    for (int j = 0; j <= intervals; ++j) {
      const double d = centre - half + j * step;
      if (d >= search.min_samples && d <= search.max_samples) grid.push_back(d);
    }
    evaluate(grid);
  }
  return trace;
}

}  // namespace squint
