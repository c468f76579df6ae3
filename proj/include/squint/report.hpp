#pragma once

// CSV / JSON rendering of patterns, squint tables and optimizer traces, and the
// full steering-angle sweep behind the report bundle.

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "squint/beamformers.hpp"
#include "squint/config.hpp"
#include "squint/optimizer.hpp"
#include "squint/parallel.hpp"
#include "squint/squint_analysis.hpp"

namespace squint {

/// Fixed-point text with `decimals` places; never prints a negative zero.
inline std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

inline std::string pattern_csv(const BeamPattern& pattern) {
  std::string out = "scan_deg,power_db\n";
  for (std::size_t i = 0; i < pattern.scan_deg.size(); ++i)
    out += fixed(pattern.scan_deg[i], 6) + "," + fixed(pattern.power_db[i], 6) + "\n";
  return out;
}

inline std::string squint_table_csv(std::span<const SquintRow> rows) {
  std::string out = "center_hz,steered_deg,squint_deg\n";
  for (const auto& r : rows)
    out += fixed(r.center_hz, 0) + "," + fixed(r.steered_deg, 2) + "," + fixed(r.squint_deg, 2) + "\n";
  return out;
}

inline std::string trace_csv(const OptimizationTrace& trace) {
  std::string out = "delta_samples,cost_deg\n";
  for (std::size_t i = 0; i < trace.delays.size(); ++i)
    out += fixed(trace.delays[i], 6) + "," + fixed(trace.costs[i], 6) + "\n";
  return out;
}

inline std::string taps_csv(std::span<const double> taps) {
  std::string out;
  char buf[64];
  for (double t : taps) {
    std::snprintf(buf, sizeof buf, "%.17g\n", t);
    out += buf;
  }
  return out;
}

/// One steering angle of the sweep: phase-only table, optimized delay, and the
/// TTD table at that delay.
struct AngleReport {
  double steering_deg = 0.0;
  std::vector<SquintRow> phase_only;
  OptimizationTrace trace;
  std::vector<SquintRow> ttd;
};

struct ReportBundle {
  RunConfig config;
  std::vector<AngleReport> angles;  // same order as config.steer_deg_list
};

inline AngleReport analyze_angle(const RunConfig& cfg, double steering_deg) {
  AngleReport rep;
  rep.steering_deg = steering_deg;
  const auto centers = cfg.center_frequencies();
  rep.phase_only = squint_table(cfg.array, BeamformerSpec::phase_only(steering_deg), centers, cfg.scan);
  const auto offsets = cfg.cost_offsets();
  rep.trace = optimize_delay(cfg.array, steering_deg, offsets, cfg.search, cfg.cost_settings());
  const auto ttd = BeamformerSpec::ttd(steering_deg, rep.trace.best_delay, cfg.frac_order, cfg.bulk_offset);
  rep.ttd = squint_table(cfg.array, ttd, centers, cfg.scan);
  return rep;
}

/// Runs every configured steering angle; angles are processed concurrently but
/// the bundle is assembled in list order.
inline ReportBundle run_sweep(const RunConfig& cfg, int threads = 1) {
  validate(cfg);
  ReportBundle bundle;
  bundle.config = cfg;
  bundle.angles.resize(cfg.steer_deg_list.size());
  parallel_for_index(cfg.steer_deg_list.size(), threads,
                     [&](std::size_t i) { bundle.angles[i] = analyze_angle(cfg, cfg.steer_deg_list[i]); });
  return bundle;
}

inline nlohmann::json rows_json(std::span<const SquintRow> rows) {
  auto arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"center_hz", r.center_hz},
                   {"steered_deg", round_to(r.steered_deg, 2)},
                   {"squint_deg", round_to(r.squint_deg, 2)}});
  return arr;
}

inline nlohmann::json bundle_json(const ReportBundle& bundle) {
  nlohmann::json j;
  j["config"] = to_json(bundle.config);
  auto angles = nlohmann::json::array();
  for (const auto& a : bundle.angles) {
    const auto po_max = max_squint(a.phase_only);
    const auto ttd_max = max_squint(a.ttd);
    angles.push_back({
        {"steering_deg", a.steering_deg},
        {"phase_only",
         {{"rows", rows_json(a.phase_only)},
          {"max_squint_deg", round_to(po_max.squint_deg, 2)},
          {"max_squint_center_hz", po_max.center_hz}}},
        {"optimum",
         {{"delta_samples", round_to(a.trace.best_delay, 4)},
          {"total_cost_deg", round_to(a.trace.best_cost, 2)},
          {"evaluations", a.trace.delays.size()}}},
        {"ttd",
         {{"rows", rows_json(a.ttd)},
          {"max_squint_deg", round_to(ttd_max.squint_deg, 2)},
          {"max_squint_center_hz", ttd_max.center_hz}}},
    });
  }
  j["angles"] = std::move(angles);
  return j;
}

/// File-name stem for per-angle CSVs, e.g. "40" or "-12.5".
inline std::string angle_tag(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

/// "best_delay=0.1768 best_cost=1.37 max_squint=0.16 at 1150000000 Hz"
inline std::string optimize_summary(const OptimizationTrace& trace, std::span<const SquintRow> ttd_rows) {
  const auto worst = max_squint(ttd_rows);
  return "best_delay=" + fixed(trace.best_delay, 4) + " best_cost=" + fixed(trace.best_cost, 2) +
         " max_squint=" + fixed(worst.squint_deg, 2) + " at " + fixed(worst.center_hz, 0) + " Hz";
}

}  // namespace squint
