// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "squint/squint.hpp"

using namespace squint;

namespace {

const ArrayConfig kCfg;
constexpr double kCarrier = 1e9;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> steering_angles() {
  std::vector<double> out;
  for (int t = 0; t <= 90; t += 10) out.push_back(t);
  return out;
}

// Shared with criteria 5, 6 and 8.
struct OptimumRun {
  std::vector<OptimizationTrace> serial;
  double serial_seconds = 0.0;
  bool parallel_identical = true;
};

const OptimumRun& optimum_run() {
  static const OptimumRun run = [] {
    OptimumRun r;
    const auto offsets = default_baseband_offsets();
    const auto search = DelaySearchSpec::for_array(kCfg);
    const auto t0 = Clock::now();
    for (double theta : steering_angles()) r.serial.push_back(optimize_delay(kCfg, theta, offsets, search, {}, 1));
    r.serial_seconds = seconds_since(t0);
    const auto angles = steering_angles();
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const auto p = optimize_delay(kCfg, angles[i], offsets, search, {}, 4);
      r.parallel_identical = r.parallel_identical && p.delays == r.serial[i].delays && p.costs == r.serial[i].costs &&
                             p.best_delay == r.serial[i].best_delay;
    }
    return r;
  }();
  return run;
}

void boresight_null() {
  const auto t0 = Clock::now();
  const auto rows = squint_table(kCfg, BeamformerSpec::phase_only(0.0), default_center_frequencies(kCarrier));
  const double worst = max_squint(rows).squint_deg;
  report(1, "boresight null squint", rows.size() == 21 && worst < 0.02,
         fmt("max squint %.2e deg over %zu frequencies (%.2f s)", worst, rows.size(), seconds_since(t0)));
}

void oracle_equivalence() {
  const auto centers = default_center_frequencies(kCarrier);
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::size_t cases = 0;
  for (double theta = 10.0; theta <= 80.0; theta += 10.0) {
    for (const auto& row : squint_table(kCfg, BeamformerSpec::phase_only(theta), centers, {}, 1)) {
      worst = std::max(worst, std::abs(row.steered_deg - analytic_steered_exact(theta, row.center_hz, kCarrier)));
      ++cases;
    }
  }
  const double elapsed = seconds_since(t0);

  // Angle-space brute force wherever the closed-form beam is visible: 0.2 deg
  // scan, every lobe within 0.5 dB refined over +/-2 deg at 0.01 deg, and of the
  // full-height lobes (grating lobes above f_c) the one nearest the steering.
  double brute_worst = 0.0;
  for (double theta = 10.0; theta <= 80.0; theta += 10.0) {
    const auto spec = BeamformerSpec::phase_only(theta);
    for (double f : centers) {
      const double exact = analytic_steered_exact(theta, f, kCarrier);
      if (std::abs(exact) >= 90.0) continue;
      const double fbb = f - kCarrier;
      const auto gains = element_gains(kCfg, spec, fbb);
      const auto coarse = beam_pattern(kCfg, spec, fbb, default_scan_grid());
      std::vector<std::pair<double, double>> lobes;  // (angle, power)
      const auto& y = coarse.power_db;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const bool peak = (i == 0 || y[i] >= y[i - 1]) && (i + 1 == y.size() || y[i] >= y[i + 1]);
        if (!peak || y[i] < -0.5) continue;
        const double a = coarse.scan_deg[i];
        const auto fine = uniform_grid(std::max(-90.0, a - 2.0), std::min(90.0, a + 2.0), 0.01);
        const double refined = steered_angle(beam_pattern(kCfg, spec, fbb, fine));
        lobes.emplace_back(refined, array_power(kCfg, gains, f, std::sin(deg_to_rad(refined))));
      }
      double top = 0.0;
      for (const auto& l : lobes) top = std::max(top, l.second);
      double pick = 1e9;
      for (const auto& l : lobes)
        if (l.second >= top * (1.0 - 1e-3) && std::abs(l.first - theta) < std::abs(pick - theta)) pick = l.first;
      brute_worst = std::max(brute_worst, std::abs(pick - exact));
    }
  }
  report(2, "phase-only oracle equivalence", cases == 168 && worst < 0.1 && brute_worst < 0.1 && elapsed < 120.0,
         fmt("%zu cases, max |measured - exact| %.2e deg (angle-space scan %.2e), %.2f s single-threaded", cases,
             worst, brute_worst, elapsed));
}

void endfire_clamping() {
  std::vector<double> low;
  for (double f : default_center_frequencies(kCarrier))
    if (f <= 825e6) low.push_back(f);
  const auto rows = squint_table(kCfg, BeamformerSpec::phase_only(60.0), low);
  bool ok = rows.size() == 4;
  std::string detail;
  for (const auto& r : rows) {
    ok = ok && std::abs(r.squint_deg - 30.0) <= 0.05;
    detail += fmt("%.0f MHz: %.2f  ", r.center_hz / 1e6, r.squint_deg);
  }
  report(3, "endfire clamping at 60 deg", ok, detail);
}

void first_order_regime() {
  double worst = 0.0;
  for (double theta = 10.0; theta <= 60.0; theta += 10.0) {
    for (double fbb : {-50e6, -25e6, 25e6, 50e6}) {
      const double exact = analytic_steered_exact(theta, kCarrier + fbb, kCarrier) - theta;
      worst = std::max(worst, std::abs(analytic_squint_approx(theta, fbb, kCarrier) - exact) / std::abs(exact));
    }
  }
  // theta = 0: both are identically zero.
  const bool boresight = analytic_squint_approx(0.0, 50e6, kCarrier) == 0.0 &&
                         analytic_steered_exact(0.0, kCarrier + 50e6, kCarrier) == 0.0;
  const double spot = std::abs(analytic_squint_approx(40.0, 975e6 - kCarrier, kCarrier));
  const double spot_exact = std::abs(analytic_steered_exact(40.0, 975e6, kCarrier) - 40.0);
  report(4, "first-order squint regime", worst < 0.15 && boresight && std::abs(spot - 1.20) <= 0.02,
         fmt("max relative error %.2f%%; 40 deg @ 975 MHz approx %.3f deg (exact %.3f)", 100.0 * worst, spot,
             spot_exact));
}

void optimum_recovery() {
  const std::vector<double> table{0.0, 0.0495, 0.0935, 0.1375, 0.1760, 0.2090, 0.2365, 0.2585, 0.2695, 0.2750};
  const auto& run = optimum_run();
  bool ok = run.parallel_identical && run.serial_seconds < 600.0;
  double worst = 0.0;
  std::string deltas;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double d = run.serial[i].best_delay;
    worst = std::max(worst, std::abs(d - table[i]));
    ok = ok && std::abs(d - table[i]) <= 0.02 && (i == 0 || d > run.serial[i - 1].best_delay);
    deltas += fmt("%.4f ", d);
  }
  report(5, "optimum delay recovery", ok,
         fmt("delta* = [ %s] max dev %.4f, %.1f s single-threaded, parallel %s", deltas.c_str(), worst,
             run.serial_seconds, run.parallel_identical ? "identical" : "DIFFERS"));
}

void post_compensation() {
  const auto& run = optimum_run();
  const auto offsets = default_baseband_offsets();
  std::vector<double> centers;
  for (double f : offsets) centers.push_back(kCarrier + f);
  std::sort(centers.begin(), centers.end());
  bool ok = true;
  std::string detail;
  const auto angles = steering_angles();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const auto rows = squint_table(kCfg, BeamformerSpec::ttd(angles[i], run.serial[i].best_delay), centers, {}, 4);
    const double worst = max_squint(rows).squint_deg;
    ok = ok && worst < (angles[i] == 90.0 ? 2.5 : 1.0);
    detail += fmt("%g:%.2f ", angles[i], worst);
  }
  report(6, "post-compensation squint", ok, "max squint per angle (deg) " + detail);
}

// Delay of `out` relative to `in` from the tone's DFT bin over the steady-state segment.
double dft_bin_delay(const std::vector<cplx>& out, const std::vector<cplx>& in, double hz, double fs, std::size_t skip,
                     double nominal) {
  cplx a{}, b{};
  for (std::size_t k = skip; k < out.size(); ++k) {
    const cplx kernel = std::polar(1.0, -kTwoPi * hz * static_cast<double>(k) / fs);
    a += out[k] * kernel;
    b += in[k] * kernel;
  }
  const double omega = kTwoPi * hz / fs;
  return nominal - std::remainder(std::arg(a / b) + omega * nominal, kTwoPi) / omega;
}

void fractional_accuracy() {
  const double fs = kCfg.sample_rate_hz;
  double worst = 0.0, worst_lib = 0.0;
  for (double frac : {-0.5, -0.25, 0.25, 0.5}) {
    const auto filt = design_fractional(frac, kDefaultFracOrder);
    const double nominal = filt.bulk_delay_samples + frac;
    for (double hz : {25e6, 100e6, 250e6}) {
      std::vector<cplx> x(2048);
      for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::polar(1.0, kTwoPi * hz * static_cast<double>(k) / fs);
      const auto y = fir_filter<cplx>(x, filt.taps);
      const std::size_t skip = filt.taps.size();
      worst = std::max(worst, std::abs(dft_bin_delay(y, x, hz, fs, skip, nominal) - nominal));
      worst_lib = std::max(worst_lib, std::abs(measure_phase_delay(y, x, hz, fs, {skip, nominal}) - nominal));
    }
  }
  report(7, "fractional-delay accuracy", worst < 0.02 && worst_lib < 0.02,
         fmt("max phase-delay error %.2e samples (DFT bin), %.2e (library estimator)", worst, worst_lib));
}

int sign_changes_near_best(const OptimizationTrace& t, double window) {
  int changes = 0, prev = 0;
  double last = 0.0;
  bool have = false;
  for (std::size_t i = 0; i < t.coarse_count; ++i) {
    if (std::abs(t.delays[i] - t.best_delay) > window + 1e-12) continue;
    if (have) {
      const double diff = t.costs[i] - last;
      const int sign = diff > 0 ? 1 : (diff < 0 ? -1 : 0);
      if (sign != 0) {
        if (prev != 0 && sign != prev) ++changes;
        prev = sign;
      }
    }
    last = t.costs[i];
    have = true;
  }
  return changes;
}

void property_suite() {
  std::vector<std::string> failed;
  auto check = [&](const char* name, bool ok) {
    if (!ok) failed.emplace_back(name);
  };
  const double n2 = static_cast<double>(kCfg.num_elements) * kCfg.num_elements;

  {  // Matched steering at f_bb = 0 adds coherently.
    bool ok = true;
    for (double theta : {-70.0, -20.0, 0.0, 35.0, 80.0}) {
      const auto g = element_gains(kCfg, BeamformerSpec::phase_only(theta), 0.0);
      ok = ok && std::abs(array_power(kCfg, g, kCarrier, std::sin(deg_to_rad(theta))) - n2) <= 1e-9 * n2;
      const auto td = combine(synthesize_received(kCfg, {theta, 0.0}, 256), kCfg, BeamformerSpec::phase_only(theta));
      ok = ok && std::abs(td.power - n2) <= 1e-9 * n2;
    }
    check("N^2 at f_bb=0", ok);
  }
  {  // Bulk offset only adds a common delay.
    bool ok = true;
    for (double fbb : {-250e6, -100e6, 75e6, 225e6}) {
      const double a = locate_main_beam(kCfg, BeamformerSpec::ttd(50.0, 0.2, kDefaultFracOrder, 8), fbb);
      const double b = locate_main_beam(kCfg, BeamformerSpec::ttd(50.0, 0.2, kDefaultFracOrder, 12), fbb);
      ok = ok && std::abs(a - b) < 1e-9;
    }
    check("bulk-offset invariance", ok);
  }
  {  // TTD with zero delay is phase-only up to a common phase.
    bool ok = true;
    const auto grid = uniform_grid(-90.0, 90.0, 1.0);
    for (double fbb : {-200e6, 0.0, 150e6}) {
      const auto p = beam_pattern(kCfg, BeamformerSpec::phase_only(30.0), fbb, grid);
      const auto t = beam_pattern(kCfg, BeamformerSpec::ttd(30.0, 0.0), fbb, grid);
      for (std::size_t i = 0; i < grid.size(); ++i)
        ok = ok && std::abs(std::pow(10.0, p.power_db[i] / 10) - std::pow(10.0, t.power_db[i] / 10)) < 1e-9;
    }
    check("PhaseOnly == TTD(0)", ok);
  }
  {  // Superposition through the full TTD chain.
    const auto spec = BeamformerSpec::ttd(25.0, 0.11);
    auto x1 = synthesize_received(kCfg, {10.0, 60e6}, 512);
    auto x2 = synthesize_received(kCfg, {-40.0, -130e6}, 512);
    const cplx a{0.7, -0.2}, b{-1.3, 0.4};
    const auto y1 = combine(x1, kCfg, spec).samples;
    const auto y2 = combine(x2, kCfg, spec).samples;
    x1 *= a;
    x2 *= b;
    x1 += x2;
    const auto y = combine(x1, kCfg, spec).samples;
    double err = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) err = std::max(err, std::abs(y[k] - (a * y1[k] + b * y2[k])));
    check("linearity", err < 1e-9);
  }
  {  // +/- theta mirror.
    bool ok = true;
    const auto centers = default_center_frequencies(kCarrier);
    for (double theta : {20.0, 55.0, 80.0}) {
      for (const auto& [pos, neg] :
           {std::pair{BeamformerSpec::phase_only(theta), BeamformerSpec::phase_only(-theta)},
            std::pair{BeamformerSpec::ttd(theta, 0.275 * std::sin(deg_to_rad(theta))),
                      BeamformerSpec::ttd(-theta, -0.275 * std::sin(deg_to_rad(theta)))}}) {
        const auto rp = squint_table(kCfg, pos, centers);
        const auto rn = squint_table(kCfg, neg, centers);
        for (std::size_t i = 0; i < rp.size(); ++i)
          ok = ok && std::abs(rp[i].steered_deg + rn[i].steered_deg) < 1e-6 &&
               std::abs(rp[i].squint_deg - rn[i].squint_deg) < 1e-6;
      }
    }
    check("mirror symmetry", ok);
  }
  std::string shape;
  {  // Convergence trace is a bowl near its minimum.
    const auto& run = optimum_run();
    bool ok = true;
    for (std::size_t i : {2u, 4u, 6u, 9u}) {
      const int changes = sign_changes_near_best(run.serial[i], 0.05);
      ok = ok && changes <= 1;
      shape += fmt("%g:%d ", steering_angles()[i], changes);
    }
    check("trace unimodality", ok);
  }
  std::string detail = failed.empty() ? "all 6 properties hold" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  report(8, "property suite", failed.empty(), detail + "; trace slope changes " + shape);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{boresight_null,      oracle_equivalence, endfire_clamping,
                                                    first_order_regime,  optimum_recovery,   post_compensation,
                                                    fractional_accuracy, property_suite};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL (exception) %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
