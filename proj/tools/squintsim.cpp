// squintsim: beam squint simulation and baseband-delay optimization CLI.
//
//   squintsim pattern      --steer 40 --fbb 250e6 [--beamformer ttd --delta 0.1768]
//   squintsim squint-table --steer 40 [--beamformer ttd --delta 0.1768]
//   squintsim optimize     --steer 40 [--include-carrier]
//   squintsim sweep        --out results/ [--threads 8]
//   squintsim export-taps  --fraction 0.25 [--order 62]
//
// Exit codes: 0 success, 2 invalid input, 3 delay exceeds filter capacity.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "squint/squint.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCapacity = 3;

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

squint::RunConfig read_config(const std::string& path, bool include_carrier) {
  auto cfg = path.empty() ? squint::parse_config("{}") : squint::load_config(path);
  if (include_carrier) cfg.include_carrier = true;
  return cfg;
}

squint::BeamformerSpec make_spec(const squint::RunConfig& cfg, double steer, const std::string& beamformer,
                                 const std::optional<double>& delta) {
  if (beamformer == "phase") return squint::BeamformerSpec::phase_only(steer);
  // Without --delta, use the geometric slope f_s d sin(theta) / c.
  const double d = delta.value_or(cfg.array.max_element_delay_samples() * std::sin(squint::deg_to_rad(steer)));
  return squint::BeamformerSpec::ttd(steer, d, cfg.frac_order, cfg.bulk_offset);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wideband phased-array beam squint simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  double steer = 0.0;
  double fbb = 0.0;
  std::string beamformer = "phase";
  std::optional<double> delta;
  bool include_carrier = false;
  int threads = 1;
  double fraction = 0.0;
  int order = squint::kDefaultFracOrder;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output path (stdout when omitted)");
  };
  auto add_beamformer = [&](CLI::App* sub) {
    sub->add_option("--beamformer", beamformer, "phase or ttd")->check(CLI::IsMember({"phase", "ttd"}));
    sub->add_option("--delta", delta, "per-element baseband delay in samples (ttd)");
  };

  auto* pattern = app.add_subcommand("pattern", "beam pattern CSV (scan_deg, power_db)");
  add_common(pattern);
  add_beamformer(pattern);
  pattern->add_option("--steer", steer, "steering angle, degrees")->required();
  pattern->add_option("--fbb", fbb, "baseband tone offset from the carrier, Hz");

  auto* table = app.add_subcommand("squint-table", "steered angle and squint per centre frequency");
  add_common(table);
  add_beamformer(table);
  table->add_option("--steer", steer, "steering angle, degrees")->required();
  table->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* optimize = app.add_subcommand("optimize", "grid-search the baseband delay for one angle");
  add_common(optimize);
  optimize->add_option("--steer", steer, "steering angle, degrees")->required();
  optimize->add_flag("--include-carrier", include_carrier, "add f_bb = 0 to the cost");
  optimize->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "full sweep over the configured steering angles");
  add_common(sweep);
  sweep->add_flag("--include-carrier", include_carrier, "add f_bb = 0 to the cost");
  sweep->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* taps = app.add_subcommand("export-taps", "fractional-delay filter taps, one per line");
  taps->add_option("--fraction", fraction, "fractional delay in samples, [-0.5, 0.5]");
  taps->add_option("--order", order, "filter order (even)");
  taps->add_option("--out", out_path, "output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*pattern) {
      const auto cfg = read_config(config_path, false);
      const auto spec = make_spec(cfg, steer, beamformer, delta);
      const auto grid = squint::default_scan_grid(cfg.scan);
      emit(squint::pattern_csv(squint::beam_pattern(cfg.array, spec, fbb, grid)), out_path);
    } else if (*table) {
      const auto cfg = read_config(config_path, false);
      const auto spec = make_spec(cfg, steer, beamformer, delta);
      const auto rows = squint::squint_table(cfg.array, spec, cfg.center_frequencies(), cfg.scan, threads);
      emit(squint::squint_table_csv(rows), out_path);
    } else if (*optimize) {
      const auto cfg = read_config(config_path, include_carrier);
      const auto trace = squint::optimize_delay(cfg.array, steer, cfg.cost_offsets(), cfg.search,
                                                cfg.cost_settings(), threads);
      const auto spec = squint::BeamformerSpec::ttd(steer, trace.best_delay, cfg.frac_order, cfg.bulk_offset);
      const auto rows = squint::squint_table(cfg.array, spec, cfg.center_frequencies(), cfg.scan, threads);
      emit(squint::trace_csv(trace), out_path);
      std::cerr << squint::optimize_summary(trace, rows) << "\n";
    } else if (*sweep) {
      const auto cfg = read_config(config_path, include_carrier);
      const std::filesystem::path dir = out_path.empty() ? "sweep" : out_path;
      std::filesystem::create_directories(dir);
      const auto bundle = squint::run_sweep(cfg, threads);
      emit(squint::bundle_json(bundle).dump(2) + "\n", (dir / "report.json").string());
      for (const auto& a : bundle.angles) {
        const auto tag = squint::angle_tag(a.steering_deg);
        emit(squint::squint_table_csv(a.phase_only), (dir / ("squint_phase_" + tag + ".csv")).string());
        emit(squint::squint_table_csv(a.ttd), (dir / ("squint_ttd_" + tag + ".csv")).string());
        emit(squint::trace_csv(a.trace), (dir / ("trace_" + tag + ".csv")).string());
        std::cout << "steer=" << tag << " " << squint::optimize_summary(a.trace, a.ttd) << "\n";
      }
    } else if (*taps) {
      const auto filter = squint::design_fractional(fraction, order);
      emit(squint::taps_csv(filter.taps), out_path);
    }
  } catch (const squint::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const squint::ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const squint::ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitValidation;
  } catch (const squint::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
