#pragma once

// Run configuration: JSON load with full validation and a canonical,
// byte-stable serialization.

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "squint/array_model.hpp"
#include "squint/delay_filters.hpp"
#include "squint/errors.hpp"
#include "squint/optimizer.hpp"
#include "squint/squint_analysis.hpp"

namespace squint {

struct RunConfig {
  ArrayConfig array;
  std::vector<double> freq_offsets_hz = default_baseband_offsets();
  std::vector<double> steer_deg_list = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90};
  DelaySearchSpec search;
  int num_samples = 4096;
  int frac_order = kDefaultFracOrder;
  int bulk_offset = kDefaultBulkOffset;
  bool include_carrier = false;  // add f_bb = 0 to the optimizer's cost list
  ScanSettings scan;

  CostSettings cost_settings() const { return {frac_order, bulk_offset, scan}; }

  /// Offsets summed by the optimizer's cost.
  std::vector<double> cost_offsets() const {
    std::vector<double> out = freq_offsets_hz;
    if (include_carrier) {
      bool has_zero = false;
      for (double f : out) has_zero = has_zero || f == 0.0;
      if (!has_zero) out.push_back(0.0);
    }
    return out;
  }

  /// Carrier plus every offset, ascending, without duplicates.
  std::vector<double> center_frequencies() const {
    std::set<double> freqs{array.carrier_hz};
    for (double f : freq_offsets_hz) freqs.insert(array.carrier_hz + f);
    return {freqs.begin(), freqs.end()};
  }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError(prefix + key, "unknown key");
  }
}

inline const json& require_object(const json& j, const std::string& field) {
  if (!j.is_object()) throw ValidationError(field, "must be a JSON object");
  return j;
}

inline double read_number(const json& obj, const char* key, const std::string& prefix, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ValidationError(prefix + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(prefix + key, "must be finite");
  return x;
}

inline int read_int(const json& obj, const char* key, const std::string& prefix, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ValidationError(prefix + key, "must be an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ValidationError(prefix + key, "out of integer range");
  return static_cast<int>(x);
}

inline std::vector<double> read_number_list(const json& obj, const char* key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ValidationError(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(key, "must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline void check(bool ok, const std::string& field, const std::string& constraint) {
  if (!ok) throw ValidationError(field, constraint);
}

}  // namespace detail

/// Validates every field of a RunConfig; throws ValidationError naming the field.
inline void validate(const RunConfig& cfg) {
  using detail::check;
  const auto& a = cfg.array;
  check(a.num_elements >= 2, "array.num_elements", "num_elements >= 2 required");
  check(a.carrier_hz > 0.0, "array.carrier_hz", "carrier_hz > 0 required");
  check(a.sample_rate_hz > 0.0, "array.sample_rate_hz", "sample_rate_hz > 0 required");
  check(a.spacing_m > 0.0, "array.spacing_m", "spacing_m > 0 required");
  check(a.light_speed_m_s > 0.0, "array.light_speed_m_s", "light_speed_m_s > 0 required");

  check(!cfg.freq_offsets_hz.empty(), "freq_offsets_hz", "at least one offset required");
  for (double f : cfg.freq_offsets_hz)
    check(std::isfinite(f) && std::abs(f) < a.sample_rate_hz / 2.0, "freq_offsets_hz",
          "every offset must satisfy |f| < sample_rate_hz / 2");
  check(!cfg.steer_deg_list.empty(), "steer_deg_list", "at least one steering angle required");
  for (double t : cfg.steer_deg_list)
    check(std::isfinite(t) && t >= -90.0 && t <= 90.0, "steer_deg_list", "angles must lie in [-90, 90]");

  const auto& s = cfg.search;
  const double bound = a.max_element_delay_samples() * (1.0 + 1e-12);
  check(s.min_samples < s.max_samples, "search.min_samples", "min_samples < max_samples required");
  check(std::abs(s.min_samples) <= bound, "search.min_samples", "|min_samples| <= sample_rate*spacing/c required");
  check(std::abs(s.max_samples) <= bound, "search.max_samples", "|max_samples| <= sample_rate*spacing/c required");
  check(s.coarse_points >= 3, "search.coarse_points", "coarse_points >= 3 required");
  check(s.refine_rounds >= 0, "search.refine_rounds", "refine_rounds >= 0 required");
  check(s.refine_shrink > 0.0 && s.refine_shrink < 1.0, "search.refine_shrink", "refine_shrink in (0, 1) required");

  check(cfg.frac_order >= 8 && cfg.frac_order % 2 == 0, "frac_order", "frac_order even and >= 8 required");
  check(cfg.bulk_offset >= 0 && cfg.bulk_offset < kIntegerFilterTaps, "bulk_offset", "bulk_offset in [0, 29] required");
  check(cfg.num_samples > cfg.frac_order + kIntegerFilterTaps, "num_samples",
        "num_samples > frac_order + 30 required (steady-state window)");

  check(cfg.scan.coarse_step_deg > 0.0, "scan.coarse_step_deg", "coarse_step_deg > 0 required");
  check(cfg.scan.refine_step_deg > 0.0, "scan.refine_step_deg", "refine_step_deg > 0 required");
  check(cfg.scan.refine_window_deg >= cfg.scan.refine_step_deg, "scan.refine_window_deg",
        "refine_window_deg >= refine_step_deg required");
}

/// Parses a JSON document; omitted fields take the design-example defaults.
/// Omitted spacing defaults to half the carrier wavelength and omitted search
/// bounds to +/- f_s d / c.
inline RunConfig parse_config(const std::string& text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("", std::string("JSON parse error: ") + e.what());
  }
  detail::require_object(root, "<root>");
  detail::reject_unknown(root, "",
                         {"array", "freq_offsets_hz", "steer_deg_list", "search", "num_samples", "frac_order",
                          "bulk_offset", "include_carrier", "scan"});

  RunConfig cfg;
  const json empty = json::object();

  const json& a = root.contains("array") ? detail::require_object(root.at("array"), "array") : empty;
  detail::reject_unknown(a, "array.", {"num_elements", "carrier_hz", "sample_rate_hz", "spacing_m", "light_speed_m_s"});
  cfg.array.num_elements = detail::read_int(a, "num_elements", "array.", cfg.array.num_elements);
  cfg.array.carrier_hz = detail::read_number(a, "carrier_hz", "array.", cfg.array.carrier_hz);
  cfg.array.sample_rate_hz = detail::read_number(a, "sample_rate_hz", "array.", cfg.array.sample_rate_hz);
  cfg.array.light_speed_m_s = detail::read_number(a, "light_speed_m_s", "array.", cfg.array.light_speed_m_s);
  const double default_spacing =
      cfg.array.carrier_hz > 0.0 ? half_wavelength(cfg.array.carrier_hz, cfg.array.light_speed_m_s) : 0.0;
  cfg.array.spacing_m = detail::read_number(a, "spacing_m", "array.", default_spacing);

  cfg.freq_offsets_hz = detail::read_number_list(root, "freq_offsets_hz", cfg.freq_offsets_hz);
  cfg.steer_deg_list = detail::read_number_list(root, "steer_deg_list", cfg.steer_deg_list);

  const json& s = root.contains("search") ? detail::require_object(root.at("search"), "search") : empty;
  detail::reject_unknown(s, "search.", {"min_samples", "max_samples", "coarse_points", "refine_rounds", "refine_shrink"});
  const double bound = cfg.array.max_element_delay_samples();
  cfg.search.min_samples = detail::read_number(s, "min_samples", "search.", -bound);
  cfg.search.max_samples = detail::read_number(s, "max_samples", "search.", bound);
  cfg.search.coarse_points = detail::read_int(s, "coarse_points", "search.", cfg.search.coarse_points);
  cfg.search.refine_rounds = detail::read_int(s, "refine_rounds", "search.", cfg.search.refine_rounds);
  cfg.search.refine_shrink = detail::read_number(s, "refine_shrink", "search.", cfg.search.refine_shrink);

  cfg.num_samples = detail::read_int(root, "num_samples", "", cfg.num_samples);
  cfg.frac_order = detail::read_int(root, "frac_order", "", cfg.frac_order);
  cfg.bulk_offset = detail::read_int(root, "bulk_offset", "", cfg.bulk_offset);
  if (root.contains("include_carrier")) {
    if (!root.at("include_carrier").is_boolean()) throw ValidationError("include_carrier", "must be a boolean");
    cfg.include_carrier = root.at("include_carrier").get<bool>();
  }

  const json& sc = root.contains("scan") ? detail::require_object(root.at("scan"), "scan") : empty;
  detail::reject_unknown(sc, "scan.", {"coarse_step_deg", "refine_step_deg", "refine_window_deg"});
  cfg.scan.coarse_step_deg = detail::read_number(sc, "coarse_step_deg", "scan.", cfg.scan.coarse_step_deg);
  cfg.scan.refine_step_deg = detail::read_number(sc, "refine_step_deg", "scan.", cfg.scan.refine_step_deg);
  cfg.scan.refine_window_deg = detail::read_number(sc, "refine_window_deg", "scan.", cfg.scan.refine_window_deg);

  validate(cfg);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("", "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["array"] = {{"num_elements", cfg.array.num_elements},
                {"carrier_hz", cfg.array.carrier_hz},
                {"sample_rate_hz", cfg.array.sample_rate_hz},
                {"spacing_m", cfg.array.spacing_m},
                {"light_speed_m_s", cfg.array.light_speed_m_s}};
  j["freq_offsets_hz"] = cfg.freq_offsets_hz;
  j["steer_deg_list"] = cfg.steer_deg_list;
  j["search"] = {{"min_samples", cfg.search.min_samples},
                 {"max_samples", cfg.search.max_samples},
                 {"coarse_points", cfg.search.coarse_points},
                 {"refine_rounds", cfg.search.refine_rounds},
                 {"refine_shrink", cfg.search.refine_shrink}};
  j["num_samples"] = cfg.num_samples;
  j["frac_order"] = cfg.frac_order;
  j["bulk_offset"] = cfg.bulk_offset;
  j["include_carrier"] = cfg.include_carrier;
  j["scan"] = {{"coarse_step_deg", cfg.scan.coarse_step_deg},
               {"refine_step_deg", cfg.scan.refine_step_deg},
               {"refine_window_deg", cfg.scan.refine_window_deg}};
  return j;
}

/// Canonical text form: every field explicit, keys sorted, two-space indent.
inline std::string serialize_config(const RunConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace squint
