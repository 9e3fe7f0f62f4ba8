#pragma once

// One analysis record per scenario evaluation, rendered as an aligned table,
// a CSV row under a fixed header, or a single JSON object.

#include <chrono>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qcka/catalog.hpp"
#include "qcka/distribution.hpp"
#include "qcka/intrinsic.hpp"
#include "qcka/mu.hpp"
#include "qcka/qstate.hpp"

namespace qcka {

struct AnalyzeOptions {
  std::string eve_frame = "standard";
  std::size_t nzbar = 0;  // 0: same as |Z|
  int restarts = 8;
  std::uint64_t seed = 1;
  bool mu = false;
  MuOptions mu_options;
};

struct ReportRecord {
  std::string scenario;
  std::map<std::string, double> params;
  std::string eve_frame;
  std::size_t nzbar = 0;
  std::uint64_t seed = 0;
  int restarts = 0;
  double mutual_information_xy = 0.0;
  double conditional_mutual_information = 0.0;
  double ck_lower_bound = 0.0;
  double intrinsic_upper_bound = 0.0;
  Channel intrinsic_channel;
  std::optional<double> certificate_residual;
  std::optional<bool> certificate_valid;
  std::optional<double> ppt_min_eigenvalue;
  std::optional<bool> is_pure;
  std::optional<double> mu_estimate;
  std::optional<std::string> mu_quality;
  double elapsed_ms = 0.0;
};

/// The distribution a scenario yields in the requested Eve frame.
inline JointDistribution scenario_distribution(const Scenario& s, const std::string& frame) {
  if (frame == "standard") {
    if (s.distribution) return *s.distribution;
    if (s.state) return measure_standard(*s.state);
    throw ValidationError("scenario " + s.name + " has neither a distribution nor a state");
  }
  auto it = s.frames.find(frame);
  if (it == s.frames.end()) throw ValidationError("scenario " + s.name + " has no Eve frame '" + frame + "'");
  if (!s.state) throw ValidationError("scenario " + s.name + " has no state to measure");
  return measure_state(*s.state, it->second.alice, it->second.bob, it->second.eve);
}

inline ReportRecord analyze(const Scenario& s, const AnalyzeOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  ReportRecord r;
  r.scenario = s.name;
  r.params = s.params;
  r.eve_frame = opts.eve_frame;
  r.seed = opts.seed;
  r.restarts = opts.restarts;

  const JointDistribution p = scenario_distribution(s, opts.eve_frame);
  r.nzbar = opts.nzbar == 0 ? p.nz() : opts.nzbar;
  r.mutual_information_xy = mutual_information_xy(p);
  r.conditional_mutual_information = conditional_mutual_information(p);
  r.ck_lower_bound = ck_lower_bound(p);

  IntrinsicOptions io;
  io.restarts = opts.restarts;
  io.seed = opts.seed;
  const bool certificate_applies = s.certificate && opts.eve_frame == "standard";
  if (certificate_applies && s.certificate->cols() <= r.nzbar) io.extra_starts.push_back(s.certificate->padded(r.nzbar));
  const IntrinsicEstimate est = intrinsic_upper_bound(p, r.nzbar, io);
  r.intrinsic_upper_bound = est.value;
  r.intrinsic_channel = est.best_channel;

  if (certificate_applies) {
    r.certificate_residual = verify_zero_certificate(p, *s.certificate, 1e-9).residual;
    r.certificate_valid = s.certificate_valid;
  }
  if (s.state) {
    const DensityMatrix rho = partial_trace_env(*s.state);
    r.ppt_min_eigenvalue = ppt_min_eigenvalue(rho);
    r.is_pure = is_pure(rho);
    if (opts.mu) {
      MuOptions mo = opts.mu_options;
      mo.seed = opts.seed;
      const MuEstimate m = mu_estimate(rho, mo);
      r.mu_estimate = m.value;
      r.mu_quality = m.quality == MuQuality::exact ? "exact" : "heuristic";
    }
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Locale-independent formatting with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_params(const std::map<std::string, double>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ';';
    out += k + '=' + format_number(v);
  }
  return out;
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "scenario",       "params",       "eve_frame",  "nzbar",      "seed",
      "restarts",       "mutual_information_xy",      "conditional_mutual_information",
      "ck_lower_bound", "intrinsic_upper_bound",      "certificate_residual",
      "certificate_valid", "ppt_min_eigenvalue",      "is_pure",    "mu_estimate",
      "mu_quality",     "elapsed_ms"};
  return cols;
}

inline std::string csv_header() {
  std::string h;
  for (const auto& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

namespace detail {

inline std::vector<std::string> record_fields(const ReportRecord& r) {
  auto opt_num = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  auto opt_bool = [](const std::optional<bool>& v) { return v ? std::string(*v ? "true" : "false") : std::string(); };
  return {r.scenario,
          format_params(r.params),
          r.eve_frame,
          std::to_string(r.nzbar),
          std::to_string(r.seed),
          std::to_string(r.restarts),
          format_number(r.mutual_information_xy),
          format_number(r.conditional_mutual_information),
          format_number(r.ck_lower_bound),
          format_number(r.intrinsic_upper_bound),
          opt_num(r.certificate_residual),
          opt_bool(r.certificate_valid),
          opt_num(r.ppt_min_eigenvalue),
          opt_bool(r.is_pure),
          opt_num(r.mu_estimate),
          r.mu_quality.value_or(""),
          format_number(r.elapsed_ms)};
}

}  // namespace detail

inline std::string csv_row(const ReportRecord& r) {
  std::string row;
  bool first = true;
  for (const auto& f : detail::record_fields(r)) {
    if (!first) row += ',';
    first = false;
    row += f;
  }
  return row;
}

inline void write_table(std::ostream& os, const ReportRecord& r) {
  const auto& cols = csv_columns();
  const auto fields = detail::record_fields(r);
  std::size_t width = 0;
  for (const auto& c : cols) width = std::max(width, c.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (fields[i].empty()) continue;
    os << cols[i] << std::string(width - cols[i].size() + 2, ' ') << fields[i] << '\n';
  }
}

inline nlohmann::json to_json(const ReportRecord& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["params"] = r.params;
  j["eve_frame"] = r.eve_frame;
  j["nzbar"] = r.nzbar;
  j["seed"] = r.seed;
  j["restarts"] = r.restarts;
  j["mutual_information_xy"] = r.mutual_information_xy;
  j["conditional_mutual_information"] = r.conditional_mutual_information;
  j["ck_lower_bound"] = r.ck_lower_bound;
  j["intrinsic_upper_bound"] = r.intrinsic_upper_bound;
  j["intrinsic_channel"] = {{"rows", r.intrinsic_channel.rows()}, {"cols", r.intrinsic_channel.cols()},
                            {"entries", r.intrinsic_channel.entries()}};
  if (r.certificate_residual) j["certificate_residual"] = *r.certificate_residual;
  if (r.certificate_valid) j["certificate_valid"] = *r.certificate_valid;
  if (r.ppt_min_eigenvalue) j["ppt_min_eigenvalue"] = *r.ppt_min_eigenvalue;
  if (r.is_pure) j["is_pure"] = *r.is_pure;
  if (r.mu_estimate) j["mu_estimate"] = *r.mu_estimate;
  if (r.mu_quality) j["mu_quality"] = *r.mu_quality;
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

}  // namespace qcka
