#pragma once

// Scenario files: a named catalog entry with its parameters, or an inline
// distribution or pure state given as sparse cell lists.
//
//   {"scenario": "werner", "lambda": 0.5}
//   {"kind": "distribution", "alphabets": [nx, ny, nz], "cells": [[x, y, z, p], ...]}
//   {"kind": "pure_state", "dims": [dA, dB, dE], "amplitudes": [[a, b, e, re, im], ...]}
//
// Inline objects may also carry "name", "params", a "certificate"
// {"rows", "cols", "entries", "valid"}, and (pure states only) "cells", the
// standard-basis distribution, which must agree with the state within 1e-10.

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "qcka/catalog.hpp"
#include "qcka/errors.hpp"

namespace qcka {

inline constexpr double kInlineNormalizationTolerance = 1e-9;

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return j.at(key);
}

inline std::size_t as_index(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ValidationError("field '" + field + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

inline double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ValidationError("field '" + field + "' must be a number");
  return v.get<double>();
}

inline std::array<std::size_t, 3> read_dims(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ValidationError("field '" + field + "' must be an array of three sizes");
  std::array<std::size_t, 3> d{};
  for (std::size_t i = 0; i < 3; ++i) {
    d[i] = as_index(j[i], field);
    if (d[i] == 0) throw ValidationError("field '" + field + "' must hold positive sizes");
  }
  return d;
}

inline std::map<Cell, double> read_cells(const json& j, const std::array<std::size_t, 3>& n) {
  if (!j.is_array()) throw ValidationError("field 'cells' must be an array");
  std::map<Cell, double> m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = "cells[" + std::to_string(i) + "]";
    const json& c = j[i];
    if (!c.is_array() || c.size() != 4) throw ValidationError("field '" + f + "' must be [x, y, z, p]");
    Cell cell{as_index(c[0], f), as_index(c[1], f), as_index(c[2], f)};
    for (std::size_t k = 0; k < 3; ++k)
      if (cell[k] >= n[k]) throw ValidationError("field '" + f + "' is outside the alphabets");
    const double p = as_real(c[3], f);
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("field '" + f + "' has a negative or non-finite probability");
    if (!m.emplace(cell, p).second) throw ValidationError("field '" + f + "' repeats a cell");
  }
  return m;
}

// Renormalized once when the total is within 1e-9 of 1.
inline JointDistribution inline_distribution(const std::array<std::size_t, 3>& n, std::map<Cell, double> m) {
  double total = 0.0;
  for (const auto& [c, p] : m) total += p;
  if (std::abs(total - 1.0) > kInlineNormalizationTolerance)
    throw ValidationError("field 'cells': probabilities sum to " + std::to_string(total) + ", not 1");
  if (std::abs(total - 1.0) > JointDistribution::kTolerance)
    for (auto& [c, p] : m) p /= total;
  return JointDistribution(n[0], n[1], n[2], std::move(m));
}

inline PureState inline_state(const json& j) {
  const auto d = read_dims(require(j, "dims", "pure_state"), "dims");
  const json& a = require(j, "amplitudes", "pure_state");
  if (!a.is_array()) throw ValidationError("field 'amplitudes' must be an array");
  std::vector<cplx> amp(d[0] * d[1] * d[2], cplx{});
  std::vector<bool> seen(amp.size(), false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string f = "amplitudes[" + std::to_string(i) + "]";
    const json& c = a[i];
    if (!c.is_array() || c.size() != 5) throw ValidationError("field '" + f + "' must be [a, b, e, re, im]");
    const std::size_t ia = as_index(c[0], f), ib = as_index(c[1], f), ie = as_index(c[2], f);
    if (ia >= d[0] || ib >= d[1] || ie >= d[2]) throw ValidationError("field '" + f + "' is outside the dimensions");
    const std::size_t k = (ia * d[1] + ib) * d[2] + ie;
    if (seen[k]) throw ValidationError("field '" + f + "' repeats an amplitude");
    seen[k] = true;
    amp[k] = cplx(as_real(c[3], f), as_real(c[4], f));
  }
  double n2 = 0.0;
  for (const auto& c : amp) n2 += std::norm(c);
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kInlineNormalizationTolerance)
    throw ValidationError("field 'amplitudes': squared norm " + std::to_string(n2) + " is not 1");
  if (std::abs(n2 - 1.0) > PureState::kTolerance) return PureState::from_unnormalized(d[0], d[1], d[2], std::move(amp));
  return PureState(d[0], d[1], d[2], std::move(amp));
}

inline void read_inline_extras(const json& j, Scenario& s) {
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ValidationError("field 'name' must be a string");
    s.name = j["name"].get<std::string>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ValidationError("field 'params' must be an object");
    for (const auto& [k, v] : j["params"].items()) s.params[k] = as_real(v, "params." + k);
  }
  if (j.contains("certificate")) {
    const json& c = j["certificate"];
    const std::size_t rows = as_index(require(c, "rows", "certificate"), "certificate.rows");
    const std::size_t cols = as_index(require(c, "cols", "certificate"), "certificate.cols");
    const json& e = require(c, "entries", "certificate");
    if (!e.is_array()) throw ValidationError("field 'certificate.entries' must be an array");
    std::vector<double> w;
    for (const auto& v : e) w.push_back(as_real(v, "certificate.entries"));
    s.certificate = Channel(rows, cols, std::move(w));
    s.certificate_valid = c.contains("valid") && c["valid"].is_boolean() && c["valid"].get<bool>();
  }
}

}  // namespace detail

/// Parses a scenario document; `source` names it in diagnostics.
inline Scenario parse_scenario(const std::string& text, const std::string& source = "<input>") {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(source + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(source + ": top level must be an object");

  try {
    if (j.contains("scenario")) {
      if (!j["scenario"].is_string()) throw ValidationError("field 'scenario' must be a string");
      std::map<std::string, double> params;
      for (const auto& [k, v] : j.items())
        if (k != "scenario") params[k] = detail::as_real(v, k);
      return make_scenario(j["scenario"].get<std::string>(), params);
    }
    const json& kind = detail::require(j, "kind", "scenario file");
    if (kind == "distribution") {
      const auto n = detail::read_dims(detail::require(j, "alphabets", "distribution"), "alphabets");
      Scenario s;
      s.name = "inline";
      s.distribution = detail::inline_distribution(n, detail::read_cells(detail::require(j, "cells", "distribution"), n));
      detail::read_inline_extras(j, s);
      return s;
    }
    if (kind == "pure_state") {
      Scenario s;
      s.name = "inline";
      s.state = detail::inline_state(j);
      const auto& psi = *s.state;
      const JointDistribution measured = measure_standard(psi);
      if (j.contains("cells")) {
        const std::array<std::size_t, 3> n{psi.dA(), psi.dB(), psi.dE()};
        JointDistribution given = detail::inline_distribution(n, detail::read_cells(j["cells"], n));
        for (std::size_t x = 0; x < n[0]; ++x)
          for (std::size_t y = 0; y < n[1]; ++y)
            for (std::size_t z = 0; z < n[2]; ++z)
              if (std::abs(given(x, y, z) - measured(x, y, z)) > 1e-10)
                throw ValidationError("field 'cells' disagrees with the state's standard-basis distribution");
        s.distribution = std::move(given);
      } else {
        s.distribution = measured;
      }
      detail::attach_standard_frame(s);
      detail::read_inline_extras(j, s);
      return s;
    }
    throw ValidationError("field 'kind' must be \"distribution\" or \"pure_state\"");
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

/// Inline form of a scenario: its state (with the distribution as "cells")
/// when it has one, otherwise its distribution.
inline nlohmann::json export_scenario(const Scenario& s) {
  using nlohmann::json;
  json j;
  json cells = json::array();
  if (s.distribution)
    for (const auto& [c, p] : s.distribution->cells()) cells.push_back({c[0], c[1], c[2], p});
  if (s.state) {
    const auto& psi = *s.state;
    j["kind"] = "pure_state";
    j["dims"] = {psi.dA(), psi.dB(), psi.dE()};
    json amp = json::array();
    for (std::size_t a = 0; a < psi.dA(); ++a)
      for (std::size_t b = 0; b < psi.dB(); ++b)
        for (std::size_t e = 0; e < psi.dE(); ++e)
          if (const cplx v = psi(a, b, e); v != cplx{}) amp.push_back({a, b, e, v.real(), v.imag()});
    j["amplitudes"] = std::move(amp);
    if (s.distribution) j["cells"] = std::move(cells);
  } else if (s.distribution) {
    const auto& p = *s.distribution;
    j["kind"] = "distribution";
    j["alphabets"] = {p.nx(), p.ny(), p.nz()};
    j["cells"] = std::move(cells);
  } else {
    throw ValidationError("export_scenario: scenario has neither a state nor a distribution");
  }
  j["name"] = s.name;
  if (!s.params.empty()) j["params"] = s.params;
  if (s.certificate)
    j["certificate"] = {{"rows", s.certificate->rows()}, {"cols", s.certificate->cols()},
                        {"entries", s.certificate->entries()}, {"valid", s.certificate_valid}};
  return j;
}

}  // namespace qcka
