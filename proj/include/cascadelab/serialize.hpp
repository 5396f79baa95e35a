#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascadelab/filter.hpp"
#include "cascadelab/transfer.hpp"

namespace cascadelab {

using nlohmann::json;

// Filter file schema: { "name": str, "coefficients": [[re, im], ...] },
// or the shorthand { "theta": number } for the 4-tap family.
inline WaveletFilter filter_from_json(const json& j) {
  if (j.contains("theta")) {
    if (!j["theta"].is_number()) throw std::invalid_argument("filter: \"theta\" must be a number");
    return theta_family(j["theta"].get<double>());
  }
  if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
    throw std::invalid_argument("filter: missing \"coefficients\" array");
  }
  std::vector<Complex> taps;
  for (const json& c : j["coefficients"]) {
    if (c.is_number()) {
      taps.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && (c.size() == 1 || c.size() == 2)) {
      taps.emplace_back(c[0].get<double>(), c.size() == 2 ? c[1].get<double>() : 0.0);
    } else {
      throw std::invalid_argument("filter: coefficients must be numbers or [re, im] pairs");
    }
  }
  return WaveletFilter(std::move(taps), j.value("name", std::string()));
}

inline json filter_to_json(const WaveletFilter& f) {
  json coeffs = json::array();
  for (const Complex& a : f.taps()) coeffs.push_back({a.real(), a.imag()});
  json j;
  if (!f.name().empty()) j["name"] = f.name();
  j["coefficients"] = coeffs;
  return j;
}

inline json theta_filter_to_json(double theta) { return json{{"theta", theta}}; }

inline WaveletFilter load_filter(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open filter file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed filter file " + path + ": " + e.what());
  }
  return filter_from_json(j);
}

inline json spectral_report_to_json(const SpectralReport& report) {
  json evs = json::array();
  for (const EigenvalueCluster& c : report.eigenvalues) {
    evs.push_back({{"re", c.value.real()}, {"im", c.value.imag()}, {"mult", c.multiplicity}});
  }
  return json{{"eigenvalues", evs}, {"condition_e", report.condition_e}, {"gap", report.gap}};
}

inline json qmf_report_to_json(const QmfReport& report) {
  json v = json::array();
  for (const QmfViolation& x : report.violations) {
    v.push_back({{"condition", x.condition}, {"shift", x.shift}, {"residual", x.residual}});
  }
  return json{{"ok", report.ok()},
              {"max_residual", report.max_residual},
              {"tol", report.tol},
              {"violations", v}};
}

}  // namespace cascadelab
