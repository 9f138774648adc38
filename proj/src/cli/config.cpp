#include <cmath>
#include <sstream>

#include "edgelab/cli.hpp"
#include "edgelab/error.hpp"

namespace edgelab::cli {

namespace {

json range(double from, double to, double step) {
  json out = json::array();
  const long n = std::lround((to - from) / step);
  for (long k = 0; k <= n; ++k) out.push_back(from + static_cast<double>(k) * step);
  return out;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

template <typename T>
T get(const json& doc, const char* section, const char* key) {
  try {
    return doc.at(section).at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(std::string(section) + "." + key + ": " + e.what());
  }
}

bool type_compatible(const json& target, const json& value) {
  if (target.is_null()) return true;
  if (target.is_number()) return value.is_number();
  if (target.is_boolean()) return value.is_boolean();
  if (target.is_string()) return value.is_string();
  if (target.is_array()) return value.is_array();
  if (target.is_object()) return value.is_object();
  return false;
}

}  // namespace

json default_config(const std::string& command) {
  json doc = {
      {"model",
       {{"t", 0.25},
        {"x", json::array()},
        {"y", json::array()},
        {"p", 3},
        {"N", 2},
        {"rates", "generic"},
        {"pi", json::array()},
        {"pihat", json::array()}}},
      {"sampling",
       {{"n_samples", 10000},
        {"seed", 20240601},
        {"seeds", 10},
        {"p_sweep", json::array()},
        {"tolerance", 0.05},
        {"bootstrap", 200}}},
      {"quadrature", {{"nodes_per_block", 40}, {"truncation", 14.0}, {"wedge_panels", 24}, {"circle_nodes", 256}}},
      {"thresholds", {{"xi_grid", json::array()}, {"times", {0.0}}, {"xis", {0.0}}}},
      {"kernel", {{"kind", "airy"}, {"t1", 0.0}, {"t2", 0.0}, {"x", {0.0}}, {"y", {0.0}}}},
      {"output", {{"path", ""}, {"format", "json"}}},
  };
  if (command == "simulate-lpp" || command == "simulate-wishart") {
    doc["sampling"]["n_samples"] = 1000;
    doc["output"]["format"] = "csv";
  } else if (command == "check-thm2") {
    doc["model"]["rates"] = "perturbed";
    doc["sampling"]["n_samples"] = 5000;
    doc["sampling"]["p_sweep"] = {64, 128, 256};
    doc["thresholds"]["xi_grid"] = range(-7.0, 4.0, 0.1);
  } else if (command == "check-thm4") {
    doc["model"]["rates"] = "perturbed";
    doc["sampling"]["p_sweep"] = {50, 100, 200};
    doc["kernel"]["kind"] = "scaled";
    doc["kernel"]["x"] = range(-2.0, 2.0, 1.0);
    doc["kernel"]["y"] = range(-2.0, 2.0, 1.0);
  } else if (command == "compare-joint") {
    doc["model"]["p"] = 6;
    doc["model"]["N"] = 6;
  } else if (command == "kernel-eval") {
    doc["output"]["format"] = "csv";
  } else if (command == "gap-prob") {
    doc["thresholds"]["xi_grid"] = range(-4.0, 2.0, 0.5);
    doc["output"]["format"] = "csv";
  } else if (command == "tw-table") {
    doc["thresholds"]["xi_grid"] = range(-5.0, 2.0, 0.25);
    doc["output"]["format"] = "csv";
  }
  return doc;
}

void merge_config(json& doc, const json& patch) {
  if (!patch.is_object()) config_error("config document must be a JSON object");
  for (auto it = patch.begin(); it != patch.end(); ++it) {
    if (!doc.contains(it.key())) config_error("unknown key '" + it.key() + "'");
    json& target = doc[it.key()];
    if (target.is_object()) {
      merge_config(target, it.value());
    } else {
      if (!type_compatible(target, it.value())) config_error("wrong type for '" + it.key() + "'");
      target = it.value();
    }
  }
}

void apply_override(json& doc, const std::string& dotted, const std::string& value) {
  json* node = &doc;
  std::istringstream parts(dotted);
  std::string key;
  while (std::getline(parts, key, '.')) {
    if (!node->is_object() || !node->contains(key)) config_error("unknown config path '" + dotted + "'");
    node = &(*node)[key];
  }
  if (node->is_object()) config_error("'" + dotted + "' is a section, not a field");
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) {
    if (node->is_array()) {
      // comma list: 1,2,3
      parsed = json::parse("[" + value + "]", nullptr, false);
      if (parsed.is_discarded()) config_error("cannot parse '" + value + "' for " + dotted);
    } else {
      parsed = value;
    }
  }
  if (node->is_array() && parsed.is_number()) parsed = json::array({parsed});
  if (!type_compatible(*node, parsed)) config_error("wrong type for " + dotted + ": '" + value + "'");
  *node = parsed;
}

ExperimentConfig parse_config(const std::string& command, const json& doc) {
  ExperimentConfig c;
  c.command = command;
  c.resolved = doc;

  c.model.t = get<double>(doc, "model", "t");
  c.model.x = get<std::vector<double>>(doc, "model", "x");
  c.model.y = get<std::vector<double>>(doc, "model", "y");
  c.model.p = get<int>(doc, "model", "p");
  c.model.N = get<int>(doc, "model", "N");
  c.model.rates = get<std::string>(doc, "model", "rates");
  c.model.pi = get<std::vector<double>>(doc, "model", "pi");
  c.model.pihat = get<std::vector<double>>(doc, "model", "pihat");

  c.sampling.n_samples = get<std::size_t>(doc, "sampling", "n_samples");
  c.sampling.seed = get<std::uint64_t>(doc, "sampling", "seed");
  c.sampling.seeds = get<int>(doc, "sampling", "seeds");
  c.sampling.p_sweep = get<std::vector<int>>(doc, "sampling", "p_sweep");
  c.sampling.tolerance = get<double>(doc, "sampling", "tolerance");
  c.sampling.bootstrap = get<int>(doc, "sampling", "bootstrap");

  c.quadrature.nodes_per_block = get<int>(doc, "quadrature", "nodes_per_block");
  c.quadrature.truncation = get<double>(doc, "quadrature", "truncation");
  c.quadrature.wedge_panels = get<int>(doc, "quadrature", "wedge_panels");
  c.quadrature.circle_nodes = get<int>(doc, "quadrature", "circle_nodes");

  c.thresholds.xi_grid = get<std::vector<double>>(doc, "thresholds", "xi_grid");
  c.thresholds.times = get<std::vector<double>>(doc, "thresholds", "times");
  c.thresholds.xis = get<std::vector<double>>(doc, "thresholds", "xis");

  c.kernel.kind = get<std::string>(doc, "kernel", "kind");
  c.kernel.t1 = get<double>(doc, "kernel", "t1");
  c.kernel.t2 = get<double>(doc, "kernel", "t2");
  c.kernel.x = get<std::vector<double>>(doc, "kernel", "x");
  c.kernel.y = get<std::vector<double>>(doc, "kernel", "y");

  c.output.path = get<std::string>(doc, "output", "path");
  c.output.format = get<std::string>(doc, "output", "format");

  const ModelConfig& m = c.model;
  if (!(m.t > 0.0 && m.t < 1.0)) config_error("model.t must lie in (0, 1)");
  for (double xi : m.x)
    for (double yj : m.y)
      if (!(xi > yj)) config_error("model.x entries must exceed every model.y entry");
  if (m.p < 1) config_error("model.p must be >= 1");
  if (m.N < 1 || m.N > m.p) config_error("model.N must satisfy 1 <= N <= p");
  if (m.rates != "generic" && m.rates != "perturbed" && m.rates != "explicit")
    config_error("model.rates must be generic, perturbed or explicit");
  if (m.rates == "explicit" &&
      (m.pi.size() != static_cast<std::size_t>(m.p) || m.pihat.size() != static_cast<std::size_t>(m.p)))
    config_error("explicit rates need model.pi and model.pihat of length p");
  if (c.sampling.n_samples < 1) config_error("sampling.n_samples must be >= 1");
  if (c.sampling.seeds < 1) config_error("sampling.seeds must be >= 1");
  if (c.sampling.bootstrap < 1) config_error("sampling.bootstrap must be >= 1");
  if (!(c.sampling.tolerance > 0.0)) config_error("sampling.tolerance must be positive");
  for (int p : c.sampling.p_sweep)
    if (p < 1) config_error("sampling.p_sweep entries must be >= 1");
  if (c.quadrature.nodes_per_block < 2) config_error("quadrature.nodes_per_block must be >= 2");
  if (!(c.quadrature.truncation > 0.0)) config_error("quadrature.truncation must be positive");
  if (c.quadrature.wedge_panels < 1) config_error("quadrature.wedge_panels must be >= 1");
  if (c.quadrature.circle_nodes < 8) config_error("quadrature.circle_nodes must be >= 8");
  if (c.thresholds.times.empty()) config_error("thresholds.times must not be empty");
  if (c.thresholds.times.size() != c.thresholds.xis.size())
    config_error("thresholds.times and thresholds.xis must have equal length");
  if (c.kernel.kind != "airy" && c.kernel.kind != "scaled" && c.kernel.kind != "finite")
    config_error("kernel.kind must be airy, scaled or finite");
  if (c.kernel.x.empty() || c.kernel.y.empty()) config_error("kernel.x and kernel.y must not be empty");
  if (c.output.format != "csv" && c.output.format != "json") config_error("output.format must be csv or json");
  return c;
}

ModelParams resolve_params(const ModelConfig& model) {
  if (model.rates == "explicit") return validate_params(model.pi, model.pihat);
  if (model.rates == "perturbed") return build_perturbed_params(resolve_spec(model), model.p);
  std::vector<double> pi(static_cast<std::size_t>(model.p)), pihat(static_cast<std::size_t>(model.p));
  for (int i = 0; i < model.p; ++i) {
    pi[static_cast<std::size_t>(i)] = 0.6 + 0.35 * i;
    pihat[static_cast<std::size_t>(i)] = 0.1 + 0.2 * i;
  }
  return validate_params(std::move(pi), std::move(pihat));
}

ScalingSpec resolve_spec(const ModelConfig& model) { return ScalingSpec(model.t, model.x, model.y); }

}  // namespace edgelab::cli
