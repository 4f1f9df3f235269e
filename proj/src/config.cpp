#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "helmholtz/experiments.hpp"

namespace helmholtz {

namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) {
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("config: bad value for '") + key + "': " + e.what());
    }
  }
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version", "rng",           "seed",          "lambda",           "n",
      "alphas",         "sampling",      "trials",        "noise_sigma",      "method",
      "m_min",          "m_max",         "square_order",  "omp_order",        "omp_step",
      "omp_max_iterations", "truth_terms", "redraw_truth", "truncation_factor", "truncate_all", "truncation_reference",
      "n_values",       "gcv_alpha",     "holdout_fraction", "repetitions",   "stratified",
      "kbound_dictionary", "kbound_m_min", "kbound_m_max", "r_exponent",       "k_search_grid"};
  return keys;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::FourierBesselLs: return "fourier_bessel_ls";
    case Method::PlaneWaveLs: return "plane_wave_ls";
    case Method::SquareFourierLs: return "square_fourier_ls";
    case Method::Omp: return "omp";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (Method m : {Method::FourierBesselLs, Method::PlaneWaveLs, Method::SquareFourierLs, Method::Omp})
    if (to_string(m) == text) return m;
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (schema_version != kConfigSchemaVersion)
    fail("unsupported schema_version " + std::to_string(schema_version) + " (expected " +
         std::to_string(kConfigSchemaVersion) + ")");
  if (rng != kRngAlgorithm) fail("rng must be '" + std::string(kRngAlgorithm) + "'");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (static_cast<int>(std::ceil(lambda)) + 40 > kMaxBesselOrder) fail("lambda too large for the Bessel tables");
  if (n < 1) fail("n must be positive");
  if (alphas.empty()) fail("alphas is empty");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) fail("alphas must lie in [0, 1]");
  if (trials < 1) fail("trials must be positive");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (m_min < 0 || m_max < m_min) fail("need 0 <= m_min <= m_max");
  if (m_max > kMaxBesselOrder) fail("m_max above the supported Bessel order");
  if (square_order < 0 || omp_order < 0) fail("square_order and omp_order must be non-negative");
  if (omp_step < 1) fail("omp_step must be positive");
  if (omp_max_iterations && *omp_max_iterations < 1) fail("omp_max_iterations must be positive");
  if (truth_terms < 1) fail("truth_terms must be positive");
  if (!(truncation_factor > 0.0)) fail("truncation_factor must be positive");
  if (n_values.empty()) fail("n_values is empty");
  for (auto v : n_values)
    if (v < 1) fail("n_values must be positive");
  if (!(gcv_alpha >= 0.0 && gcv_alpha <= 1.0)) fail("gcv_alpha must lie in [0, 1]");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) fail("holdout_fraction must lie in (0, 1)");
  if (repetitions < 1) fail("repetitions must be positive");
  if (kbound_m_min < 0 || kbound_m_max < kbound_m_min || kbound_m_max > kMaxBesselOrder)
    fail("need 0 <= kbound_m_min <= kbound_m_max <= 200");
  if (!(r_exponent > 0.0)) fail("r_exponent must be positive");
  if (k_search_grid < 2) fail("k_search_grid must be at least 2");
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (!j.contains("schema_version")) throw std::invalid_argument("config: missing schema_version");
  for (const auto& [key, value] : j.items())
    if (!known_keys().count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");

  ExperimentConfig c;
  read(j, "schema_version", c.schema_version);
  read(j, "rng", c.rng);
  read(j, "seed", c.seed);
  read(j, "lambda", c.lambda);
  read(j, "n", c.n);
  read(j, "alphas", c.alphas);
  if (j.contains("sampling")) c.sampling = parse_sampling_mode(j["sampling"].get<std::string>());
  read(j, "trials", c.trials);
  read(j, "noise_sigma", c.noise_sigma);
  if (j.contains("method")) c.method = parse_method(j["method"].get<std::string>());
  read(j, "m_min", c.m_min);
  read(j, "m_max", c.m_max);
  read(j, "square_order", c.square_order);
  read(j, "omp_order", c.omp_order);
  read(j, "omp_step", c.omp_step);
  if (j.contains("omp_max_iterations") && !j["omp_max_iterations"].is_null()) {
    int v = 0;
    read(j, "omp_max_iterations", v);
    c.omp_max_iterations = v;
  }
  read(j, "truth_terms", c.truth_terms);
  read(j, "redraw_truth", c.redraw_truth);
  read(j, "truncation_factor", c.truncation_factor);
  if (j.contains("truncation_reference")) {
    const auto ref = j["truncation_reference"].get<std::string>();
    if (ref == "truth")
      c.truncation_reference = ExperimentConfig::BoundReference::Truth;
    else if (ref == "samples")
      c.truncation_reference = ExperimentConfig::BoundReference::Samples;
    else
      throw std::invalid_argument("config: truncation_reference must be 'truth' or 'samples'");
  }
  read(j, "truncate_all", c.truncate_all);
  read(j, "n_values", c.n_values);
  read(j, "gcv_alpha", c.gcv_alpha);
  read(j, "holdout_fraction", c.holdout_fraction);
  read(j, "repetitions", c.repetitions);
  read(j, "stratified", c.stratified);
  if (j.contains("kbound_dictionary"))
    c.kbound_dictionary = parse_dictionary_kind(j["kbound_dictionary"].get<std::string>());
  read(j, "kbound_m_min", c.kbound_m_min);
  read(j, "kbound_m_max", c.kbound_m_max);
  read(j, "r_exponent", c.r_exponent);
  read(j, "k_search_grid", c.k_search_grid);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["rng"] = c.rng;
  j["seed"] = c.seed;
  j["lambda"] = c.lambda;
  j["n"] = c.n;
  j["alphas"] = c.alphas;
  j["sampling"] = std::string(to_string(c.sampling));
  j["trials"] = c.trials;
  j["noise_sigma"] = c.noise_sigma;
  j["method"] = std::string(to_string(c.method));
  j["m_min"] = c.m_min;
  j["m_max"] = c.m_max;
  j["square_order"] = c.square_order;
  j["omp_order"] = c.omp_order;
  j["omp_step"] = c.omp_step;
  j["omp_max_iterations"] = c.omp_max_iterations ? json(*c.omp_max_iterations) : json(nullptr);
  j["truth_terms"] = c.truth_terms;
  j["redraw_truth"] = c.redraw_truth;
  j["truncation_factor"] = c.truncation_factor;
  j["truncation_reference"] =
      c.truncation_reference == ExperimentConfig::BoundReference::Truth ? "truth" : "samples";
  j["truncate_all"] = c.truncate_all;
  j["n_values"] = c.n_values;
  j["gcv_alpha"] = c.gcv_alpha;
  j["holdout_fraction"] = c.holdout_fraction;
  j["repetitions"] = c.repetitions;
  j["stratified"] = c.stratified;
  j["kbound_dictionary"] = std::string(to_string(c.kbound_dictionary));
  j["kbound_m_min"] = c.kbound_m_min;
  j["kbound_m_max"] = c.kbound_m_max;
  j["r_exponent"] = c.r_exponent;
  j["k_search_grid"] = c.k_search_grid;
  return j.dump(2) + "\n";
}

}  // namespace helmholtz
