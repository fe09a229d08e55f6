#include "ssr/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ssr/rng.hpp"

namespace ssr {

using nlohmann::json;

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::enhance: return "enhance";
    case ExperimentKind::sparsity: return "sparsity";
    case ExperimentKind::gap: return "gap";
    case ExperimentKind::irrelevant: return "irrelevant";
    case ExperimentKind::measures: return "measures";
  }
  return "enhance";
}

ExperimentKind experiment_from_string(std::string_view text) {
  for (auto kind : {ExperimentKind::enhance, ExperimentKind::sparsity, ExperimentKind::gap,
                    ExperimentKind::irrelevant, ExperimentKind::measures}) {
    if (to_string(kind) == text) return kind;
  }
  throw ConfigError("unknown experiment '" + std::string(text) + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.master_seed = 20240601;
  switch (kind) {
    case ExperimentKind::enhance:
      cfg.dim = 500;
      cfg.epsilon_grid = {0.05, 0.1, 0.2, 0.4};
      cfg.n_labeled = 20;
      cfg.n_unlabeled = 10000;
      cfg.n_seeds = 50;
      break;
    case ExperimentKind::sparsity:
      cfg.dim = 100;
      cfg.sigma = 1.0;
      cfg.epsilon_grid = {0.05, 0.1, 0.2};
      cfg.n_labeled = 20;
      cfg.n_unlabeled = 2000;
      cfg.n_seeds = 100;
      cfg.chime = ChimeConfig{};
      break;
    case ExperimentKind::gap:
      cfg.dim = 1000;
      cfg.sigma = 0.5 * std::pow(1000.0, 0.25);
      cfg.epsilon_grid = {0.5};
      cfg.n_grid = {1};
      cfg.n_labeled = 2;
      cfg.n_unlabeled = 10000;
      cfg.n_seeds = 50;
      break;
    case ExperimentKind::irrelevant:
      cfg.dim = 200;
      cfg.sigma = 1.0;
      cfg.epsilon_grid = {0.3};
      cfg.a_grid = {1.0};
      cfg.n_labeled = 10000;
      cfg.n_unlabeled = 10000;
      cfg.n_seeds = 50;
      break;
    case ExperimentKind::measures:
      cfg.dim = 5;
      cfg.sigma = 1.0;
      cfg.epsilon_grid = {0.0};
      cfg.n_labeled = 0;
      cfg.n_unlabeled = 0;
      cfg.n_seeds = 200;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (n_seeds < 1) throw ConfigError("n_seeds must be >= 1");
  if (epsilon_grid.empty()) throw ConfigError("epsilon_grid must be nonempty");
  for (std::size_t k = 0; k < epsilon_grid.size(); ++k) {
    if (!(epsilon_grid[k] >= 0.0) || !std::isfinite(epsilon_grid[k])) throw ConfigError("epsilon_grid entries must be >= 0");
    if (k > 0 && !(epsilon_grid[k] > epsilon_grid[k - 1])) throw ConfigError("epsilon_grid must be strictly increasing");
  }
  if (sigma && (!(*sigma > 0.0) || !std::isfinite(*sigma))) throw ConfigError("sigma must be > 0");
  if (!sigma && experiment != ExperimentKind::enhance) throw ConfigError("sigma is required");
  if (!sigma && !(sigma_ratio > 0.0)) throw ConfigError("sigma_ratio must be > 0");
  if (!sigma && epsilon_grid.front() == 0.0) throw ConfigError("epsilon = 0 needs an explicit sigma");
  if (!(mean_scale > 0.0) || !std::isfinite(mean_scale)) throw ConfigError("mean_scale must be > 0");
  const bool single_eps = experiment == ExperimentKind::gap || experiment == ExperimentKind::irrelevant;
  if (single_eps && epsilon_grid.size() != 1) throw ConfigError("this experiment takes a single epsilon");
  switch (experiment) {
    case ExperimentKind::enhance:
      if (n_labeled < 2 || n_labeled % 2 != 0) throw ConfigError("n_labeled must be even and >= 2");
      if (n_unlabeled < 2) throw ConfigError("n_unlabeled must be >= 2");
      break;
    case ExperimentKind::sparsity:
      if (n_labeled < 2 || n_labeled % 2 != 0) throw ConfigError("n_labeled must be even and >= 2");
      if (n_unlabeled < 2) throw ConfigError("n_unlabeled must be >= 2");
      if (support_size < 1 || support_size > dim) throw ConfigError("support_size must lie in [1, dim]");
      if (shifted_sign_flips < 0 || shifted_sign_flips > support_size) {
        throw ConfigError("shifted_sign_flips must lie in [0, support_size]");
      }
      if (!(gap_multiplier > 0.0)) throw ConfigError("gap_multiplier must be > 0");
      if (chime) {
        try {
          chime->validate(static_cast<Eigen::Index>(dim));
        } catch (const Error& e) {
          throw ConfigError(std::string("chime: ") + e.what());
        }
      }
      break;
    case ExperimentKind::gap:
      if (n_grid.empty()) throw ConfigError("n_grid must be nonempty");
      for (std::size_t k = 0; k < n_grid.size(); ++k) {
        if (n_grid[k] < 1) throw ConfigError("n_grid entries must be >= 1");
        if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw ConfigError("n_grid must be strictly increasing");
      }
      if (n_unlabeled < 2) throw ConfigError("n_unlabeled must be >= 2");
      if (!(shift_scale > 0.0) || !std::isfinite(shift_scale)) throw ConfigError("shift_scale must be > 0");
      break;
    case ExperimentKind::irrelevant:
      if (dim < 2) throw ConfigError("irrelevant construction needs dim >= 2");
      if (n_labeled < 2 || n_labeled % 2 != 0) throw ConfigError("n_labeled must be even and >= 2");
      if (n_unlabeled < 2) throw ConfigError("n_unlabeled must be >= 2");
      if (a_grid.empty()) throw ConfigError("a_grid must be nonempty");
      for (std::size_t k = 0; k < a_grid.size(); ++k) {
        if (!(a_grid[k] > 0.0)) throw ConfigError("a_grid entries must be > 0");
        if (k > 0 && !(a_grid[k] > a_grid[k - 1])) throw ConfigError("a_grid must be strictly increasing");
      }
      break;
    case ExperimentKind::measures:
      break;
  }
}

double ExperimentConfig::sigma_at(double epsilon) const {
  if (sigma) return *sigma;
  const double inv = 1.0 / static_cast<double>(dim) + 1.0 / static_cast<double>(n_unlabeled);
  return epsilon * std::sqrt(sigma_ratio / inv);
}

namespace {

const char* scaling_name(ChimeConfig::SigmaScaling s) {
  return s == ChimeConfig::SigmaScaling::paper_literal ? "paper_literal" : "variance_scaled";
}

json chime_to_json(const ChimeConfig& cfg) {
  json out = {{"c1", cfg.c1},
              {"c_lambda", cfg.c_lambda},
              {"kappa", cfg.kappa},
              {"t_max", cfg.t_max},
              {"sigma_scaling", scaling_name(cfg.sigma_scaling)}};
  if (cfg.s) out["s"] = *cfg.s;
  if (cfg.init_mu1) out["init_mu1"] = std::vector<double>(cfg.init_mu1->begin(), cfg.init_mu1->end());
  if (cfg.init_mu2) out["init_mu2"] = std::vector<double>(cfg.init_mu2->begin(), cfg.init_mu2->end());
  return out;
}

template <class T>
T take(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

ChimeConfig chime_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("chime must be an object");
  ChimeConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    if (key == "c1") {
      cfg.c1 = take<double>(doc, "c1");
    } else if (key == "c_lambda") {
      cfg.c_lambda = take<double>(doc, "c_lambda");
    } else if (key == "kappa") {
      cfg.kappa = take<double>(doc, "kappa");
    } else if (key == "t_max") {
      cfg.t_max = take<int>(doc, "t_max");
    } else if (key == "s") {
      cfg.s = take<std::int64_t>(doc, "s");
    } else if (key == "sigma_scaling") {
      const auto text = take<std::string>(doc, "sigma_scaling");
      if (text == "paper_literal") {
        cfg.sigma_scaling = ChimeConfig::SigmaScaling::paper_literal;
      } else if (text == "variance_scaled") {
        cfg.sigma_scaling = ChimeConfig::SigmaScaling::variance_scaled;
      } else {
        throw ConfigError("unknown sigma_scaling '" + text + "'");
      }
    } else if (key == "init_mu1" || key == "init_mu2") {
      const auto values = take<std::vector<double>>(doc, key.c_str());
      Vector v = Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
      (key == "init_mu1" ? cfg.init_mu1 : cfg.init_mu2) = std::move(v);
    } else {
      throw ConfigError("unknown chime field '" + key + "'");
    }
  }
  return cfg;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string to_json(const ChimeConfig& cfg) { return chime_to_json(cfg).dump(); }

ChimeConfig parse_chime_config(std::string_view json_text) { return chime_from_json(parse_json(json_text)); }

std::string ExperimentConfig::to_json() const {
  json out = {{"experiment", std::string(to_string(experiment))},
              {"dim", dim},
              {"epsilon_grid", epsilon_grid},
              {"n_labeled", n_labeled},
              {"n_unlabeled", n_unlabeled},
              {"n_seeds", n_seeds},
              {"master_seed", master_seed},
              {"output_dir", output_dir},
              {"mean_scale", mean_scale}};
  if (sigma) {
    out["sigma"] = *sigma;
  } else {
    out["sigma_ratio"] = sigma_ratio;
  }
  if (chime) out["chime"] = chime_to_json(*chime);
  switch (experiment) {
    case ExperimentKind::sparsity:
      out["support_size"] = support_size;
      out["gap_multiplier"] = gap_multiplier;
      out["shifted_sign_flips"] = shifted_sign_flips;
      out["force_full_support"] = force_full_support;
      break;
    case ExperimentKind::gap:
      out["n_grid"] = n_grid;
      out["shift_scale"] = shift_scale;
      break;
    case ExperimentKind::irrelevant:
      out["a_grid"] = a_grid;
      break;
    default:
      break;
  }
  return out.dump();
}

std::uint64_t ExperimentConfig::digest() const {
  json doc = json::parse(to_json());
  doc.erase("output_dir");
  return fnv1a(doc.dump());
}

ExperimentConfig parse_config(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("experiment")) throw ConfigError("config needs an 'experiment' field");
  ExperimentConfig cfg = default_config(experiment_from_string(take<std::string>(doc, "experiment")));
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") continue;
    if (key == "dim") {
      cfg.dim = take<std::int64_t>(doc, "dim");
    } else if (key == "sigma") {
      if (value.is_null() || (value.is_string() && value.get<std::string>() == "auto")) {
        cfg.sigma.reset();
      } else {
        cfg.sigma = take<double>(doc, "sigma");
      }
    } else if (key == "sigma_ratio") {
      cfg.sigma_ratio = take<double>(doc, "sigma_ratio");
    } else if (key == "epsilon_grid") {
      cfg.epsilon_grid = take<std::vector<double>>(doc, "epsilon_grid");
    } else if (key == "n_labeled") {
      cfg.n_labeled = take<std::int64_t>(doc, "n_labeled");
    } else if (key == "n_unlabeled") {
      cfg.n_unlabeled = take<std::int64_t>(doc, "n_unlabeled");
    } else if (key == "n_seeds") {
      cfg.n_seeds = take<std::int64_t>(doc, "n_seeds");
    } else if (key == "master_seed") {
      cfg.master_seed = take<std::uint64_t>(doc, "master_seed");
    } else if (key == "chime") {
      if (value.is_null()) {
        cfg.chime.reset();
      } else {
        cfg.chime = chime_from_json(value);
      }
    } else if (key == "output_dir") {
      cfg.output_dir = take<std::string>(doc, "output_dir");
    } else if (key == "mean_scale") {
      cfg.mean_scale = take<double>(doc, "mean_scale");
    } else if (key == "support_size") {
      cfg.support_size = take<std::int64_t>(doc, "support_size");
    } else if (key == "gap_multiplier") {
      cfg.gap_multiplier = take<double>(doc, "gap_multiplier");
    } else if (key == "shifted_sign_flips") {
      cfg.shifted_sign_flips = take<std::int64_t>(doc, "shifted_sign_flips");
    } else if (key == "force_full_support") {
      cfg.force_full_support = take<bool>(doc, "force_full_support");
    } else if (key == "n_grid") {
      cfg.n_grid = take<std::vector<std::int64_t>>(doc, "n_grid");
    } else if (key == "shift_scale") {
      cfg.shift_scale = take<double>(doc, "shift_scale");
    } else if (key == "a_grid") {
      cfg.a_grid = take<std::vector<double>>(doc, "a_grid");
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace ssr
