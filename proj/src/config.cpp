#include "css_peaks/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "css_peaks/error.hpp"
#include "css_peaks/reduction.hpp"
#include "json_io.hpp"

namespace css {

namespace {

using nlohmann::json;

Vec2 read_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(std::string(what) + " must be a pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    potential.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  if (!(p > 2.0)) throw ConfigError("p must exceed 2");
  if (eps_list.empty()) throw ConfigError("eps_list must not be empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ConfigError("eps_list entries must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw ConfigError("eps_list must be strictly decreasing");
    }
  }
  try {
    grid.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  const double eps_min = eps_list.back();
  if (grid.h() > eps_min / 8.0 * (1.0 + 1e-12)) {
    throw ConfigError("grid spacing h = 2L/n exceeds min(eps_list)/8");
  }
  const double margin = grid.L / 4.0;
  for (const Well& w : potential.wells()) {
    for (double c : {w.a.x1, w.a.x2}) {
      if (c < -grid.L + margin || c > grid.L - grid.h() - margin) {
        throw ConfigError("well centre closer than L/4 to the grid boundary");
      }
    }
  }
  try {
    validate_delta(potential, delta);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  if (!(solver.tol > 0.0) || solver.max_iter < 0 || solver.max_halvings < 0 || solver.coarse_levels < 0 ||
      !(solver.coarse_tol > 0.0)) {
    throw ConfigError("solver settings must be positive");
  }
  if (probe.k_perturbations < 0 || !(probe.magnitude >= 0.0)) {
    throw ConfigError("probe settings must be non-negative");
  }
  if (!(pohozaev.d > 0.0) || pohozaev.options.m_quad < 8) {
    throw ConfigError("pohozaev settings out of range");
  }
  const int order = pohozaev.options.interp_order;
  if (order != 2 && order != 4 && order != 6) {
    throw ConfigError("pohozaev.interp_order must be 2, 4 or 6");
  }
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const json& pot = j.at("potential");
    std::vector<Well> wells;
    for (const json& w : pot.at("wells")) {
      Well well;
      well.a = read_vec(w.at("a"), "a");
      well.v_at_a = w.at("v_at_a").get<double>();
      if (w.contains("b")) well.b = read_vec(w.at("b"), "b");
      maybe(w, "m", well.m);
      maybe(w, "eta", well.eta);
      wells.push_back(well);
    }
    cfg.potential = PotentialSpec(std::move(wells), pot.at("v_inf").get<double>(),
                                  pot.value("theta", 1.0));
    cfg.p = j.value("p", 4.0);
    cfg.eps_list = j.at("eps_list").get<std::vector<double>>();
    if (j.contains("grid")) {
      cfg.grid.n = j["grid"].value("n", cfg.grid.n);
      cfg.grid.L = j["grid"].value("L", cfg.grid.L);
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      maybe(s, "tol", cfg.solver.tol);
      maybe(s, "max_iter", cfg.solver.max_iter);
      maybe(s, "max_halvings", cfg.solver.max_halvings);
      maybe(s, "max_linear_iter", cfg.solver.max_linear_iter);
      maybe(s, "max_forcing", cfg.solver.max_forcing);
      maybe(s, "coarse_levels", cfg.solver.coarse_levels);
      maybe(s, "coarse_tol", cfg.solver.coarse_tol);
    }
    maybe(j, "delta", cfg.delta);
    if (j.contains("probe")) {
      const json& s = j["probe"];
      maybe(s, "k_perturbations", cfg.probe.k_perturbations);
      maybe(s, "magnitude", cfg.probe.magnitude);
      maybe(s, "seed", cfg.probe.seed);
      maybe(s, "eps", cfg.probe.eps);
      maybe(s, "sup_threshold", cfg.probe.sup_threshold);
    }
    if (j.contains("pohozaev")) {
      const json& s = j["pohozaev"];
      maybe(s, "d", cfg.pohozaev.d);
      maybe(s, "offset", cfg.pohozaev.offset);
      maybe(s, "threshold", cfg.pohozaev.threshold);
      maybe(s, "m_quad", cfg.pohozaev.options.m_quad);
      maybe(s, "interp_order", cfg.pohozaev.options.interp_order);
      if (s.contains("volume")) {
        const auto v = s["volume"].get<std::string>();
        if (v == "sharp") {
          cfg.pohozaev.options.volume = VolumeQuadrature::Sharp;
        } else if (v == "polar") {
          cfg.pohozaev.options.volume = VolumeQuadrature::Polar;
        } else {
          throw ConfigError("pohozaev.volume must be \"sharp\" or \"polar\"");
        }
      }
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  auto wells = nlohmann::ordered_json::array();
  for (const Well& w : cfg.potential.wells()) {
    wells.push_back({{"a", {w.a.x1, w.a.x2}},
                     {"v_at_a", w.v_at_a},
                     {"b", {w.b.x1, w.b.x2}},
                     {"m", w.m},
                     {"eta", w.eta}});
  }
  j["potential"] = {{"wells", wells}, {"v_inf", cfg.potential.v_inf()}, {"theta", cfg.potential.theta()}};
  j["p"] = cfg.p;
  j["eps_list"] = cfg.eps_list;
  j["grid"] = {{"n", cfg.grid.n}, {"L", cfg.grid.L}};
  j["solver"] = {{"tol", cfg.solver.tol},
                 {"max_iter", cfg.solver.max_iter},
                 {"max_halvings", cfg.solver.max_halvings},
                 {"max_linear_iter", cfg.solver.max_linear_iter},
                 {"max_forcing", cfg.solver.max_forcing},
                 {"coarse_levels", cfg.solver.coarse_levels},
                 {"coarse_tol", cfg.solver.coarse_tol}};
  j["delta"] = cfg.delta;
  j["probe"] = {{"k_perturbations", cfg.probe.k_perturbations},
                {"magnitude", cfg.probe.magnitude},
                {"seed", cfg.probe.seed},
                {"eps", cfg.probe.eps},
                {"sup_threshold", cfg.probe.sup_threshold}};
  j["pohozaev"] = {{"d", cfg.pohozaev.d},
                   {"offset", cfg.pohozaev.offset},
                   {"threshold", cfg.pohozaev.threshold},
                   {"m_quad", cfg.pohozaev.options.m_quad},
                   {"interp_order", cfg.pohozaev.options.interp_order},
                   {"volume", cfg.pohozaev.options.volume == VolumeQuadrature::Sharp ? "sharp" : "polar"}};
  j["output_dir"] = cfg.output_dir.string();
  return dump_json(j);
}

}  // namespace css
