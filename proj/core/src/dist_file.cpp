#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mmpe/model.hpp"

namespace mmpe {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("dist file: bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

DistributionSpec from_json(const nlohmann::json& j) {
  DistributionSpec s;
  s.kind = j.at("kind").get<std::string>();
  if (j.contains("n")) s.n = j.at("n").get<int>();
  if (j.contains("sigma2")) s.sigma2 = j.at("sigma2").get<double>();
  if (j.contains("radius")) s.radius = j.at("radius").get<double>();
  if (j.contains("points")) s.points = j.at("points").get<int>();
  if (j.contains("spacing")) s.spacing = j.at("spacing").get<double>();
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      if (a.is_array()) {
        s.atoms.push_back(a.get<std::vector<double>>());
      } else if (a.is_object()) {
        const auto& x = a.at("x");
        s.atoms.push_back(x.is_array() ? x.get<std::vector<double>>() : std::vector<double>{x.get<double>()});
        s.probs.push_back(a.at("p").get<double>());
      } else {
        s.atoms.push_back({a.get<double>()});
      }
    }
  }
  if (j.contains("probs")) s.probs = j.at("probs").get<std::vector<double>>();
  if (j.contains("grid")) s.grid = j.at("grid").get<std::vector<double>>();
  if (j.contains("density")) s.density = j.at("density").get<std::vector<double>>();
  return s;
}

DistributionSpec from_key_values(const std::string& text) {
  DistributionSpec s;
  std::stringstream ss(text);
  std::string line;
  bool has_kind = false;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("dist file: expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "kind") {
      s.kind = val;
      has_kind = true;
    } else if (key == "n") {
      s.n = std::stoi(val);
    } else if (key == "sigma2") {
      s.sigma2 = std::stod(val);
    } else if (key == "radius") {
      s.radius = std::stod(val);
    } else if (key == "points") {
      s.points = std::stoi(val);
    } else if (key == "spacing") {
      s.spacing = std::stod(val);
    } else if (key == "atoms") {
      std::stringstream as(val);
      std::string atom;
      while (std::getline(as, atom, ';'))
        if (!trim(atom).empty()) s.atoms.push_back(parse_list(atom));
    } else if (key == "probs") {
      s.probs = parse_list(val);
    } else if (key == "grid") {
      s.grid = parse_list(val);
    } else if (key == "density") {
      s.density = parse_list(val);
    } else {
      throw std::invalid_argument("dist file: unknown key '" + key + "'");
    }
  }
  if (!has_kind) throw std::invalid_argument("dist file: missing 'kind'");
  return s;
}

}  // namespace

InputDistribution build_distribution(const DistributionSpec& spec) {
  if (spec.kind == "gaussian") return make_gaussian(spec.sigma2, spec.n);
  if (spec.kind == "atoms") {
    if (spec.atoms.empty()) throw std::invalid_argument("atoms: no atoms given");
    if (spec.probs.empty()) {
      std::vector<double> p(spec.atoms.size(), 1.0 / static_cast<double>(spec.atoms.size()));
      return make_atoms(spec.atoms, p);
    }
    return make_atoms(spec.atoms, spec.probs);
  }
  if (spec.kind == "pam") return make_uniform_pam(spec.points, spec.spacing);
  if (spec.kind == "pmone") return make_pm_one_vector(spec.n);
  if (spec.kind == "uniform_ball") return make_uniform_ball(spec.n, spec.radius);
  if (spec.kind == "tabulated") return make_tabulated(spec.grid, spec.density);
  throw std::invalid_argument("unknown distribution kind '" + spec.kind + "'");
}

DistributionSpec parse_distribution_text(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '{') {
    try {
      return from_json(nlohmann::json::parse(t));
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("dist file: ") + e.what());
    }
  }
  return from_key_values(t);
}

DistributionSpec load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open distribution file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_distribution_text(ss.str());
}

}  // namespace mmpe
