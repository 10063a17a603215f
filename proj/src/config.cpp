/**
 * @file config.cpp
 */
#include "stokes_biot/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stokes_biot {

namespace pt = boost::property_tree;

const char* to_string(Scenario s) { return s == Scenario::Converge ? "converge" : "hydro"; }

const char* to_string(GridCase g) {
  switch (g) {
    case GridCase::Matching: return "matching";
    case GridCase::FineStokes: return "fine-stokes";
    case GridCase::FineBiot: return "fine-biot";
  }
  return "?";
}

GridCase parse_grid_case(const std::string& name) {
  if (name == "matching") return GridCase::Matching;
  if (name == "fine-stokes") return GridCase::FineStokes;
  if (name == "fine-biot") return GridCase::FineBiot;
  throw std::invalid_argument("case: unknown grid case '" + name +
                              "' (expected matching, fine-stokes or fine-biot)");
}

bool RunConfig::operator==(const RunConfig& o) const {
  const auto& a = params;
  const auto& b = o.params;
  return scenario == o.scenario && grid == o.grid && levels == o.levels &&
         hydro_case == o.hydro_case && hydro_n == o.hydro_n && dt == o.dt && T == o.T &&
         a.mu == b.mu && a.K == b.K && a.alpha == b.alpha && a.alpha_bjs == b.alpha_bjs &&
         a.s0 == b.s0 && a.lambda_p == b.lambda_p && a.mu_p == b.mu_p &&
         csv_path == o.csv_path && out_dir == o.out_dir;
}

PhysicalParams hydro_case_params(int hydro_case) {
  PhysicalParams p;
  switch (hydro_case) {
    case 1:
      break;
    case 2:
      p.K = 1e-4 * Mat2::Identity();
      p.s0 = 1e-4;
      p.lambda_p = 1e6;
      break;
    case 3:
      p.K = 1e-4 * Mat2::Identity();
      p.s0 = 1e-4;
      p.lambda_p = 1e6;
      p.mu_p = 1e6;
      break;
    default:
      throw std::invalid_argument("case: hydro case must be 1, 2 or 3");
  }
  return p;
}

RunConfig default_config(Scenario scenario) {
  RunConfig c;
  c.scenario = scenario;
  if (scenario == Scenario::Hydro) {
    c.dt = 0.06;
    c.T = 3.0;
    c.params = hydro_case_params(1);
  }
  return c;
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!(c.dt > 0) || !std::isfinite(c.dt)) fail("dt must be positive");
  if (!(c.T > 0) || !std::isfinite(c.T)) fail("T must be positive");
  const double ratio = c.T / c.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    fail("T must be an integer multiple of dt");
  }
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    fail(std::string("params: ") + e.what());
  }
  if (c.scenario == Scenario::Converge) {
    if (c.levels.empty()) fail("levels must not be empty");
    for (std::size_t k = 0; k < c.levels.size(); ++k) {
      if (c.levels[k] <= 0) fail("levels must be positive");
      if (k > 0 && c.levels[k] != 2 * c.levels[k - 1]) {
        fail("levels must double from one entry to the next");
      }
      if (c.grid != GridCase::Matching && c.levels[k] % 8 != 0) {
        fail("levels must be multiples of 8 for non-matching grids");
      }
    }
  } else {
    if (c.hydro_case < 1 || c.hydro_case > 3) fail("case: hydro case must be 1, 2 or 3");
    if (c.hydro_n <= 0) fail("n must be positive");
  }
}

std::vector<int> parse_levels(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("levels: '" + item + "' is not an integer");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("levels: '" + item + "' is not an integer");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("levels: empty list");
  return out;
}

namespace {

double get_double(const pt::ptree& node, const std::string& key) {
  const std::string v = node.get_value<std::string>();
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": '" + v + "' is not a number");
  }
}

int get_int(const pt::ptree& node, const std::string& key) {
  const double d = get_double(node, key);
  if (d != std::floor(d)) throw std::invalid_argument(key + ": expected an integer");
  return static_cast<int>(d);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.message());
  }

  const std::set<std::string> sections{"domain", "params", "time", "output"};
  for (const auto& [name, node] : tree) {
    if (node.empty() && !node.data().empty()) throw std::invalid_argument("unknown key '" + name + "' outside a section");
    if (!sections.count(name)) throw std::invalid_argument("unknown section [" + name + "]");
  }

  Scenario scenario = Scenario::Converge;
  if (auto d = tree.get_child_optional("domain")) {
    if (auto s = d->get_optional<std::string>("scenario")) {
      if (*s == "converge") scenario = Scenario::Converge;
      else if (*s == "hydro") scenario = Scenario::Hydro;
      else throw std::invalid_argument("domain.scenario: unknown scenario '" + *s + "'");
    }
  }
  RunConfig c = default_config(scenario);

  if (auto d = tree.get_child_optional("domain")) {
    for (const auto& [key, node] : *d) {
      const std::string full = "domain." + key;
      if (key == "scenario") continue;
      if (key == "case") {
        const std::string v = node.get_value<std::string>();
        if (scenario == Scenario::Converge) {
          c.grid = parse_grid_case(v);
        } else {
          c.hydro_case = get_int(node, full);
          c.params = hydro_case_params(c.hydro_case);
        }
      } else if (key == "levels") {
        c.levels = parse_levels(node.get_value<std::string>());
      } else if (key == "n") {
        c.hydro_n = get_int(node, full);
      } else {
        throw std::invalid_argument("unknown key '" + full + "'");
      }
    }
  }
  if (auto p = tree.get_child_optional("params")) {
    for (const auto& [key, node] : *p) {
      const std::string full = "params." + key;
      const double v = get_double(node, full);
      PhysicalParams& q = c.params;
      if (key == "mu") q.mu = v;
      else if (key == "K_xx") q.K(0, 0) = v;
      else if (key == "K_xy") q.K(0, 1) = v;
      else if (key == "K_yx") q.K(1, 0) = v;
      else if (key == "K_yy") q.K(1, 1) = v;
      else if (key == "alpha") q.alpha = v;
      else if (key == "alpha_bjs") q.alpha_bjs = v;
      else if (key == "s0") q.s0 = v;
      else if (key == "lambda_p") q.lambda_p = v;
      else if (key == "mu_p") q.mu_p = v;
      else throw std::invalid_argument("unknown key '" + full + "'");
    }
  }
  if (auto t = tree.get_child_optional("time")) {
    for (const auto& [key, node] : *t) {
      const std::string full = "time." + key;
      if (key == "dt") c.dt = get_double(node, full);
      else if (key == "T") c.T = get_double(node, full);
      else throw std::invalid_argument("unknown key '" + full + "'");
    }
  }
  if (auto o = tree.get_child_optional("output")) {
    for (const auto& [key, node] : *o) {
      if (key == "csv") c.csv_path = node.get_value<std::string>();
      else if (key == "out_dir") c.out_dir = node.get_value<std::string>();
      else throw std::invalid_argument("unknown key 'output." + key + "'");
    }
  }
  validate(c);
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return parse_config(in);
}

std::string render_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[domain]\n";
  out << "scenario = " << to_string(c.scenario) << "\n";
  if (c.scenario == Scenario::Converge) {
    out << "case = " << to_string(c.grid) << "\n";
    out << "levels = ";
    for (std::size_t k = 0; k < c.levels.size(); ++k) out << (k ? "," : "") << c.levels[k];
    out << "\n";
  } else {
    out << "case = " << c.hydro_case << "\n";
    out << "n = " << c.hydro_n << "\n";
  }
  const auto& p = c.params;
  out << "\n[params]\n";
  out << "mu = " << fmt(p.mu) << "\n";
  out << "K_xx = " << fmt(p.K(0, 0)) << "\n";
  out << "K_xy = " << fmt(p.K(0, 1)) << "\n";
  out << "K_yx = " << fmt(p.K(1, 0)) << "\n";
  out << "K_yy = " << fmt(p.K(1, 1)) << "\n";
  out << "alpha = " << fmt(p.alpha) << "\n";
  out << "alpha_bjs = " << fmt(p.alpha_bjs) << "\n";
  out << "s0 = " << fmt(p.s0) << "\n";
  out << "lambda_p = " << fmt(p.lambda_p) << "\n";
  out << "mu_p = " << fmt(p.mu_p) << "\n";
  out << "\n[time]\n";
  out << "dt = " << fmt(c.dt) << "\n";
  out << "T = " << fmt(c.T) << "\n";
  out << "\n[output]\n";
  out << "csv = " << c.csv_path << "\n";
  out << "out_dir = " << c.out_dir << "\n";
  return out.str();
}

void apply_overrides(RunConfig& c, const ConfigOverrides& o) {
  if (c.scenario == Scenario::Converge) {
    if (o.grid_case) c.grid = parse_grid_case(*o.grid_case);
    if (o.levels) c.levels = parse_levels(*o.levels);
  } else if (o.hydro_case) {
    if (*o.hydro_case < 1 || *o.hydro_case > 3) {
      throw std::invalid_argument("case: hydro case must be 1, 2 or 3");
    }
    c.hydro_case = *o.hydro_case;
    c.params = hydro_case_params(c.hydro_case);
  }
  if (o.hydro_n) c.hydro_n = *o.hydro_n;
  if (o.dt) c.dt = *o.dt;
  if (o.T) c.T = *o.T;
  if (o.csv_path) c.csv_path = *o.csv_path;
  if (o.out_dir) c.out_dir = *o.out_dir;
  validate(c);
}

}  // namespace stokes_biot
