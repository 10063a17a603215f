/**
 * @file config.hpp
 * @brief Run configuration: INI-style files with [domain], [params], [time], [output].
 */
#pragma once

#include "stokes_biot/assembly.hpp"

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace stokes_biot {

enum class Scenario { Converge, Hydro };
enum class GridCase { Matching, FineStokes, FineBiot };

const char* to_string(Scenario s);
const char* to_string(GridCase g);
GridCase parse_grid_case(const std::string& name);

struct RunConfig {
  Scenario scenario = Scenario::Converge;
  GridCase grid = GridCase::Matching;
  std::vector<int> levels{8, 16, 32, 64};
  int hydro_case = 1;
  int hydro_n = 16;  // cells per unit length in the hydro run
  double dt = 1e-3;
  double T = 0.01;
  PhysicalParams params;
  std::string csv_path = "convergence.csv";
  std::string out_dir = "out";

  bool operator==(const RunConfig& other) const;
};

/// Material row of the sensitivity study: case 1, 2 or 3.
PhysicalParams hydro_case_params(int hydro_case);

/// Defaults: dt = 1e-3, T = 0.01 for converge; dt = 0.06, T = 3 for hydro.
RunConfig default_config(Scenario scenario);

/// Throws std::invalid_argument naming the offending key.
void validate(const RunConfig& config);

RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);
std::string render_config(const RunConfig& config);

/// "8,16,32" -> {8, 16, 32}.
std::vector<int> parse_levels(const std::string& text);

/// Command-line values that replace file values.
struct ConfigOverrides {
  std::optional<std::string> grid_case;
  std::optional<int> hydro_case;
  std::optional<std::string> levels;
  std::optional<int> hydro_n;
  std::optional<double> dt;
  std::optional<double> T;
  std::optional<std::string> csv_path;
  std::optional<std::string> out_dir;
};

/// Applies the overrides and validates. A hydro case override also resets the
/// material parameters to that case's row.
void apply_overrides(RunConfig& config, const ConfigOverrides& overrides);

}  // namespace stokes_biot
