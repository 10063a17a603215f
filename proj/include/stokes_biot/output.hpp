/**
 * @file output.hpp
 * @brief Convergence tables (CSV and console) and legacy ASCII VTK files.
 */
#pragma once

#include "stokes_biot/mms.hpp"
#include "stokes_biot/system.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace stokes_biot {

/// Columns n, then (e_<norm>, rate_<norm>) for each norm in table order.
/// Errors use %.3e, rates %.1f, and the first level's rates are "0.0".
void write_csv_table(std::ostream& out, const std::vector<ErrorReport>& reports);
void write_csv_table(const std::string& path, const std::vector<ErrorReport>& reports);

/// Fixed-width version of the same table for the terminal.
void print_rate_table(std::ostream& out, const std::vector<ErrorReport>& reports);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(std::istream& in);

/// Parsed legacy VTK unstructured grid, enough to check the files we write.
struct VtkGrid {
  std::string title;
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<int>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> point_scalars;
  std::map<std::string, std::vector<std::array<double, 3>>> point_vectors;
  std::map<std::string, std::vector<double>> cell_scalars;
};

/// Throws std::runtime_error on a malformed or inconsistent file.
VtkGrid read_vtk(const std::string& path);

/// Arrays attached to one mesh.
struct VtkFields {
  std::map<std::string, std::vector<double>> point_scalars;
  std::map<std::string, std::vector<Vec2>> point_vectors;
  std::map<std::string, std::vector<double>> cell_scalars;
};

void write_vtk(const std::string& path, const std::string& title, const Mesh& mesh,
               const VtkFields& fields);

/// Fluid: u_f and p_f at vertices. Poro: eta_p and u_p + u_s at vertices;
/// cell averages of p_p, -sigma_12 and -sigma_22.
VtkFields fluid_vtk_fields(const Discretization& disc, const BlockSystem& system,
                           const SolutionState& state);
VtkFields poro_vtk_fields(const Discretization& disc, const BlockSystem& system,
                          const SolutionState& state);

/// Writes fluid_<step>.vtk and poro_<step>.vtk (step zero-padded to 4 digits).
void write_vtk_step(const std::string& out_dir, const Discretization& disc,
                    const BlockSystem& system, const SolutionState& state);

/// One file pair per state with step >= 1.
void write_vtk_series(const std::string& out_dir, const Discretization& disc,
                      const BlockSystem& system, const std::vector<SolutionState>& states);

std::string vtk_step_name(const std::string& domain, int step);

}  // namespace stokes_biot
