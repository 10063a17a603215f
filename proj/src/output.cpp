/**
 * @file output.cpp
 */
#include "stokes_biot/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace stokes_biot {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string rate_cell(const std::optional<double>& r) {
  if (!r) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *r);
  return buf;
}

std::vector<std::vector<std::string>> table_cells(const std::vector<ErrorReport>& reports) {
  const auto rates = convergence_rates(reports);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    std::vector<std::string> row{std::to_string(reports[k].n)};
    for (int j = 0; j < kNormCount; ++j) {
      row.push_back(sci(reports[k].errors[j]));
      row.push_back(k == 0 ? "0.0" : rate_cell(rates[k - 1][j]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> table_header() {
  std::vector<std::string> h{"n"};
  for (int j = 0; j < kNormCount; ++j) {
    h.push_back(column_name(static_cast<Norm>(j)));
    h.push_back(std::string("rate_") + to_string(static_cast<Norm>(j)));
  }
  return h;
}

}  // namespace

void write_csv_table(std::ostream& out, const std::vector<ErrorReport>& reports) {
  const auto header = table_header();
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : table_cells(reports)) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_csv_table(const std::string& path, const std::vector<ErrorReport>& reports) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv_table(out, reports);
  if (!out) throw std::runtime_error("write failed for " + path);
}

void print_rate_table(std::ostream& out, const std::vector<ErrorReport>& reports) {
  const auto header = table_header();
  const auto rows = table_cells(reports);
  out << std::left << std::setw(5) << header[0];
  for (int j = 0; j < kNormCount; ++j) {
    out << std::setw(15) << header[1 + 2 * j] << std::setw(6) << "rate";
  }
  out << "\n";
  for (const auto& row : rows) {
    out << std::setw(5) << row[0];
    for (int j = 0; j < kNormCount; ++j) {
      out << std::setw(15) << row[1 + 2 * j] << std::setw(6) << row[2 + 2 * j];
    }
    out << "\n";
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  };
  if (!std::getline(in, line)) return t;
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split(line));
    if (t.rows.back().size() != t.header.size()) {
      throw std::runtime_error("csv row has " + std::to_string(t.rows.back().size()) +
                               " cells, header has " + std::to_string(t.header.size()));
    }
  }
  return t;
}

void write_vtk(const std::string& path, const std::string& title, const Mesh& mesh,
               const VtkFields& fields) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(10);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  const int nv = mesh.num_vertices(), nt = mesh.num_triangles();
  out << "POINTS " << nv << " double\n";
  for (int v = 0; v < nv; ++v) out << mesh.vertex(v).x() << " " << mesh.vertex(v).y() << " 0\n";
  out << "CELLS " << nt << " " << 4 * nt << "\n";
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangle(t);
    out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
  out << "CELL_TYPES " << nt << "\n";
  for (int t = 0; t < nt; ++t) out << "5\n";

  if (!fields.point_scalars.empty() || !fields.point_vectors.empty()) {
    out << "POINT_DATA " << nv << "\n";
    for (const auto& [name, values] : fields.point_scalars) {
      if (static_cast<int>(values.size()) != nv) throw std::invalid_argument(name + ": size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << "\n";
    }
    for (const auto& [name, values] : fields.point_vectors) {
      if (static_cast<int>(values.size()) != nv) throw std::invalid_argument(name + ": size");
      out << "VECTORS " << name << " double\n";
      for (const Vec2& v : values) out << v.x() << " " << v.y() << " 0\n";
    }
  }
  if (!fields.cell_scalars.empty()) {
    out << "CELL_DATA " << nt << "\n";
    for (const auto& [name, values] : fields.cell_scalars) {
      if (static_cast<int>(values.size()) != nt) throw std::invalid_argument(name + ": size");
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) out << v << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

VtkGrid read_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  auto fail = [&path](const std::string& what) {
    throw std::runtime_error(path + ": " + what);
  };
  VtkGrid g;
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile Version", 0) != 0) fail("missing VTK header");
  std::getline(in, g.title);
  std::getline(in, line);
  if (line != "ASCII") fail("not an ASCII file");
  std::getline(in, line);
  if (line != "DATASET UNSTRUCTURED_GRID") fail("not an unstructured grid");

  std::string word;
  enum class Section { None, Point, Cell } section = Section::None;
  std::size_t section_size = 0;
  while (in >> word) {
    if (word == "POINTS") {
      std::size_t n;
      std::string type;
      in >> n >> type;
      g.points.resize(n);
      for (auto& p : g.points) in >> p[0] >> p[1] >> p[2];
    } else if (word == "CELLS") {
      std::size_t n, total;
      in >> n >> total;
      std::size_t count = 0;
      g.cells.resize(n);
      for (auto& c : g.cells) {
        int k;
        in >> k;
        c.resize(k);
        for (int& v : c) {
          in >> v;
          if (v < 0 || static_cast<std::size_t>(v) >= g.points.size()) fail("cell index out of range");
        }
        count += k + 1;
      }
      if (count != total) fail("CELLS size field does not match");
    } else if (word == "CELL_TYPES") {
      std::size_t n;
      in >> n;
      if (n != g.cells.size()) fail("CELL_TYPES count does not match CELLS");
      g.cell_types.resize(n);
      for (int& t : g.cell_types) in >> t;
    } else if (word == "POINT_DATA") {
      in >> section_size;
      if (section_size != g.points.size()) fail("POINT_DATA count does not match POINTS");
      section = Section::Point;
    } else if (word == "CELL_DATA") {
      in >> section_size;
      if (section_size != g.cells.size()) fail("CELL_DATA count does not match CELLS");
      section = Section::Cell;
    } else if (word == "SCALARS") {
      std::string name, type;
      in >> name >> type;
      std::getline(in, line);
      in >> word >> line;
      if (word != "LOOKUP_TABLE") fail("SCALARS without LOOKUP_TABLE");
      std::vector<double> values(section_size);
      for (double& v : values) in >> v;
      if (section == Section::Point) g.point_scalars[name] = values;
      else if (section == Section::Cell) g.cell_scalars[name] = values;
      else fail("SCALARS outside a data section");
    } else if (word == "VECTORS") {
      std::string name, type;
      in >> name >> type;
      if (section != Section::Point) fail("VECTORS outside POINT_DATA");
      std::vector<std::array<double, 3>> values(section_size);
      for (auto& v : values) in >> v[0] >> v[1] >> v[2];
      g.point_vectors[name] = values;
    } else {
      fail("unexpected token '" + word + "'");
    }
    if (in.fail()) fail("truncated section " + word);
  }
  if (g.points.empty() || g.cells.empty()) fail("missing POINTS or CELLS");
  return g;
}

namespace {

// Vertex values by averaging a cellwise evaluation over the incident triangles.
std::vector<Vec2> vertex_average(const Mesh& mesh,
                                 const std::function<Vec2(int cell, const Vec2& xhat)>& f) {
  std::vector<Vec2> sum(mesh.num_vertices(), Vec2::Zero());
  std::vector<int> count(mesh.num_vertices(), 0);
  const std::array<Vec2, 3> corners{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.triangle(t)[k];
      sum[v] += f(t, corners[k]);
      ++count[v];
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (count[v]) sum[v] /= count[v];
  }
  return sum;
}

}  // namespace

VtkFields fluid_vtk_fields(const Discretization& d, const BlockSystem& sys,
                           const SolutionState& s) {
  VtkFields f;
  const Eigen::VectorXd uf = s.field(sys, Field::Uf);
  const Eigen::VectorXd pf = s.field(sys, Field::Pf);
  const int nv = d.fluid.num_vertices();
  std::vector<Vec2> u(nv);
  std::vector<double> p(nv);
  // bubbles vanish at vertices, so the vertex coefficients are the nodal values
  for (int v = 0; v < nv; ++v) {
    u[v] = Vec2(uf[v], uf[nv + v]);
    p[v] = pf[v];
  }
  f.point_vectors["u_f"] = u;
  f.point_scalars["p_f"] = p;
  return f;
}

VtkFields poro_vtk_fields(const Discretization& d, const BlockSystem& sys,
                          const SolutionState& s) {
  VtkFields f;
  const Mesh& m = d.poro;
  const Eigen::VectorXd up = s.field(sys, Field::Up);
  const Eigen::VectorXd us = s.field(sys, Field::Us);
  const Eigen::VectorXd sg = s.field(sys, Field::SigmaP);
  const Eigen::VectorXd pp = s.field(sys, Field::Pp);
  const Eigen::VectorXd eta =
      s.eta.size() ? s.eta : Eigen::VectorXd::Zero(sys.field_size(Field::Us));

  f.point_vectors["eta_p"] = vertex_average(m, [&](int t, const Vec2& xh) {
    return evaluate(m, d.space(Field::Us), eta, t, xh).head<2>().eval();
  });
  f.point_vectors["u_p_plus_u_s"] = vertex_average(m, [&](int t, const Vec2& xh) {
    return (evaluate(m, d.space(Field::Up), up, t, xh).head<2>() +
            evaluate(m, d.space(Field::Us), us, t, xh).head<2>())
        .eval();
  });

  const int nt = m.num_triangles();
  std::vector<double> p(nt), s12(nt), s22(nt);
  const auto& rule = quadrature_rule(CellKind::Triangle, 2);
  for (int t = 0; t < nt; ++t) {
    p[t] = evaluate(m, d.space(Field::Pp), pp, t, Vec2(1.0 / 3, 1.0 / 3))[0];
    FieldValue mean = FieldValue::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      mean += 2.0 * rule.weights[q] * evaluate(m, d.space(Field::SigmaP), sg, t, rule.points[q]);
    }
    s12[t] = -mean[1];
    s22[t] = -mean[3];
  }
  f.cell_scalars["p_p"] = p;
  f.cell_scalars["minus_sigma_12"] = s12;
  f.cell_scalars["minus_sigma_22"] = s22;
  return f;
}

std::string vtk_step_name(const std::string& domain, int step) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d.vtk", domain.c_str(), step);
  return buf;
}

void write_vtk_step(const std::string& out_dir, const Discretization& d,
                    const BlockSystem& sys, const SolutionState& s) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::ostringstream title;
  title << "step " << s.step << " t=" << s.t;
  write_vtk((dir / vtk_step_name("fluid", s.step)).string(), "fluid " + title.str(), d.fluid,
            fluid_vtk_fields(d, sys, s));
  write_vtk((dir / vtk_step_name("poro", s.step)).string(), "poro " + title.str(), d.poro,
            poro_vtk_fields(d, sys, s));
}

void write_vtk_series(const std::string& out_dir, const Discretization& d,
                      const BlockSystem& sys, const std::vector<SolutionState>& states) {
  for (const auto& s : states) {
    if (s.step >= 1) write_vtk_step(out_dir, d, sys, s);
  }
}

}  // namespace stokes_biot
