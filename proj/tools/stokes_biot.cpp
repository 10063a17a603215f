// Command-line driver: convergence study and surface/subsurface flow runs.
#include "stokes_biot/config.hpp"
#include "stokes_biot/output.hpp"
#include "stokes_biot/parallel.hpp"
#include "stokes_biot/scenarios.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace stokes_biot;

namespace {

struct Args {
  std::string config_file;
  ConfigOverrides o;
  std::string grid_case, hydro_case, levels, out, out_dir;
  double dt = 0, T = 0;
  int n = 0;
};

bool given(const CLI::App& app, const std::string& name) {
  const CLI::Option* opt = app.get_option_no_throw(name);
  return opt && opt->count() > 0;
}

void collect(const CLI::App& app, Args& a) {
  if (given(app, "--case")) a.o.grid_case = a.grid_case;
  if (given(app, "--levels")) a.o.levels = a.levels;
  if (given(app, "--dt")) a.o.dt = a.dt;
  if (given(app, "--T")) a.o.T = a.T;
  if (given(app, "--out")) a.o.csv_path = a.out;
  if (given(app, "--n")) a.o.hydro_n = a.n;
  if (given(app, "--out-dir")) a.o.out_dir = a.out_dir;
}

RunConfig load(Scenario scenario, const Args& args) {
  RunConfig c = default_config(scenario);
  if (!args.config_file.empty()) {
    c = parse_config_file(args.config_file);
    if (c.scenario != scenario) {
      throw std::invalid_argument("domain.scenario in " + args.config_file + " is " +
                                  to_string(c.scenario) + ", not " + to_string(scenario));
    }
  }
  apply_overrides(c, args.o);
  return c;
}

int converge(const RunConfig& c) {
  std::vector<ErrorReport> reports;
  std::cerr << "converge: case " << to_string(c.grid) << ", dt " << c.dt << ", T " << c.T << "\n";
  run_convergence(c, [&](const ConvergenceLevel& level) {
    reports.push_back(level.report);
    std::cerr << "  n = " << level.report.n << ": " << level.unknowns << " unknowns\n";
  });
  print_rate_table(std::cout, reports);
  write_csv_table(c.csv_path, reports);
  std::cerr << "wrote " << c.csv_path << "\n";
  return 0;
}

int hydro(const RunConfig& c) {
  std::cerr << "hydro: case " << c.hydro_case << ", n " << c.hydro_n << ", dt " << c.dt
            << ", T " << c.T << "\n";
  const HydroSummary s = run_hydro(c);
  std::cout << "steps " << s.steps << "\n"
            << "finite " << (s.finite ? "yes" : "no") << "\n"
            << "max p_p oscillation " << s.max_oscillation << "\n"
            << "interface -sigma_22 vs p_p mismatch " << s.interface_mismatch << "\n"
            << "max solve residual " << s.worst_solve_residual << "\n";
  if (!c.out_dir.empty()) std::cerr << "wrote VTK files to " << c.out_dir << "\n";
  return s.finite ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Stokes / Biot solver"};
  app.require_subcommand(0, 1);

  Args ca, ha;
  auto* conv = app.add_subcommand("converge", "Convergence study against the manufactured solution");
  conv->add_option("--config", ca.config_file, "INI config file");
  conv->add_option("--case", ca.grid_case, "matching | fine-stokes | fine-biot");
  conv->add_option("--levels", ca.levels, "Comma-separated mesh levels, e.g. 8,16,32");
  conv->add_option("--dt", ca.dt, "Time step");
  conv->add_option("--T", ca.T, "Final time");
  conv->add_option("--out", ca.out, "CSV output path");

  auto* hyd = app.add_subcommand("hydro", "Surface/subsurface flow run");
  hyd->add_option("--config", ha.config_file, "INI config file");
  hyd->add_option("--case", ha.hydro_case, "Parameter case 1 | 2 | 3");
  hyd->add_option("--n", ha.n, "Cells per unit length");
  hyd->add_option("--dt", ha.dt, "Time step");
  hyd->add_option("--T", ha.T, "Final time");
  hyd->add_option("--out-dir", ha.out_dir, "Directory for VTK files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (!conv->parsed() && !hyd->parsed()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    if (conv->parsed()) {
      collect(*conv, ca);
      return converge(load(Scenario::Converge, ca));
    }
    collect(*hyd, ha);
    if (given(*hyd, "--case")) {
      try {
        std::size_t used = 0;
        ha.o.hydro_case = std::stoi(ha.hydro_case, &used);
        if (used != ha.hydro_case.size()) throw std::invalid_argument(ha.hydro_case);
      } catch (const std::exception&) {
        throw std::invalid_argument("case: hydro case must be 1, 2 or 3");
      }
      ha.o.grid_case.reset();
    }
    return hydro(load(Scenario::Hydro, ha));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
