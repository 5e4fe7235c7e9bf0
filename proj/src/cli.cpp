#include "airy/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "airy/cases.hpp"
#include "airy/config.hpp"
#include "airy/errors.hpp"
#include "airy/output.hpp"

namespace airy {

namespace {

std::pair<int, int> parse_int_pair(const std::string& v, const std::string& flag) {
  const auto comma = v.find(',');
  try {
    if (comma != std::string::npos)
      return {std::stoi(v.substr(0, comma)), std::stoi(v.substr(comma + 1))};
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(flag, "expected two integers 'a,b'");
}

struct Job {
  CaseDefinition def;
  SolveOptions options;
  SampleGrid grid;
  std::filesystem::path out_dir;
};

void run_job(const Job& job) {
  const Solution sol = solve_case(job.def, job.options);
  export_case(job.out_dir, job.def, sol, job.grid);
  const std::vector<Patch> solved = apply_solution(job.def, sol);
  const ErrorReport errors = compute_errors(solved, job.def);

  std::cout << "case " << job.def.name << ": N=" << sol.phi.size()
            << " |D|=" << sol.free_set.size() << " energy=" << sol.energy
            << " mode=" << sol.diag.mode << '\n';
  auto print_err = [](const char* k, const std::optional<double>& v) {
    std::cout << "  l2_error[" << k << "] = ";
    if (v)
      std::cout << *v << '\n';
    else
      std::cout << "unavailable\n";
  };
  print_err("sigma_xx", errors.l2_sxx);
  print_err("sigma_yy", errors.l2_syy);
  print_err("sigma_xy", errors.l2_sxy);
  std::cout << "  wrote " << (job.out_dir / "stress.csv").string() << ", "
            << (job.out_dir / "report.txt").string() << '\n';
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Plane-stress solver minimizing complementary energy over spline stress functions"};
  app.name("solve");

  std::string case_name, config_path, degrees, net, samples, bc_mode;
  double aspect = 0.0, bc_weight = 0.0;
  int quadrature = 0;
  std::string output_dir = "out";
  bool all = false;

  app.add_option("--case", case_name, "built-in case name");
  app.add_option("--config", config_path, "case description file");
  app.add_flag("--all", all, "run every built-in case");
  app.add_option("--aspect", aspect, "beam span-to-half-height ratio");
  app.add_option("--degrees", degrees, "spline degrees p,q");
  app.add_option("--net", net, "control net size n,m");
  app.add_option("--quadrature", quadrature, "Gauss points per direction per knot span");
  app.add_option("--bc-mode", bc_mode, "two-stage or combined");
  app.add_option("--bc-weight", bc_weight, "boundary weight for combined mode");
  app.add_option("--samples", samples, "export sample grid NX,NY");
  app.add_option("--output", output_dir, "output directory");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const int sources = (!case_name.empty() ? 1 : 0) + (!config_path.empty() ? 1 : 0) + (all ? 1 : 0);
  if (sources != 1) {
    std::cerr << "usage error: give exactly one of --case, --config, --all\n";
    return 2;
  }
  if (!config_path.empty() && (!degrees.empty() || !net.empty() || aspect != 0.0)) {
    std::cerr << "usage error: with --config, set degrees/net/aspect in the file's sections\n";
    return 2;
  }

  try {
    SolveOptions base_options;
    SampleGrid base_grid;
    std::vector<Job> jobs;

    auto apply_cli = [&](SolveOptions& options, SampleGrid& grid, CaseDefinition& def) {
      if (!bc_mode.empty()) {
        if (bc_mode == "two-stage")
          options.mode = SolveMode::TwoStage;
        else if (bc_mode == "combined")
          options.mode = SolveMode::Combined;
        else
          throw ConfigError("unknown --bc-mode '" + bc_mode + "'");
      }
      if (bc_weight != 0.0) options.bc_weight = bc_weight;
      if (!samples.empty()) std::tie(grid.nx, grid.ny) = parse_int_pair(samples, "--samples");
      if (quadrature > 0) def.quad_points = quadrature;
    };

    auto make_overrides = [&](const std::string& name) {
      CaseOverrides ov;
      if (aspect != 0.0 && name == "beam-uniform-load") ov.aspect = aspect;
      if (!degrees.empty()) ov.degrees = parse_int_pair(degrees, "--degrees");
      if (!net.empty()) ov.net = parse_int_pair(net, "--net");
      if (quadrature > 0) ov.quadrature = quadrature;
      return ov;
    };

    if (all) {
      for (const std::string& name : builtin_case_names) {
        Job job{build_case(name, make_overrides(name)), base_options, base_grid,
                std::filesystem::path(output_dir) / name};
        apply_cli(job.options, job.grid, job.def);
        jobs.push_back(std::move(job));
      }
    } else if (!case_name.empty()) {
      if (aspect != 0.0 && case_name != "beam-uniform-load")
        throw ConfigError("--aspect applies only to beam-uniform-load");
      Job job{build_case(case_name, make_overrides(case_name)), base_options, base_grid,
              output_dir};
      apply_cli(job.options, job.grid, job.def);
      jobs.push_back(std::move(job));
    } else {
      ParsedConfig parsed = parse_config(config_path);
      Job job{std::move(parsed.definition), parsed.options, parsed.grid, output_dir};
      apply_cli(job.options, job.grid, job.def);
      jobs.push_back(std::move(job));
    }

    for (const Job& job : jobs) run_job(job);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("solve");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace airy
