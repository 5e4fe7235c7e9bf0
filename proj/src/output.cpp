#include "airy/output.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "airy/errors.hpp"

namespace airy {

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

} // namespace

ErrorReport compute_errors(const std::vector<Patch>& solved, const CaseDefinition& def) {
  ErrorReport report;
  if (!def.reference_available) return report;
  auto component = [&](int c) -> std::optional<double> {
    try {
      return l2_relative_error(solved, def, c);
    } catch (const Error&) {
      return std::nullopt; // reference component vanishes identically
    }
  };
  report.l2_sxx = component(0);
  report.l2_syy = component(1);
  report.l2_sxy = component(2);
  return report;
}

void write_stress_csv(const std::filesystem::path& path, const std::vector<Patch>& solved,
                      const SampleGrid& grid) {
  if (grid.nx < 2 || grid.ny < 2) throw IoError("sample grid needs at least 2x2 points");
  std::ofstream out = open_out(path);
  out << "patch,xi,eta,x,y,sigma_xx,sigma_yy,sigma_xy\n";
  for (size_t p = 0; p < solved.size(); ++p) {
    for (int j = 0; j < grid.ny; ++j) {
      const double eta = static_cast<double>(j) / (grid.ny - 1);
      for (int i = 0; i < grid.nx; ++i) {
        const double xi = static_cast<double>(i) / (grid.nx - 1);
        const Eigen::Vector2d pos = solved[p].mapping.map(xi, eta);
        const Eigen::Vector3d s = stress_at(solved[p], xi, eta);
        out << p << ',' << num17(xi) << ',' << num17(eta) << ',' << num17(pos.x()) << ','
            << num17(pos.y()) << ',' << num17(s(0)) << ',' << num17(s(1)) << ',' << num17(s(2))
            << '\n';
      }
    }
  }
}

void write_report(const std::filesystem::path& path, const CaseDefinition& def,
                  const Solution& sol, const ErrorReport& errors) {
  std::ofstream out = open_out(path);
  out << "case = " << def.name << '\n';
  out << "dofs_total = " << sol.phi.size() << '\n';
  out << "dofs_constrained = " << sol.constrained.size() << '\n';
  out << "dofs_free = " << sol.free_set.size() << '\n';
  out << "energy = " << num17(sol.energy) << '\n';
  out << "solver_mode = " << sol.diag.mode << '\n';
  out << "solver_gauge = " << sol.diag.gauge << '\n';
  out << "solver_pinned = " << sol.diag.pinned << '\n';
  out << "solver_involved = " << sol.diag.involved << '\n';
  out << "solver_bc_rank = " << sol.diag.bc_rank << '\n';
  out << "solver_bc_rank_deficient = " << (sol.diag.bc_rank_deficient ? 1 : 0) << '\n';
  out << "solver_bc_stage_residual = " << num17(sol.diag.bc_stage_residual) << '\n';
  out << "solver_condition_estimate = " << num17(sol.diag.condition_estimate) << '\n';
  out << "solver_gradient_norm = " << num17(sol.diag.gradient_norm) << '\n';

  const Patch& first = def.patches.front();
  const auto [nx, ny] = patch_quad_points(first, def.quad_points);
  out << "quadrature_points_xi = " << nx << '\n';
  out << "quadrature_points_eta = " << ny << '\n';
  out << "edge_quadrature_points = " << edge_quad_points(first) << '\n';

  out << "bc_count = " << def.bcs.size() << '\n';
  for (size_t i = 0; i < def.bcs.size(); ++i) {
    const BoundarySpec& spec = def.bcs[i];
    out << "bc[" << i << "].label = " << spec.label << '\n';
    out << "bc[" << i << "].kind = " << bc_kind_name(spec.kind) << '\n';
    out << "bc[" << i << "].weight = " << num17(spec.weight) << '\n';
    out << "bc[" << i << "].residual = "
        << (i < sol.bc_residuals.size() ? num17(sol.bc_residuals[i]) : "unavailable") << '\n';
  }

  auto put_error = [&](const char* key, const std::optional<double>& v) {
    out << key << " = " << (v ? num17(*v) : "unavailable") << '\n';
  };
  put_error("l2_error_sigma_xx", errors.l2_sxx);
  put_error("l2_error_sigma_yy", errors.l2_syy);
  put_error("l2_error_sigma_xy", errors.l2_sxy);

  for (size_t i = 0; i < def.notes.size(); ++i)
    out << "note[" << i << "] = " << def.notes[i] << '\n';
}

void write_profiles(const std::filesystem::path& dir, const CaseDefinition& def,
                    const std::vector<Patch>& solved, int samples) {
  for (double station : def.profile_stations) {
    std::ostringstream name;
    name << "profile_x" << station << ".csv";
    std::ofstream out = open_out(dir / name.str());
    out << "patch,eta,x,y,sigma_xx,sigma_yy,sigma_xy\n";
    for (size_t p = 0; p < solved.size(); ++p) {
      const Mapping& m = solved[p].mapping;
      const double y_mid = m.map(0.5, 0.5).y();
      std::array<double, 2> par;
      try {
        par = m.invert(station, y_mid);
      } catch (const MappingError&) {
        continue; // station outside this patch
      }
      for (int j = 0; j < samples; ++j) {
        const double eta = static_cast<double>(j) / (samples - 1);
        const Eigen::Vector2d pos = m.map(par[0], eta);
        const Eigen::Vector3d s = stress_at(solved[p], par[0], eta);
        out << p << ',' << num17(eta) << ',' << num17(pos.x()) << ',' << num17(pos.y()) << ','
            << num17(s(0)) << ',' << num17(s(1)) << ',' << num17(s(2)) << '\n';
      }
    }
  }
}

void export_case(const std::filesystem::path& dir, const CaseDefinition& def,
                 const Solution& sol, const SampleGrid& grid) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  const std::vector<Patch> solved = apply_solution(def, sol);
  write_stress_csv(dir / "stress.csv", solved, grid);
  write_report(dir / "report.txt", def, sol, compute_errors(solved, def));
  write_profiles(dir, def, solved);
}

} // namespace airy
