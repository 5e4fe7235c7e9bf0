#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "airy/cases.hpp"
#include "airy/cli.hpp"
#include "airy/config.hpp"
#include "airy/errors.hpp"
#include "airy/output.hpp"
#include "helpers.hpp"

using namespace airy;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("airy-harness-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

fs::path write_cfg(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << text;
  return path;
}

// One shared bar solve; several artifact tests reuse it.
struct BarRun {
  CaseDefinition def = build_case("bar-self-weight");
  Solution sol = solve_case(def);
  std::vector<Patch> solved = apply_solution(def, sol);
};

const BarRun& bar_run() {
  static BarRun run;
  return run;
}

// Stress function of the hanging bar: zero sxx/sxy, syy = rho*g*(l - y).
double bar_phi(double x, double y) {
  const double rho_g = 9.81, l = 2.0;
  return rho_g * (l * x * x / 2.0 + y * y * y / 6.0);
}

// Stress function reproducing the uniformly loaded beam reference field.
double beam_phi(double x, double y) {
  const double c = 0.25, w = 1.0, l = 3.0;
  const double amp = (3 * w / (4 * c)) * (l * l / (c * c) - 0.4);
  return 0.5 * x * x * (-0.5 * w + (3 * w / (4 * c)) * y - (w / (4 * c * c * c)) * y * y * y) +
         amp * y * y * y / 6.0 + (w / (2 * c * c * c)) * std::pow(y, 5) / 20.0;
}

} // namespace

TEST_CASE("built-in cases expose the documented discretizations") {
  const std::vector<std::pair<std::string, int>> expected = {
      {"bar-self-weight", 50},
      {"beam-uniform-load", 18},
      {"bilayer-cantilever", 168},
      {"parabolic-cantilever", 50},
  };
  for (const auto& [name, dofs] : expected) {
    CAPTURE(name);
    const CaseDefinition def = build_case(name);
    CHECK(def.name == name);
    CHECK(DofMap(def.patches).total() == dofs);
    CHECK(!def.bcs.empty());
  }

  const CaseDefinition beam = build_case("beam-uniform-load");
  CHECK(beam.patches.size() == 1);
  CHECK(beam.patches[0].net.count_xi() == 3);
  CHECK(beam.patches[0].net.count_eta() == 6);
  CHECK(beam.patches[0].net.knots_xi().degree() == 2);
  CHECK(beam.patches[0].net.knots_eta().degree() == 5);
  CHECK(beam.bcs.size() == 8);

  const CaseDefinition bilayer = build_case("bilayer-cantilever");
  CHECK(bilayer.patches.size() == 2);
  CHECK(bilayer.profile_stations == std::vector<double>{0.25, 0.375});

  CHECK_THROWS_AS(build_case("no-such-case"), ConfigError);
  CaseOverrides aspect_ov;
  aspect_ov.aspect = 8.0;
  CHECK_THROWS_AS(build_case("bar-self-weight", aspect_ov), ConfigError);
}

TEST_CASE("case overrides reshape the discretization") {
  CaseOverrides ov;
  ov.aspect = 24.0;
  ov.net = {3, 8};
  const CaseDefinition beam = build_case("beam-uniform-load", ov);
  CHECK(beam.patches[0].net.count_eta() == 8);
  CHECK(beam.patches[0].mapping.map(1.0, 0.0).x() == doctest::Approx(6.0));
  // End shear resultants track the longer span: target -w*l.
  bool saw_shear = false;
  for (const BoundarySpec& spec : beam.bcs)
    if (spec.kind == BcKind::ResultantForce) {
      CHECK(spec.target == doctest::Approx(-6.0));
      saw_shear = true;
    }
  CHECK(saw_shear);
}

TEST_CASE("reference fields match their closed forms at spot points") {
  const CaseDefinition bar = build_case("bar-self-weight");
  const auto at_clamp = reference_stress(bar, 0.1, 0.0);
  REQUIRE(at_clamp.has_value());
  CHECK((*at_clamp)(0) == doctest::Approx(0.0));
  CHECK((*at_clamp)(1) == doctest::Approx(19.62));
  CHECK((*at_clamp)(2) == doctest::Approx(0.0));
  const auto at_tip = reference_stress(bar, 0.4, 2.0);
  CHECK((*at_tip)(1) == doctest::Approx(0.0).epsilon(1e-12));

  const CaseDefinition beam = build_case("beam-uniform-load");
  const auto loaded_face = reference_stress(beam, 0.0, -0.25);
  REQUIRE(loaded_face.has_value());
  CHECK((*loaded_face)(1) == doctest::Approx(-1.0));
  const auto center = reference_stress(beam, 0.0, 0.0);
  CHECK((*center)(1) == doctest::Approx(-0.5));
  CHECK((*center)(2) == doctest::Approx(0.0));
  const auto off_center = reference_stress(beam, 3.0, 0.0);
  CHECK((*off_center)(2) == doctest::Approx(-9.0));

  const CaseDefinition parabolic = build_case("parabolic-cantilever");
  CHECK(!reference_stress(parabolic, 1.0, 0.5).has_value());
  CHECK_THROWS_AS(l2_relative_error(parabolic.patches, parabolic, 0), Error);
}

TEST_CASE("relative error vanishes for an in-space exact field and scales with the defect") {
  CaseDefinition bar = build_case("bar-self-weight");
  std::vector<Patch> solved = bar.patches;
  solved[0].net = testutil::fit_net(3, 3, 5, 10, bar.patches[0].mapping, bar_phi);
  CHECK(l2_relative_error(solved, bar, 1) <= 1e-9);
  // sxx and sxy vanish identically in this case; no relative scale exists.
  CHECK_THROWS_AS(l2_relative_error(solved, bar, 0), Error);
  CHECK_THROWS_AS(l2_relative_error(solved, bar, 2), Error);

  CaseDefinition beam = build_case("beam-uniform-load");
  std::vector<Patch> exact = beam.patches;
  exact[0].net = testutil::fit_net(2, 5, 3, 6, beam.patches[0].mapping, beam_phi);
  for (int component : {0, 1, 2}) {
    CAPTURE(component);
    CHECK(l2_relative_error(exact, beam, component) <= 1e-9);
  }
  // Doubling the stress function doubles the stress: error becomes exactly 1.
  std::vector<Patch> doubled = exact;
  doubled[0].net.coeffs() *= 2.0;
  for (int component : {0, 1, 2}) {
    CAPTURE(component);
    CHECK(l2_relative_error(doubled, beam, component) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("edge resultants integrate the boundary traction") {
  // phi = y^2/2 gives unit sxx and nothing else.
  Patch patch{Mapping::rectangle(0.0, 0.0, 1.0, 2.0),
              testutil::fit_net(2, 2, 3, 3, Mapping::rectangle(0.0, 0.0, 1.0, 2.0),
                                [](double, double y) { return 0.5 * y * y; }),
              Compliance::isotropic(1.0, 0.0), Potential::none()};
  const Eigen::Vector2d right = edge_resultant(patch, Side::XiMax);
  CHECK(right.x() == doctest::Approx(2.0));
  CHECK(right.y() == doctest::Approx(0.0).epsilon(1e-12));
  const Eigen::Vector2d left = edge_resultant(patch, Side::XiMin);
  CHECK(left.x() == doctest::Approx(-2.0));
  const Eigen::Vector2d top = edge_resultant(patch, Side::EtaMax);
  CHECK(top.norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("solved bar carries its weight through the clamped edge") {
  const BarRun& run = bar_run();
  CHECK(run.sol.phi.size() == 50);
  // Body force integrates to rho*g*l*c = 9.81 N upward; the clamp reacts it.
  const Eigen::Vector2d clamp = edge_resultant(run.solved[0], Side::EtaMax);
  CHECK(clamp.y() == doctest::Approx(-9.81).epsilon(0.01));
  CHECK(std::abs(clamp.x()) <= 0.01 * 9.81);
}

TEST_CASE("stress samples export as csv and round-trip the surface evaluation") {
  const BarRun& run = bar_run();
  const fs::path dir = fresh_dir("csv");
  const SampleGrid grid{3, 4};
  write_stress_csv(dir / "stress.csv", run.solved, grid);

  const std::string text = read_file(dir / "stress.csv");
  const std::vector<std::string> lines = lines_of(text);
  REQUIRE(lines.size() == 1 + 3 * 4);
  CHECK(lines[0] == "patch,xi,eta,x,y,sigma_xx,sigma_yy,sigma_xy");

  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 8);
    CHECK(fields[0] == "0");
    const double xi = std::stod(fields[1]);
    const double eta = std::stod(fields[2]);
    const Eigen::Vector2d pos = run.solved[0].mapping.map(xi, eta);
    const Eigen::Vector3d s = stress_at(run.solved[0], xi, eta);
    CHECK(std::stod(fields[3]) == doctest::Approx(pos.x()).epsilon(1e-13));
    CHECK(std::stod(fields[4]) == doctest::Approx(pos.y()).epsilon(1e-13));
    for (int k = 0; k < 3; ++k)
      CHECK(std::stod(fields[5 + k]) - s(k) == doctest::Approx(0.0).epsilon(1e-13));
  }

  // Deterministic export: a second write is byte-identical.
  write_stress_csv(dir / "again.csv", run.solved, grid);
  CHECK(read_file(dir / "again.csv") == text);

  CHECK_THROWS_AS(write_stress_csv(dir / "bad.csv", run.solved, SampleGrid{1, 4}), IoError);
}

TEST_CASE("reports carry solver diagnostics and flag vanishing reference components") {
  const BarRun& run = bar_run();
  const ErrorReport errors = compute_errors(run.solved, run.def);
  REQUIRE(errors.l2_syy.has_value());
  CHECK(*errors.l2_syy > 0.0);
  CHECK(*errors.l2_syy < 1.0);
  CHECK(!errors.l2_sxx.has_value());
  CHECK(!errors.l2_sxy.has_value());

  const fs::path dir = fresh_dir("report");
  write_report(dir / "report.txt", run.def, run.sol, errors);
  const std::string text = read_file(dir / "report.txt");
  for (const char* needle : {
           "case = bar-self-weight",
           "dofs_total = 50",
           "solver_mode = two-stage",
           "solver_gauge = ",
           "quadrature_points_xi = ",
           "bc_count = 4",
           "bc[3].kind = free",
           "l2_error_sigma_xx = unavailable",
           "l2_error_sigma_xy = unavailable",
           "note[0] = ",
       }) {
    CAPTURE(needle);
    CHECK(text.find(needle) != std::string::npos);
  }
  CHECK(text.find("l2_error_sigma_yy = unavailable") == std::string::npos);
  CHECK(text.find("l2_error_sigma_yy = ") != std::string::npos);
}

TEST_CASE("profile extracts are written at the configured stations") {
  // Zero nets are valid states; profiles only sample the stress surface.
  const CaseDefinition bilayer = build_case("bilayer-cantilever");
  const fs::path dir = fresh_dir("profiles");
  write_profiles(dir, bilayer, bilayer.patches, 7);
  for (const char* name : {"profile_x0.25.csv", "profile_x0.375.csv"}) {
    CAPTURE(name);
    REQUIRE(fs::exists(dir / name));
    const std::vector<std::string> lines = lines_of(read_file(dir / name));
    REQUIRE(lines.size() == 1 + 2 * 7); // both layers cross each station
    CHECK(lines[0] == "patch,eta,x,y,sigma_xx,sigma_yy,sigma_xy");
    for (size_t i = 1; i < lines.size(); ++i) {
      const std::vector<std::string> fields = split_csv(lines[i]);
      REQUIRE(fields.size() == 7);
      const double want_x = name == std::string("profile_x0.25.csv") ? 0.25 : 0.375;
      CHECK(std::stod(fields[2]) == doctest::Approx(want_x).epsilon(1e-8));
      for (int k = 4; k < 7; ++k) CHECK(std::stod(fields[k]) == 0.0);
    }
  }
}

TEST_CASE("export_case writes the full artifact set") {
  const BarRun& run = bar_run();
  const fs::path dir = fresh_dir("export");
  export_case(dir / "bar", run.def, run.sol, SampleGrid{4, 4});
  CHECK(fs::exists(dir / "bar" / "stress.csv"));
  CHECK(fs::exists(dir / "bar" / "report.txt"));
  // The bar declares no profile stations.
  size_t entries = 0;
  for (const auto& entry : fs::directory_iterator(dir / "bar")) {
    (void)entry;
    ++entries;
  }
  CHECK(entries == 2);
}

TEST_CASE("config files select built-in cases with overrides only") {
  const fs::path dir = fresh_dir("config-builtin");
  const fs::path cfg = write_cfg(dir, "beam.cfg",
                                 "[case]\n"
                                 "name = beam-uniform-load\n"
                                 "aspect = 24\n"
                                 "\n"
                                 "[splines]\n"
                                 "net = 3,8\n"
                                 "\n"
                                 "[solver]\n"
                                 "mode = combined\n"
                                 "bc-weight = 1e6\n"
                                 "\n"
                                 "[output]\n"
                                 "samples = 7,9\n");
  const ParsedConfig parsed = parse_config(cfg);
  CHECK(parsed.definition.name == "beam-uniform-load");
  CHECK(parsed.definition.patches[0].net.count_xi() == 3);
  CHECK(parsed.definition.patches[0].net.count_eta() == 8);
  CHECK(parsed.definition.patches[0].mapping.map(1.0, 0.0).x() == doctest::Approx(6.0));
  CHECK(parsed.options.mode == SolveMode::Combined);
  CHECK(parsed.options.bc_weight == doctest::Approx(1e6));
  CHECK(parsed.grid.nx == 7);
  CHECK(parsed.grid.ny == 9);

  // Built-ins reject structural redefinition.
  const fs::path bad = write_cfg(dir, "bad.cfg",
                                 "[case]\n"
                                 "name = beam-uniform-load\n"
                                 "\n"
                                 "[material.iso]\n"
                                 "kind = isotropic\n"
                                 "e = 1\n"
                                 "nu = 0\n");
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("config files define complete custom cases") {
  const fs::path dir = fresh_dir("config-custom");
  const fs::path cfg = write_cfg(dir, "panel.cfg",
                                 "# two stacked unit squares under a side pull\n"
                                 "[case]\n"
                                 "name = toy-panel\n"
                                 "potential = linear-gravity\n"
                                 "rho = 1.0\n"
                                 "g = 9.81\n"
                                 "\n"
                                 "[splines]\n"
                                 "degrees = 3,3\n"
                                 "net = 5,6\n"
                                 "\n"
                                 "[material.iso]\n"
                                 "kind = isotropic\n"
                                 "e = 1e5\n"
                                 "nu = 0.3\n"
                                 "\n"
                                 "[patches.lower]\n"
                                 "mapping = rectangle\n"
                                 "x0 = 0\n"
                                 "y0 = 0\n"
                                 "width = 1\n"
                                 "height = 1\n"
                                 "material = iso\n"
                                 "\n"
                                 "[patches.upper]\n"
                                 "mapping = rectangle\n"
                                 "x0 = 0\n"
                                 "y0 = 1\n"
                                 "width = 1\n"
                                 "height = 1\n"
                                 "material = iso\n"
                                 "\n"
                                 "[bcs.pull]\n"
                                 "patch = lower\n"
                                 "edge = xi-min\n"
                                 "kind = traction-pointwise\n"
                                 "component = x\n"
                                 "tx = 1.0\n"
                                 "\n"
                                 "[bcs.join]\n"
                                 "patch = lower\n"
                                 "edge = eta-max\n"
                                 "kind = interface-coupling\n"
                                 "partner-patch = upper\n"
                                 "partner-edge = eta-min\n"
                                 "\n"
                                 "[bcs.clamp]\n"
                                 "patch = upper\n"
                                 "edge = eta-max\n"
                                 "kind = free\n");
  const ParsedConfig parsed = parse_config(cfg);
  const CaseDefinition& def = parsed.definition;
  CHECK(def.name == "toy-panel");
  REQUIRE(def.patches.size() == 2);
  CHECK(def.patches[0].net.count_xi() == 5);
  CHECK(def.patches[0].net.count_eta() == 6);
  CHECK(def.patches[0].net.knots_xi().degree() == 3);
  CHECK(def.patches[0].potential.rho_g() == doctest::Approx(9.81));
  const Eigen::Matrix3d want = Compliance::isotropic(1e5, 0.3).energy_form(0.0, 0.0);
  CHECK((def.patches[1].material.energy_form(0.0, 0.0) - want).norm() == 0.0);

  REQUIRE(def.bcs.size() == 3);
  CHECK(def.bcs[0].label == "pull");
  CHECK(def.bcs[0].kind == BcKind::TractionPointwise);
  CHECK(def.bcs[0].component == BcComponent::X);
  REQUIRE(def.bcs[0].traction);
  CHECK(def.bcs[0].traction(0.3).x() == doctest::Approx(1.0));
  CHECK(def.bcs[1].kind == BcKind::InterfaceCoupling);
  CHECK(def.bcs[1].partner.patch == 1);
  CHECK(def.bcs[1].partner.side == Side::EtaMin);
  CHECK(def.bcs[2].kind == BcKind::Free);
}

TEST_CASE("malformed config files are rejected with the offending detail") {
  const fs::path dir = fresh_dir("config-bad");
  auto rejects = [&](const std::string& name, const std::string& text) {
    CAPTURE(name);
    CHECK_THROWS_AS(parse_config(write_cfg(dir, name, text)), ConfigError);
  };

  CHECK_THROWS_AS(parse_config(dir / "missing.cfg"), ConfigError);
  rejects("no-case.cfg", "[splines]\ndegrees = 3,3\n");
  rejects("stray-key.cfg", "degrees = 3,3\n[case]\nname = bar-self-weight\n");
  rejects("unknown-section.cfg", "[case]\nname = bar-self-weight\n[bogus]\nx = 1\n");
  rejects("unknown-key.cfg", "[case]\nname = bar-self-weight\n[output]\nsample = 3,3\n");
  rejects("bad-pair.cfg", "[case]\nname = bar-self-weight\n[output]\nsamples = 7\n");
  rejects("dup-key.cfg", "[case]\nname = bar-self-weight\nname = beam-uniform-load\n");
  rejects("bad-mode.cfg", "[case]\nname = bar-self-weight\n[solver]\nmode = nonsense\n");
  rejects("no-patches.cfg", "[case]\nname = custom-empty\n");
  rejects("ghost-material.cfg",
          "[case]\nname = custom\n[patches.main]\nmapping = rectangle\nx0 = 0\ny0 = 0\n"
          "width = 1\nheight = 1\nmaterial = steel\n");
  rejects("ghost-patch.cfg",
          "[case]\nname = custom\n[material.iso]\nkind = isotropic\ne = 1\nnu = 0\n"
          "[patches.main]\nmapping = rectangle\nx0 = 0\ny0 = 0\nwidth = 1\nheight = 1\n"
          "material = iso\n[bcs.b]\npatch = ghost\nedge = xi-min\nkind = free\n");
  rejects("bad-edge.cfg",
          "[case]\nname = custom\n[material.iso]\nkind = isotropic\ne = 1\nnu = 0\n"
          "[patches.main]\nmapping = rectangle\nx0 = 0\ny0 = 0\nwidth = 1\nheight = 1\n"
          "material = iso\n[bcs.b]\npatch = main\nedge = north\nkind = free\n");
}

TEST_CASE("the command line front end separates usage errors from solve errors") {
  const fs::path dir = fresh_dir("cli");

  // Exactly one input selector.
  CHECK(run_cli({}) == 2);
  CHECK(run_cli({"--case", "bar-self-weight", "--config", "x.cfg"}) == 2);
  CHECK(run_cli({"--case", "bar-self-weight", "--all"}) == 2);

  // Discretization flags belong in the file when a config drives the run.
  const fs::path cfg = write_cfg(dir, "beam.cfg",
                                 "[case]\nname = beam-uniform-load\n[solver]\nmode = combined\n");
  CHECK(run_cli({"--config", cfg.string(), "--net", "4,4"}) == 2);
  CHECK(run_cli({"--config", cfg.string(), "--aspect", "24"}) == 2);

  // Malformed values and unknown flags are usage errors too.
  CHECK(run_cli({"--case", "bar-self-weight", "--net", "5"}) == 2);
  CHECK(run_cli({"--frobnicate"}) == 2);

  // Bad case names and unreadable configs fail the run itself.
  CHECK(run_cli({"--case", "no-such-case"}) == 1);
  CHECK(run_cli({"--config", (dir / "absent.cfg").string()}) == 1);
  CHECK(run_cli({"--case", "bar-self-weight", "--aspect", "8"}) == 1);
}

TEST_CASE("the command line front end solves and exports a named case") {
  const fs::path dir = fresh_dir("cli-run");
  const fs::path out = dir / "bar";
  REQUIRE(run_cli({"--case", "bar-self-weight", "--output", out.string(), "--samples", "3,3"}) ==
          0);
  CHECK(fs::exists(out / "stress.csv"));
  CHECK(fs::exists(out / "report.txt"));
  CHECK(lines_of(read_file(out / "stress.csv")).size() == 1 + 9);

  const fs::path cfg = write_cfg(dir, "beam.cfg",
                                 "[case]\nname = beam-uniform-load\n[solver]\nmode = combined\n"
                                 "[output]\nsamples = 3,3\n");
  const fs::path out2 = dir / "beam";
  REQUIRE(run_cli({"--config", cfg.string(), "--output", out2.string()}) == 0);
  CHECK(read_file(out2 / "report.txt").find("solver_mode = combined") != std::string::npos);
}

TEST_CASE("the command line front end runs every built-in case" * doctest::timeout(300)) {
  const fs::path dir = fresh_dir("cli-all");
  REQUIRE(run_cli({"--all", "--output", dir.string(), "--samples", "3,3"}) == 0);
  for (const std::string& name : builtin_case_names) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name / "stress.csv"));
    CHECK(fs::exists(dir / name / "report.txt"));
  }
  // Stations declared by the cantilever cases come out as profile files.
  CHECK(fs::exists(dir / "bilayer-cantilever" / "profile_x0.25.csv"));
  CHECK(fs::exists(dir / "bilayer-cantilever" / "profile_x0.375.csv"));
  CHECK(fs::exists(dir / "parabolic-cantilever" / "profile_x2.5.csv"));
}
