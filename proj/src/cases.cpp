#include "airy/cases.hpp"

#include <cmath>

#include "airy/errors.hpp"
#include "airy/quadrature.hpp"

namespace airy {

const std::vector<std::string> builtin_case_names = {
    "bar-self-weight", "beam-uniform-load", "bilayer-cantilever", "parabolic-cantilever"};

namespace {

ControlNet make_net(int p, int q, int n, int m) {
  return ControlNet::uniform(p, q, n, m);
}

CaseDefinition bar_case(const CaseOverrides& ov) {
  const double l = 2.0, c = 0.5, rho = 1.0, g = 9.81, E = 1e5, nu = 0.3;
  auto [p, q] = ov.degrees.value_or(std::make_pair(3, 3));
  auto [n, m] = ov.net.value_or(std::make_pair(5, 10));

  CaseDefinition def;
  def.name = "bar-self-weight";
  def.patches.push_back({Mapping::bar(l, c), make_net(p, q, n, m), Compliance::isotropic(E, nu),
                         Potential::linear_gravity(rho, g)});

  BoundarySpec side0{{0, Side::XiMin}, BcKind::TractionPointwise};
  side0.label = "side x=0 traction-free";
  BoundarySpec side1{{0, Side::XiMax}, BcKind::TractionPointwise};
  side1.label = "side x=c traction-free";
  BoundarySpec bottom{{0, Side::EtaMin}, BcKind::TractionPointwise};
  bottom.label = "free end y=l traction-free";
  BoundarySpec clamp{{0, Side::EtaMax}, BcKind::Free};
  clamp.label = "clamped end y=0";
  def.bcs = {side0, side1, bottom, clamp};

  def.reference_available = true;
  def.reference = [=](double, double y) { return Eigen::Vector3d(0.0, rho * g * (l - y), 0.0); };
  def.notes.push_back("y axis points from the clamp toward the free end; gravity acts along +y");
  return def;
}

CaseDefinition beam_case(const CaseOverrides& ov) {
  const double c = 0.25, w = 1.0, E = 1e5, nu = 0.3;
  const double aspect = ov.aspect.value_or(12.0);
  if (aspect <= 0) throw ConfigError("beam aspect ratio must be positive");
  const double l = aspect * c;
  auto [p, q] = ov.degrees.value_or(std::make_pair(2, 5));
  auto [n, m] = ov.net.value_or(std::make_pair(3, 6));

  CaseDefinition def;
  def.name = "beam-uniform-load";
  def.patches.push_back({Mapping::beam(l, c), make_net(p, q, n, m), Compliance::isotropic(E, nu),
                         Potential::none()});

  BoundarySpec top{{0, Side::EtaMin}, BcKind::TractionPointwise};
  top.label = "face y=+c traction-free";
  BoundarySpec loaded{{0, Side::EtaMax}, BcKind::TractionPointwise};
  loaded.traction = [w](double) { return Eigen::Vector2d(0.0, w); }; // sigma_yy = -w
  loaded.label = "loaded face y=-c";

  def.bcs = {top, loaded};
  for (Side side : {Side::XiMin, Side::XiMax}) {
    const std::string end = side == Side::XiMin ? "end x=-l" : "end x=+l";
    // Statically equivalent end conditions: pointwise-zero normal stress,
    // shear resultant carrying half the load, zero moment.
    BoundarySpec axial{{0, side}, BcKind::TractionPointwise, BcComponent::X};
    axial.label = end + " normal-stress-free";
    BoundarySpec shear{{0, side}, BcKind::ResultantForce, BcComponent::Y};
    shear.target = -w * l;
    shear.label = end + " shear resultant";
    BoundarySpec moment{{0, side}, BcKind::Moment};
    moment.target = 0.0;
    moment.label = end + " moment";
    def.bcs.push_back(axial);
    def.bcs.push_back(shear);
    def.bcs.push_back(moment);
  }

  def.reference_available = true;
  def.reference = [=](double x, double y) {
    const double sxx = (3 * w / (4 * c)) * (l * l / (c * c) - 2.0 / 5.0) * y -
                       (3 * w / (4 * c * c * c)) * (x * x * y - (2.0 / 3.0) * y * y * y);
    const double syy = -w / 2 + (3 * w / (4 * c)) * y - (w / (4 * c * c * c)) * y * y * y;
    const double sxy = -(3 * w / (4 * c)) * x + (3 * w / (4 * c * c * c)) * x * y * y;
    return Eigen::Vector3d(sxx, syy, sxy);
  };
  def.notes.push_back("uniform load applied on the face y=-c (sigma_yy = -w there)");
  return def;
}

CaseDefinition bilayer_case(const CaseOverrides& ov) {
  // 500 x (50+50) mm under w = 1 N/mm, worked in SI units.
  const double L = 0.5, H1 = 0.05, H2 = 0.05, w = 1000.0;
  const OrthotropicLayer below{10e9, 0.5e9, 1e9, 0.0, 0.0};
  const OrthotropicLayer above{10e9, 0.5e9, 1e9, 0.0, 15.0};
  auto [p, q] = ov.degrees.value_or(std::make_pair(2, 4));
  auto [n, m] = ov.net.value_or(std::make_pair(12, 7));

  CaseDefinition def;
  def.name = "bilayer-cantilever";
  const Compliance comp = Compliance::layered(below, above, H1);
  def.patches.push_back(
      {Mapping::bilayer_bottom(L, H1), make_net(p, q, n, m), comp, Potential::none()});
  def.patches.push_back(
      {Mapping::bilayer_top(L, H1, H2), make_net(p, q, n, m), comp, Potential::none()});

  BoundarySpec top{{1, Side::EtaMax}, BcKind::TractionPointwise};
  top.traction = [w](double) { return Eigen::Vector2d(0.0, -w); };
  top.label = "top face y=H1+H2 under pressure w";
  BoundarySpec bottom{{0, Side::EtaMin}, BcKind::TractionPointwise};
  bottom.label = "bottom face y=0 traction-free";
  BoundarySpec right_lower{{0, Side::XiMax}, BcKind::TractionPointwise};
  right_lower.label = "free end x=L lower layer";
  BoundarySpec right_upper{{1, Side::XiMax}, BcKind::TractionPointwise};
  right_upper.label = "free end x=L upper layer";
  BoundarySpec couple{{0, Side::EtaMax}, BcKind::InterfaceCoupling};
  couple.partner = {1, Side::EtaMin};
  couple.label = "interface y=H1 traction continuity";
  BoundarySpec clamp_lower{{0, Side::XiMin}, BcKind::Free};
  clamp_lower.label = "clamped end x=0 lower layer";
  BoundarySpec clamp_upper{{1, Side::XiMin}, BcKind::Free};
  clamp_upper.label = "clamped end x=0 upper layer";
  def.bcs = {top, bottom, right_lower, right_upper, couple, clamp_lower, clamp_upper};

  def.profile_stations = {0.25, 0.375};
  def.notes.push_back("millimetre dimensions converted to SI; w = 1 N/mm = 1000 N/m");
  return def;
}

CaseDefinition parabolic_case(const CaseOverrides& ov) {
  const double L = 5.0, H0 = 1.0, Q = 1e5, P = -1e5, E = 1e5, nu = 0.3;
  auto [p, q] = ov.degrees.value_or(std::make_pair(6, 4));
  auto [n, m] = ov.net.value_or(std::make_pair(10, 5));

  CaseDefinition def;
  def.name = "parabolic-cantilever";
  def.patches.push_back({Mapping::parabolic(L, H0), make_net(p, q, n, m),
                         Compliance::isotropic(E, nu), Potential::none()});

  BoundarySpec top{{0, Side::EtaMax}, BcKind::TractionPointwise};
  top.label = "top edge y=H0/4 traction-free";
  BoundarySpec bottom{{0, Side::EtaMin}, BcKind::TractionPointwise};
  bottom.label = "parabolic bottom edge traction-free";
  BoundarySpec horizontal{{0, Side::XiMax}, BcKind::ResultantForce, BcComponent::X};
  horizontal.target = Q;
  horizontal.label = "free end x=L horizontal resultant Q";
  BoundarySpec vertical{{0, Side::XiMax}, BcKind::ResultantForce, BcComponent::Y};
  vertical.target = P;
  vertical.label = "free end x=L vertical resultant P";
  BoundarySpec clamp{{0, Side::XiMin}, BcKind::Free};
  clamp.label = "clamped end x=0";
  def.bcs = {top, bottom, horizontal, vertical, clamp};

  def.profile_stations = {2.5};
  return def;
}

} // namespace

CaseDefinition build_case(const std::string& name, const CaseOverrides& ov) {
  if (ov.aspect && name != "beam-uniform-load")
    throw ConfigError("aspect ratio override applies only to beam-uniform-load");
  CaseDefinition def;
  if (name == "bar-self-weight")
    def = bar_case(ov);
  else if (name == "beam-uniform-load")
    def = beam_case(ov);
  else if (name == "bilayer-cantilever")
    def = bilayer_case(ov);
  else if (name == "parabolic-cantilever")
    def = parabolic_case(ov);
  else
    throw ConfigError("unknown case: " + name);
  def.quad_points = ov.quadrature.value_or(0);
  if (def.quad_points < 0) throw ConfigError("quadrature point count must be positive");
  return def;
}

QuadraticForm case_energy_form(const CaseDefinition& def, const DofMap& dofs,
                               AssemblyPolicy policy) {
  return internal_energy_form(def.patches, dofs, def.quad_points, policy);
}

Solution solve_case(const CaseDefinition& def, const SolveOptions& options,
                    AssemblyPolicy policy) {
  const DofMap dofs(def.patches);
  const QuadraticForm energy = case_energy_form(def, dofs, policy);
  return solve_system(def.patches, dofs, def.bcs, energy, options);
}

std::vector<Patch> apply_solution(const CaseDefinition& def, const Solution& sol) {
  const DofMap dofs(def.patches);
  std::vector<Patch> out = def.patches;
  for (size_t p = 0; p < out.size(); ++p) {
    const int n = out[p].net.count_xi();
    const int m = out[p].net.count_eta();
    out[p].net.coeffs() =
        Eigen::Map<const Eigen::MatrixXd>(sol.phi.data() + dofs.offset(p), n, m);
  }
  return out;
}

std::optional<Eigen::Vector3d> reference_stress(const CaseDefinition& def, double x, double y) {
  if (!def.reference_available) return std::nullopt;
  return def.reference(x, y);
}

double l2_relative_error(const std::vector<Patch>& solved, const CaseDefinition& def,
                         int component) {
  if (!def.reference_available) throw Error("case has no reference solution");
  double num = 0.0, den = 0.0;
  for (const Patch& patch : solved) {
    const auto [nx, ny] = patch_quad_points(patch, def.quad_points);
    const auto bx = patch.net.knots_xi().breakpoints();
    const auto be = patch.net.knots_eta().breakpoints();
    for (size_t sj = 0; sj + 1 < be.size(); ++sj) {
      for (size_t si = 0; si + 1 < bx.size(); ++si) {
        const QuadratureRule qx = gauss_legendre(nx, bx[si], bx[si + 1]);
        const QuadratureRule qy = gauss_legendre(ny, be[sj], be[sj + 1]);
        for (int j = 0; j < ny; ++j) {
          for (int i = 0; i < nx; ++i) {
            const double xi = qx.points[i], eta = qy.points[j];
            const double wt = qx.weights[i] * qy.weights[j] *
                              std::abs(patch.mapping.jacobian(xi, eta).determinant());
            const Eigen::Vector2d pos = patch.mapping.map(xi, eta);
            const double s = stress_at(patch, xi, eta)(component);
            const double r = def.reference(pos.x(), pos.y())(component);
            num += wt * (s - r) * (s - r);
            den += wt * r * r;
          }
        }
      }
    }
  }
  if (den <= 0.0) throw Error("reference component has zero norm");
  return std::sqrt(num / den);
}

Eigen::Vector2d edge_resultant(const Patch& solved, Side side) {
  const int points = edge_quad_points(solved);
  const KnotVector& along = (side == Side::XiMin || side == Side::XiMax)
                                ? solved.net.knots_eta()
                                : solved.net.knots_xi();
  const std::vector<double> bp = along.breakpoints();
  Eigen::Vector2d total = Eigen::Vector2d::Zero();
  for (size_t span = 0; span + 1 < bp.size(); ++span) {
    const QuadratureRule q = gauss_legendre(points, bp[span], bp[span + 1]);
    for (int i = 0; i < points; ++i) {
      const auto [xi, eta] = edge_point(side, q.points[i]);
      const double arc = edge_arc_factor(solved.mapping, side, xi, eta);
      total += q.weights[i] * arc * traction_at(solved, side, q.points[i]);
    }
  }
  return total;
}

} // namespace airy
