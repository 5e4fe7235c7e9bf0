#include "airy/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "airy/errors.hpp"

namespace airy {

namespace {

struct Entry {
  std::string value;
  int line;
  mutable bool used = false;
};

struct Section {
  std::string name;
  int line;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order; // key order of appearance
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

class ConfigData {
public:
  explicit ConfigData(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string line;
    int lineno = 0;
    Section* current = nullptr;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError(err(lineno, "malformed section header"));
        const std::string name = trim(t.substr(1, t.size() - 2));
        if (name.empty()) throw ConfigError(err(lineno, "empty section name"));
        sections_.push_back({name, lineno, {}, {}});
        current = &sections_.back();
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError(err(lineno, "expected key = value"));
      if (!current) throw ConfigError(err(lineno, "key outside any section"));
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError(err(lineno, "empty key"));
      if (current->entries.count(key))
        throw ConfigError(err(lineno, "duplicate key '" + key + "'"));
      current->entries[key] = {value, lineno};
      current->order.push_back(key);
    }
  }

  static std::string err(int line, const std::string& message) {
    return "config line " + std::to_string(line) + ": " + message;
  }

  Section* find(const std::string& name) {
    for (Section& s : sections_)
      if (s.name == name) return &s;
    return nullptr;
  }

  std::vector<Section*> with_prefix(const std::string& prefix) {
    std::vector<Section*> out;
    for (Section& s : sections_)
      if (s.name.rfind(prefix, 0) == 0) out.push_back(&s);
    return out;
  }

  std::vector<Section>& sections() { return sections_; }

private:
  std::vector<Section> sections_;
};

class SectionReader {
public:
  explicit SectionReader(const Section& s) : s_(s) {}

  bool has(const std::string& key) const { return s_.entries.count(key) > 0; }

  std::string get(const std::string& key) const {
    const auto it = s_.entries.find(key);
    if (it == s_.entries.end())
      throw ConfigError("[" + s_.name + "] is missing required key '" + key + "'");
    it->second.used = true;
    return it->second.value;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
  }

  double number(const std::string& key) const {
    const std::string v = get(key);
    try {
      size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      throw ConfigError("[" + s_.name + "] key '" + key + "': invalid number '" + v + "'");
    }
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::pair<int, int> int_pair(const std::string& key) const {
    const std::string v = get(key);
    const auto comma = v.find(',');
    if (comma == std::string::npos)
      throw ConfigError("[" + s_.name + "] key '" + key + "': expected two integers 'a,b'");
    try {
      return {std::stoi(trim(v.substr(0, comma))), std::stoi(trim(v.substr(comma + 1)))};
    } catch (const std::exception&) {
      throw ConfigError("[" + s_.name + "] key '" + key + "': expected two integers 'a,b'");
    }
  }

  // Call after reading everything valid: any untouched key is unknown.
  void finish() const {
    for (const auto& [key, entry] : s_.entries)
      if (!entry.used)
        throw ConfigError(ConfigData::err(entry.line,
                                          "unknown key '" + key + "' in [" + s_.name + "]"));
  }

private:
  const Section& s_;
};

bool is_builtin(const std::string& name) {
  return std::find(builtin_case_names.begin(), builtin_case_names.end(), name) !=
         builtin_case_names.end();
}

Mapping mapping_from(const SectionReader& r) {
  const std::string kind = r.get("mapping");
  if (kind == "rectangle")
    return Mapping::rectangle(r.number("x0"), r.number("y0"), r.number("width"),
                              r.number("height"));
  if (kind == "bar") return Mapping::bar(r.number("l"), r.number("c"));
  if (kind == "beam") return Mapping::beam(r.number("l"), r.number("c"));
  if (kind == "bilayer-bottom") return Mapping::bilayer_bottom(r.number("length"), r.number("h1"));
  if (kind == "bilayer-top")
    return Mapping::bilayer_top(r.number("length"), r.number("h1"), r.number("h2"));
  if (kind == "parabolic") return Mapping::parabolic(r.number("length"), r.number("h0"));
  throw ConfigError("unknown mapping kind '" + kind + "'");
}

OrthotropicLayer layer_from(const SectionReader& r, const std::string& prefix) {
  OrthotropicLayer layer;
  layer.E11 = r.number(prefix + "e11");
  layer.E22 = r.number(prefix + "e22");
  layer.G12 = r.number(prefix + "g12");
  layer.nu12 = r.number(prefix + "nu12");
  layer.theta_deg = r.number(prefix + "theta");
  return layer;
}

Compliance material_from(const SectionReader& r) {
  const std::string kind = r.get("kind");
  if (kind == "isotropic") return Compliance::isotropic(r.number("e"), r.number("nu"));
  if (kind == "orthotropic") return Compliance::orthotropic(layer_from(r, ""));
  if (kind == "layered")
    return Compliance::layered(layer_from(r, "below-"), layer_from(r, "above-"),
                               r.number("interface"));
  throw ConfigError("unknown material kind '" + kind + "'");
}

BcKind bc_kind_from(const std::string& name) {
  if (name == "traction-pointwise") return BcKind::TractionPointwise;
  if (name == "resultant-force") return BcKind::ResultantForce;
  if (name == "moment") return BcKind::Moment;
  if (name == "interface-coupling") return BcKind::InterfaceCoupling;
  if (name == "free") return BcKind::Free;
  throw ConfigError("unknown boundary condition kind '" + name + "'");
}

BcComponent component_from(const std::string& name) {
  if (name == "x") return BcComponent::X;
  if (name == "y") return BcComponent::Y;
  if (name == "both") return BcComponent::Both;
  throw ConfigError("unknown component selector '" + name + "'");
}

void read_solver(ConfigData& data, SolveOptions& options) {
  Section* s = data.find("solver");
  if (!s) return;
  const SectionReader r(*s);
  const std::string mode = r.get_or("mode", "two-stage");
  if (mode == "two-stage")
    options.mode = SolveMode::TwoStage;
  else if (mode == "combined")
    options.mode = SolveMode::Combined;
  else
    throw ConfigError("unknown solver mode '" + mode + "'");
  options.bc_weight = r.number_or("bc-weight", options.bc_weight);
  options.involvement_tol = r.number_or("involvement-tol", options.involvement_tol);
  const std::string gauge = r.get_or("gauge", "pin-affine");
  if (gauge == "pin-affine")
    options.gauge = GaugeOption::PinAffine;
  else if (gauge == "min-norm")
    options.gauge = GaugeOption::MinNorm;
  else
    throw ConfigError("unknown gauge option '" + gauge + "'");
  r.finish();
}

void read_samples(ConfigData& data, SampleGrid& grid) {
  Section* s = data.find("output");
  if (!s) return;
  const SectionReader r(*s);
  if (r.has("samples")) {
    auto [nx, ny] = r.int_pair("samples");
    grid.nx = nx;
    grid.ny = ny;
  }
  r.finish();
}

CaseDefinition custom_case(ConfigData& data, const SectionReader& case_reader,
                           const std::string& name) {
  CaseDefinition def;
  def.name = name;

  Potential potential = Potential::none();
  const std::string pot = case_reader.get_or("potential", "none");
  if (pot == "linear-gravity")
    potential = Potential::linear_gravity(case_reader.number("rho"), case_reader.number("g"));
  else if (pot != "none")
    throw ConfigError("unknown potential kind '" + pot + "'");

  int p = 3, q = 3, n = 4, m = 4;
  if (Section* s = data.find("splines")) {
    const SectionReader r(*s);
    if (r.has("degrees")) std::tie(p, q) = r.int_pair("degrees");
    if (r.has("net")) std::tie(n, m) = r.int_pair("net");
    if (r.has("quadrature")) def.quad_points = static_cast<int>(r.number("quadrature"));
    r.finish();
  }

  std::map<std::string, Compliance> materials;
  for (Section* s : data.with_prefix("material.")) {
    const SectionReader r(*s);
    materials.emplace(s->name.substr(9), material_from(r));
    r.finish();
  }

  std::map<std::string, int> patch_index;
  for (Section* s : data.with_prefix("patches.")) {
    const SectionReader r(*s);
    const std::string material_name = r.get("material");
    const auto it = materials.find(material_name);
    if (it == materials.end())
      throw ConfigError("[" + s->name + "] references unknown material '" + material_name + "'");
    patch_index[s->name.substr(8)] = static_cast<int>(def.patches.size());
    def.patches.push_back(
        {mapping_from(r), ControlNet::uniform(p, q, n, m), it->second, potential});
    r.finish();
  }
  if (def.patches.empty()) throw ConfigError("custom case defines no [patches.*] section");

  auto edge_from = [&](const SectionReader& r, const std::string& patch_key,
                       const std::string& edge_key) {
    const std::string patch_name = r.get(patch_key);
    const auto it = patch_index.find(patch_name);
    if (it == patch_index.end())
      throw ConfigError("unknown patch '" + patch_name + "' in boundary condition");
    return EdgeRef{it->second, side_from_name(r.get(edge_key))};
  };

  for (Section* s : data.with_prefix("bcs.")) {
    const SectionReader r(*s);
    BoundarySpec spec;
    spec.label = s->name.substr(4);
    spec.edge = edge_from(r, "patch", "edge");
    spec.kind = bc_kind_from(r.get("kind"));
    spec.component = component_from(r.get_or("component", "both"));
    spec.weight = r.number_or("weight", 1.0);
    switch (spec.kind) {
      case BcKind::TractionPointwise: {
        const double tx = r.number_or("tx", 0.0);
        const double ty = r.number_or("ty", 0.0);
        if (tx != 0.0 || ty != 0.0)
          spec.traction = [tx, ty](double) { return Eigen::Vector2d(tx, ty); };
        break;
      }
      case BcKind::ResultantForce:
      case BcKind::Moment:
        spec.target = r.number_or("target", 0.0);
        break;
      case BcKind::InterfaceCoupling:
        spec.partner = edge_from(r, "partner-patch", "partner-edge");
        break;
      case BcKind::Free:
        break;
    }
    def.bcs.push_back(spec);
    r.finish();
  }
  return def;
}

} // namespace

ParsedConfig parse_config(const std::filesystem::path& path) {
  ConfigData data(path);

  const std::set<std::string> known_fixed = {"case", "splines", "solver", "output"};
  for (const Section& s : data.sections()) {
    if (known_fixed.count(s.name)) continue;
    if (s.name.rfind("patches.", 0) == 0 || s.name.rfind("material.", 0) == 0 ||
        s.name.rfind("bcs.", 0) == 0)
      continue;
    throw ConfigError(ConfigData::err(s.line, "unknown section [" + s.name + "]"));
  }

  Section* case_section = data.find("case");
  if (!case_section) throw ConfigError("config file has no [case] section");
  const SectionReader case_reader(*case_section);
  const std::string name = case_reader.get("name");

  ParsedConfig out;
  if (is_builtin(name)) {
    CaseOverrides ov;
    if (case_reader.has("aspect")) ov.aspect = case_reader.number("aspect");
    if (Section* s = data.find("splines")) {
      const SectionReader r(*s);
      if (r.has("degrees")) ov.degrees = r.int_pair("degrees");
      if (r.has("net")) ov.net = r.int_pair("net");
      if (r.has("quadrature")) ov.quadrature = static_cast<int>(r.number("quadrature"));
      r.finish();
    }
    if (!data.with_prefix("patches.").empty() || !data.with_prefix("material.").empty() ||
        !data.with_prefix("bcs.").empty())
      throw ConfigError("built-in case '" + name +
                        "' accepts only [splines]/[solver]/[output] overrides");
    out.definition = build_case(name, ov);
  } else {
    out.definition = custom_case(data, case_reader, name);
  }
  case_reader.finish();
  read_solver(data, out.options);
  read_samples(data, out.grid);
  return out;
}

} // namespace airy
