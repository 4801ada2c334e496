#include "magdirac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace magdirac {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double get_num(const json& j, const std::string& key, double fallback,
               bool required = false) {
  if (!j.contains(key)) {
    if (required) throw ConfigError("missing required key '" + key + "'");
    return fallback;
  }
  if (!j[key].is_number()) throw ConfigError("key '" + key + "' must be numeric");
  return j[key].get<double>();
}

FieldSpec parse_field(const json& j) {
  reject_unknown(j, {"kind", "B0", "amplitude", "k", "c", "p", "x0", "y0", "dx",
                     "dy", "nx", "ny", "values"},
                 "field");
  FieldSpec f;
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    f.kind = FieldSpec::Kind::Constant;
    f.B0 = get_num(j, "B0", 0.0, true);
  } else if (kind == "periodic") {
    f.kind = FieldSpec::Kind::Periodic;
    f.amplitude = get_num(j, "amplitude", 0.0, true);
    if (!j.contains("k") || !j["k"].is_array() || j["k"].size() != 2)
      throw ConfigError("periodic field needs k = [k1, k2]");
    f.k1 = j["k"][0].get<double>();
    f.k2 = j["k"][1].get<double>();
  } else if (kind == "radial_power") {
    f.kind = FieldSpec::Kind::RadialPower;
    f.c = get_num(j, "c", 0.0, true);
    f.p = get_num(j, "p", 0.0, true);
    if (f.p < 0) throw ConfigError("radial_power exponent must be >= 0");
  } else if (kind == "tabulated") {
    f.kind = FieldSpec::Kind::Tabulated;
    f.x0 = get_num(j, "x0", 0.0, true);
    f.y0 = get_num(j, "y0", 0.0, true);
    f.dx = get_num(j, "dx", 1.0, true);
    f.dy = get_num(j, "dy", 1.0, true);
    if (!j.contains("values") || !j["values"].is_array())
      throw ConfigError("tabulated field needs a values grid");
    f.ny = static_cast<int>(j["values"].size());
    f.nx = f.ny > 0 ? static_cast<int>(j["values"][0].size()) : 0;
    if (f.nx < 2 || f.ny < 2)
      throw ConfigError("tabulated grid must be at least 2x2");
    for (const auto& row : j["values"]) {
      if (static_cast<int>(row.size()) != f.nx)
        throw ConfigError("tabulated grid rows must have equal length");
      for (const auto& v : row) f.values.push_back(v.get<double>());
    }
  } else {
    throw ConfigError("unknown field kind '" + kind + "'");
  }
  return f;
}

LatticeSpec parse_lattice(const json& j) {
  reject_unknown(j, {"dims", "extents", "points", "boundary", "flux_quanta"},
                 "lattice");
  LatticeSpec lat;
  lat.dims = j.value("dims", 2);
  if (!j.contains("extents") || !j.contains("points"))
    throw ConfigError("lattice needs extents and points");
  auto ext = j["extents"];
  auto pts = j["points"];
  if (static_cast<int>(ext.size()) != lat.dims ||
      static_cast<int>(pts.size()) != lat.dims)
    throw ConfigError("extents/points length must match dims");
  for (int d = 0; d < lat.dims; ++d) {
    lat.extents[d] = ext[d].get<double>();
    lat.points[d] = pts[d].get<int>();
  }
  std::string b = j.value("boundary", "dirichlet");
  if (b == "dirichlet")
    lat.boundary = Boundary::Dirichlet;
  else if (b == "magnetic_periodic")
    lat.boundary = Boundary::MagneticPeriodic;
  else
    throw ConfigError("unknown boundary '" + b + "'");
  lat.flux_quanta = j.value("flux_quanta", 0);
  lat.spinor_comps = lat.dims == 3 ? 4 : 2;
  lat.validate();
  return lat;
}

Mat4 parse_mat4(const json& j, const std::string& where) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "identity") return Mat4::Identity();
    if (s == "minus_identity") return -Mat4::Identity();
    if (s == "beta") return dirac_matrices().beta;
    throw ConfigError("unknown matrix name '" + s + "' in " + where);
  }
  if (!j.is_array() || j.size() != 4)
    throw ConfigError(where + " matrix must be 4 rows of [re, im] pairs");
  Mat4 m;
  for (int r = 0; r < 4; ++r) {
    if (j[r].size() != 4) throw ConfigError(where + " matrix row length != 4");
    for (int c = 0; c < 4; ++c) {
      const auto& e = j[r][c];
      if (e.is_number())
        m(r, c) = e.get<double>();
      else if (e.is_array() && e.size() == 2)
        m(r, c) = cd(e[0].get<double>(), e[1].get<double>());
      else
        throw ConfigError(where + " matrix entries must be numbers or [re, im]");
    }
  }
  return m;
}

ProfileTerm parse_term(const json& j, const std::string& where) {
  reject_unknown(j, {"profile", "A", "mu", "p", "width", "matrix"}, where);
  ProfileTerm t;
  std::string p = j.value("profile", "constant");
  t.A = get_num(j, "A", 0.0, true);
  if (p == "constant") {
    t.kind = ProfileTerm::Kind::Constant;
  } else if (p == "yukawa") {
    t.kind = ProfileTerm::Kind::Yukawa;
    t.par = get_num(j, "mu", 1.0, true);
  } else if (p == "power_x3") {
    t.kind = ProfileTerm::Kind::PowerX3;
    t.par = get_num(j, "p", 1.0, true);
  } else if (p == "power_r") {
    t.kind = ProfileTerm::Kind::PowerR;
    t.par = get_num(j, "p", 1.0, true);
  } else if (p == "gaussian") {
    t.kind = ProfileTerm::Kind::Gaussian;
    t.par = get_num(j, "width", 1.0, true);
  } else {
    throw ConfigError("unknown profile '" + p + "' in " + where);
  }
  if (j.contains("matrix")) t.mat = parse_mat4(j["matrix"], where);
  return t;
}

PotentialSpec parse_potential(const json& j) {
  reject_unknown(j,
                 {"nu", "centers", "coulomb_matrix", "chi_r0", "chi_r1",
                  "regular_terms", "vloc_terms"},
                 "potential");
  PotentialSpec p;
  p.nu = get_num(j, "nu", 0.0);
  if (j.contains("centers")) {
    for (const auto& c : j["centers"]) {
      if (c.size() != 3) throw ConfigError("centers must be 3-vectors");
      p.centers.push_back({c[0].get<double>(), c[1].get<double>(),
                           c[2].get<double>()});
    }
  }
  if (j.contains("coulomb_matrix"))
    p.coulomb_matrix = parse_mat4(j["coulomb_matrix"], "potential");
  p.chi.r0 = get_num(j, "chi_r0", 1.0);
  p.chi.r1 = get_num(j, "chi_r1", 2.0);
  if (j.contains("regular_terms"))
    for (const auto& t : j["regular_terms"])
      p.regular_terms.push_back(parse_term(t, "regular_terms"));
  if (j.contains("vloc_terms"))
    for (const auto& t : j["vloc_terms"])
      p.vloc_terms.push_back(parse_term(t, "vloc_terms"));
  p.validate();
  return p;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"seed", "mass", "wilson_r", "dense_cap", "threads",
                  "smooth_step", "field", "lattice", "potential",
                  "internal_spectrum", "mourre", "perturbed", "lap"},
                 "config");

  RunConfig cfg;
  cfg.seed = static_cast<std::uint64_t>(get_num(j, "seed", 1.0));
  cfg.mass = get_num(j, "mass", 1.0);
  if (cfg.mass <= 0) throw ConfigError("mass must be positive");
  cfg.wilson_r = get_num(j, "wilson_r", 1.0);
  if (cfg.wilson_r < 0) throw ConfigError("wilson_r must be non-negative");
  cfg.dense_cap = static_cast<int>(get_num(j, "dense_cap", kDefaultDenseCap));
  cfg.threads = static_cast<int>(get_num(j, "threads", 0.0));

  std::string st = j.value("smooth_step", "bump_integral");
  if (st == "bump_integral")
    cfg.step.kind = SmoothStepF::Kind::BumpIntegral;
  else if (st == "hard_step")
    cfg.step.kind = SmoothStepF::Kind::HardStep;
  else
    throw ConfigError("unknown smooth_step '" + st + "'");

  if (!j.contains("field")) throw ConfigError("missing field block");
  cfg.field = parse_field(j["field"]);
  if (!j.contains("lattice")) throw ConfigError("missing lattice block");
  cfg.lattice = parse_lattice(j["lattice"]);
  cfg.lattice.validate_flux(cfg.field);

  if (j.contains("potential")) cfg.potential = parse_potential(j["potential"]);

  if (j.contains("internal_spectrum")) {
    const json& b = j["internal_spectrum"];
    reject_unknown(b, {"search_range", "min_gap_width", "export_operator"},
                   "internal_spectrum");
    if (b.contains("search_range")) {
      cfg.internal_spectrum.search_lo = b["search_range"][0].get<double>();
      cfg.internal_spectrum.search_hi = b["search_range"][1].get<double>();
    }
    cfg.internal_spectrum.min_gap_width = get_num(b, "min_gap_width", 0.05);
    cfg.internal_spectrum.export_operator = b.value("export_operator", "");
  }

  if (j.contains("mourre")) {
    const json& b = j["mourre"];
    reject_unknown(b,
                   {"mode", "lambda_min", "lambda_max", "lambda_count",
                    "epsilon", "mirrored"},
                   "mourre");
    cfg.mourre.mode = b.value("mode", "formula");
    if (cfg.mourre.mode != "formula" && cfg.mourre.mode != "measured")
      throw ConfigError("mourre mode must be formula or measured");
    cfg.mourre.lambda_min = get_num(b, "lambda_min", 0.0);
    cfg.mourre.lambda_max = get_num(b, "lambda_max", 2.0);
    cfg.mourre.lambda_count = static_cast<int>(get_num(b, "lambda_count", 40));
    cfg.mourre.epsilon = get_num(b, "epsilon", 0.05);
    cfg.mourre.mirrored = b.value("mirrored", true);
  }

  if (j.contains("perturbed")) {
    const json& b = j["perturbed"];
    reject_unknown(b, {"radii", "gap", "refined_points"}, "perturbed");
    if (b.contains("radii"))
      for (const auto& r : b["radii"])
        cfg.perturbed.radii.push_back(r.get<double>());
    if (b.contains("gap"))
      cfg.perturbed.gap = std::make_pair(b["gap"][0].get<double>(),
                                         b["gap"][1].get<double>());
    if (b.contains("refined_points")) {
      if (b["refined_points"].size() != 3)
        throw ConfigError("refined_points must have 3 entries");
      for (int d = 0; d < 3; ++d)
        cfg.perturbed.refined_points[d] = b["refined_points"][d].get<int>();
    }
  }

  if (j.contains("lap")) {
    const json& b = j["lap"];
    reject_unknown(b,
                   {"lambdas", "eps0", "levels", "sign", "s", "profile",
                    "transverse_mode", "use_potential"},
                   "lap");
    if (b.contains("lambdas"))
      for (const auto& l : b["lambdas"]) cfg.lap.lambdas.push_back(l.get<double>());
    cfg.lap.eps0 = get_num(b, "eps0", 0.5);
    cfg.lap.levels = static_cast<int>(get_num(b, "levels", 6));
    cfg.lap.sign = b.value("sign", "upper");
    if (cfg.lap.sign != "upper" && cfg.lap.sign != "lower")
      throw ConfigError("lap sign must be upper or lower");
    cfg.lap.s = get_num(b, "s", 1.0);
    cfg.lap.profile = b.value("profile", "gaussian_x3");
    if (cfg.lap.profile != "gaussian_x3" && cfg.lap.profile != "polynomial_x3")
      throw ConfigError("lap profile must be gaussian_x3 or polynomial_x3");
    cfg.lap.transverse_mode = static_cast<int>(get_num(b, "transverse_mode", -1));
    cfg.lap.use_potential = b.value("use_potential", true);
  }

  cfg.canonical = j.dump();  // nlohmann orders keys deterministically
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical)));
  cfg.config_hash = buf;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace magdirac
