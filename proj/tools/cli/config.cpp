#include "cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace bfam::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw ConfigError("config error: " + field + ": " + why);
}

void expect_object(const json& j, const std::string& field, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(field, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* a : allowed) known = known || it.key() == a;
    if (!known) fail(field.empty() ? it.key() : field + "." + it.key(), "unknown field");
  }
}

std::string path_of(const std::string& parent, const char* key) { return parent.empty() ? key : parent + "." + key; }

double get_real(const json& j, const std::string& parent, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(path_of(parent, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path_of(parent, key), "must be finite");
  return x;
}

std::size_t get_count(const json& j, const std::string& parent, const char* key, std::size_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(path_of(parent, key), "expected an integer");
  const auto x = v.get<long long>();
  if (x < 0) fail(path_of(parent, key), "must be non-negative, got " + std::to_string(x));
  return static_cast<std::size_t>(x);
}

bool get_bool(const json& j, const std::string& parent, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) fail(path_of(parent, key), "expected true or false");
  return j.at(key).get<bool>();
}

std::string get_string(const json& j, const std::string& parent, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(path_of(parent, key), "expected a string");
  return j.at(key).get<std::string>();
}

ModelParams parse_model(const json& j) {
  expect_object(j, "model", {"case_tag", "b", "k1", "k2", "k3"});
  const std::string tag_text = get_string(j, "model", "case_tag", "CaseI");
  const auto tag = parse_case_tag(tag_text);
  if (!tag) fail("model.case_tag", "expected CaseI, CaseII or Custom, got '" + tag_text + "'");
  if (*tag == CaseTag::Custom) {
    for (const char* k : {"k1", "k2", "k3"}) {
      if (!j.contains(k)) fail(path_of("model", k), "required for Custom coefficients");
    }
    if (j.contains("b")) fail("model.b", "not used with Custom coefficients");
    return ModelParams::custom(get_real(j, "model", "k1", 0), get_real(j, "model", "k2", 0),
                               get_real(j, "model", "k3", 0));
  }
  for (const char* k : {"k1", "k2", "k3"}) {
    if (j.contains(k)) fail(path_of("model", k), "only allowed with case_tag Custom");
  }
  if (!j.contains("b")) fail("model.b", "required for CaseI/CaseII");
  return make_params(*tag, get_real(j, "model", "b", 0));
}

InitSpec parse_init(const json& j, const std::string& field, const std::filesystem::path& base_dir) {
  expect_object(j, field, {"kind", "amplitude", "width", "center", "m0", "table"});
  InitSpec s;
  const std::string kind = get_string(j, field, "kind", "Gaussian");
  const auto k = parse_profile_kind(kind);
  if (!k) fail(field + ".kind", "unknown profile '" + kind + "'");
  s.kind = *k;
  s.amplitude = get_real(j, field, "amplitude", s.amplitude);
  s.width = get_real(j, field, "width", s.width);
  s.center = get_real(j, field, "center", s.center);
  if (!(s.width > 0.0)) fail(field + ".width", "must be positive");
  if (s.kind == ProfileKind::FromM0) {
    if (!j.contains("m0")) fail(field + ".m0", "required for FromM0");
    s.m0 = std::make_shared<InitSpec>(parse_init(j.at("m0"), field + ".m0", base_dir));
  } else if (j.contains("m0")) {
    fail(field + ".m0", "only allowed with kind FromM0");
  }
  if (s.kind == ProfileKind::CustomTable) {
    std::filesystem::path t = get_string(j, field, "table", "");
    if (t.empty()) fail(field + ".table", "required for CustomTable");
    if (t.is_relative() && !base_dir.empty()) t = base_dir / t;
    s.table_path = t.string();
  }
  return s;
}

}  // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  expect_object(j, "", {"model", "grid", "control", "initial", "outputs", "checks"});
  RunConfig c;
  try {
    if (j.contains("model")) c.model = parse_model(j.at("model"));
  } catch (const std::invalid_argument& e) {
    fail("model", e.what());
  }

  const json g = j.value("grid", json::object());
  expect_object(g, "grid", {"L", "N"});
  c.L = get_real(g, "grid", "L", c.L);
  if (g.contains("N") && g.at("N").is_number() && g.at("N").get<double>() < 0) {
    fail("grid.N", "must be positive, got " + g.at("N").dump());
  }
  c.N = get_count(g, "grid", "N", c.N);
  if (!(c.L > 0.0)) fail("grid.L", "must be positive");
  if (c.N < 16 || c.N % 2 != 0) fail("grid.N", "must be even and at least 16, got " + std::to_string(c.N));

  const json ct = j.value("control", json::object());
  expect_object(ct, "control",
                {"t_end", "cfl", "dt_min", "dt_max", "blowup_grad_threshold", "dealias", "resolution_tol", "framework"});
  StepControl& k = c.control;
  k.t_end = get_real(ct, "control", "t_end", k.t_end);
  k.cfl = get_real(ct, "control", "cfl", k.cfl);
  k.dt_min = get_real(ct, "control", "dt_min", k.dt_min);
  k.dt_max = get_real(ct, "control", "dt_max", k.dt_max);
  k.blowup_grad_threshold = get_real(ct, "control", "blowup_grad_threshold", k.blowup_grad_threshold);
  k.dealias = get_bool(ct, "control", "dealias", k.dealias);
  k.resolution_tol = get_real(ct, "control", "resolution_tol", k.resolution_tol);
  const std::string fw = get_string(ct, "control", "framework", std::string(to_string(k.framework)));
  const auto f = parse_framework(fw);
  if (!f) fail("control.framework", "expected Hs or H2, got '" + fw + "'");
  k.framework = *f;
  try {
    k.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }

  const json in = j.value("initial", json::object());
  expect_object(in, "initial", {"u", "rho"});
  c.u0 = parse_init(in.value("u", json::object()), "initial.u", base_dir);
  c.rho0 = parse_init(in.value("rho", json::object()), "initial.rho", base_dir);

  const json o = j.value("outputs", json::object());
  expect_object(o, "outputs", {"directory", "diag_every", "snapshot_every", "char_label_stride", "hs_order"});
  OutputOptions& out = c.outputs;
  out.directory = get_string(o, "outputs", "directory", out.directory);
  out.diag_every = get_count(o, "outputs", "diag_every", out.diag_every);
  out.snapshot_every = get_count(o, "outputs", "snapshot_every", out.snapshot_every);
  out.char_label_stride = get_count(o, "outputs", "char_label_stride", out.char_label_stride);
  out.hs_order = get_real(o, "outputs", "hs_order", out.hs_order);
  if (out.diag_every == 0) fail("outputs.diag_every", "must be at least 1");
  if (out.char_label_stride == 0) fail("outputs.char_label_stride", "must be at least 1");
  if (out.hs_order < 0.0) fail("outputs.hs_order", "must be non-negative");

  const json ch = j.value("checks", json::object());
  expect_object(ch, "checks",
                {"transport", "identities", "gronwall", "rho_sup", "conservation", "symmetry", "riccati",
                 "h3_energy_flagged", "symmetry_mode", "tolerances"});
  CheckToggles& t = c.checks;
  t.transport = get_bool(ch, "checks", "transport", t.transport);
  t.identities = get_bool(ch, "checks", "identities", t.identities);
  t.gronwall = get_bool(ch, "checks", "gronwall", t.gronwall);
  t.rho_sup = get_bool(ch, "checks", "rho_sup", t.rho_sup);
  t.conservation = get_bool(ch, "checks", "conservation", t.conservation);
  t.symmetry = get_bool(ch, "checks", "symmetry", t.symmetry);
  t.riccati = get_bool(ch, "checks", "riccati", t.riccati);
  t.h3_energy_flagged = get_bool(ch, "checks", "h3_energy_flagged", t.h3_energy_flagged);
  const std::string mode = get_string(ch, "checks", "symmetry_mode", std::string(to_string(t.symmetry_mode)));
  const auto m = parse_symmetry_mode(mode);
  if (!m) fail("checks.symmetry_mode", "expected UOddRhoEven or UOddRhoOdd, got '" + mode + "'");
  t.symmetry_mode = *m;

  const json tj = ch.value("tolerances", json::object());
  expect_object(tj, "checks.tolerances",
                {"transport", "identity_rel", "symmetry", "symmetry_grace_steps", "origin", "conservation",
                 "gronwall_slack", "rho_sup_slack"});
  Tolerances& tol = t.tol;
  const std::string tp = "checks.tolerances";
  tol.transport = get_real(tj, tp, "transport", tol.transport);
  tol.identity_rel = get_real(tj, tp, "identity_rel", tol.identity_rel);
  tol.symmetry = get_real(tj, tp, "symmetry", tol.symmetry);
  tol.symmetry_grace_steps = get_count(tj, tp, "symmetry_grace_steps", tol.symmetry_grace_steps);
  tol.origin = get_real(tj, tp, "origin", tol.origin);
  tol.conservation = get_real(tj, tp, "conservation", tol.conservation);
  tol.gronwall_slack = get_real(tj, tp, "gronwall_slack", tol.gronwall_slack);
  tol.rho_sup_slack = get_real(tj, tp, "rho_sup_slack", tol.rho_sup_slack);
  return c;
}

json to_json(const InitSpec& s) {
  json j{{"kind", to_string(s.kind)}, {"amplitude", s.amplitude}, {"width", s.width}, {"center", s.center}};
  if (s.m0) j["m0"] = to_json(*s.m0);
  if (s.kind == ProfileKind::CustomTable) j["table"] = s.table_path;
  return j;
}

json to_json(const RunConfig& c) {
  json model{{"case_tag", to_string(c.model.case_tag)}};
  if (c.model.case_tag == CaseTag::Custom) {
    model["k1"] = c.model.k1;
    model["k2"] = c.model.k2;
    model["k3"] = c.model.k3;
  } else {
    model["b"] = c.model.b.value_or(0.0);
  }
  const StepControl& k = c.control;
  const Tolerances& tol = c.checks.tol;
  return json{
      {"model", model},
      {"grid", {{"L", c.L}, {"N", c.N}}},
      {"control",
       {{"t_end", k.t_end},
        {"cfl", k.cfl},
        {"dt_min", k.dt_min},
        {"dt_max", k.dt_max},
        {"blowup_grad_threshold", k.blowup_grad_threshold},
        {"dealias", k.dealias},
        {"resolution_tol", k.resolution_tol},
        {"framework", to_string(k.framework)}}},
      {"initial", {{"u", to_json(c.u0)}, {"rho", to_json(c.rho0)}}},
      {"outputs",
       {{"directory", c.outputs.directory},
        {"diag_every", c.outputs.diag_every},
        {"snapshot_every", c.outputs.snapshot_every},
        {"char_label_stride", c.outputs.char_label_stride},
        {"hs_order", c.outputs.hs_order}}},
      {"checks",
       {{"transport", c.checks.transport},
        {"identities", c.checks.identities},
        {"gronwall", c.checks.gronwall},
        {"rho_sup", c.checks.rho_sup},
        {"conservation", c.checks.conservation},
        {"symmetry", c.checks.symmetry},
        {"riccati", c.checks.riccati},
        {"h3_energy_flagged", c.checks.h3_energy_flagged},
        {"symmetry_mode", to_string(c.checks.symmetry_mode)},
        {"tolerances",
         {{"transport", tol.transport},
          {"identity_rel", tol.identity_rel},
          {"symmetry", tol.symmetry},
          {"symmetry_grace_steps", tol.symmetry_grace_steps},
          {"origin", tol.origin},
          {"conservation", tol.conservation},
          {"gronwall_slack", tol.gronwall_slack},
          {"rho_sup_slack", tol.rho_sup_slack}}}}},
  };
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  const auto base = path.parent_path();
  if (j.is_object() && j.contains("config") && j.contains("report")) return parse_run_config(j.at("config"), base);
  return parse_run_config(j, base);
}

}  // namespace bfam::cli
