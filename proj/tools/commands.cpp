#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "report.hpp"
#include "semiquant/corrections.hpp"
#include "semiquant/error.hpp"
#include "semiquant/kernels.hpp"
#include "semiquant/oracle.hpp"
#include "semiquant/quadrature.hpp"
#include "semiquant/spectrum.hpp"
#include "semiquant/sturmian.hpp"

namespace semiquant::cli {

namespace {

using nlohmann::ordered_json;

// A failure while reading the configuration or building the potential.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string catalog;
  std::string table;
  std::string class_five;
  std::map<std::string, double> params;  // only flags given on the command line
  double beta = 1.0;
  std::string mode = "leading";
  double t = 0.0;
  std::string format = "csv";
  std::string output;
  int cap = 12;
  std::string sweep;
  std::string oracle = "auto";
  std::string levels = "1,2,3";
  std::optional<double> fixed_w;
  bool no_oracle = false;
  std::string modes = "leading,first-order,class-exact";
  bool beta_sweep = false;
};

const char* const kParamNames[] = {"U", "r", "scale", "eta", "omega", "D", "a", "V0", "alpha"};

void add_common(CLI::App* sub, Options& o, std::map<std::string, double>& raw) {
  auto* group = sub->add_option_group("potential", "exactly one potential selector");
  group->add_option("--catalog", o.catalog, "catalog family name");
  group->add_option("--table", o.table, "two-column (x, V) file");
  group->add_option("--class-five", o.class_five, "A,B,C,a2,a1,a0[,s0]");
  group->require_option(1);
  for (const char* name : kParamNames) {
    sub->add_option(std::string("--") + name, raw[name], std::string("family parameter ") + name);
  }
  sub->add_option("--beta", o.beta, "quantum parameter beta > 0")->capture_default_str();
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("--output", o.output, "output file (default: standard output)");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') throw ConfigError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

FamilyParams family_params(const Options& o) {
  FamilyParams p;
  for (const auto& [k, v] : o.params) p[k] = v;
  return p;
}

PotentialModel build_model(const Options& o, const FamilyParams& params) {
  if (!o.catalog.empty()) return catalog(o.catalog, params);
  if (!params.empty()) throw ConfigError("family parameters need --catalog");
  if (!o.table.empty()) {
    const auto samples = read_table(o.table);
    return from_table(samples);
  }
  const auto c = parse_list(o.class_five);
  if (c.size() != 6 && c.size() != 7) throw ConfigError("--class-five needs 6 or 7 comma-separated numbers");
  ClassFiveSpec spec{.A = c[0], .B = c[1], .C = c[2], .a2 = c[3], .a1 = c[4], .a0 = c[5], .s0 = c.size() == 7 ? c[6] : 0.0};
  return build_class_five(spec);
}

ordered_json potential_json(const Options& o) {
  ordered_json p = ordered_json::object();
  if (!o.catalog.empty()) {
    p["selector"] = "catalog";
    p["name"] = o.catalog;
  } else if (!o.table.empty()) {
    p["selector"] = "table";
    p["path"] = o.table;
  } else {
    p["selector"] = "class-five";
    p["coefficients"] = o.class_five;
  }
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : o.params) params[k] = rounded(v);
  p["params"] = params;
  return p;
}

ordered_json invariant_json(const Table& t) { return rows_json(t); }

void emit(const Options& o, std::ostream& out, const ordered_json& config, const Table& rows,
          const Table* invariants) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file '" + o.output + "'");
    sink = &file;
  }
  if (o.format == "json") {
    ordered_json doc = ordered_json::object();
    doc["config"] = config;
    doc["rows"] = rows_json(rows);
    doc["invariant_results"] = invariants ? invariant_json(*invariants) : ordered_json::array();
    *sink << doc.dump(2) << '\n';
  } else {
    write_csv(*sink, rows);
  }
}

Table invariant_table() { return Table{{"invariant", "subject", "measured", "bound", "status"}, {}}; }

void add_check(Table& t, const std::string& name, const std::string& subject, double measured, double bound,
               bool pass, bool expected_fail = false) {
  std::string status = pass ? "pass" : "fail";
  if (expected_fail) status = pass ? "unexpected-pass" : "expected-fail";
  t.add({name, subject, measured, bound, status});
}

bool all_pass(const Table& t) {
  for (const auto& row : t.rows) {
    const std::string& s = std::get<std::string>(row[4]);
    if (s != "pass" && s != "expected-fail") return false;
  }
  return true;
}

// ---------------------------------------------------------------- spectrum

struct OracleLevels {
  std::vector<double> energies;
  std::string kind = "none";
};

OracleLevels oracle_levels(const PotentialModel& model, double beta, const Options& o) {
  OracleLevels out;
  if (o.oracle == "none") return out;
  if (o.oracle != "grid" && model.has_exact_spectrum()) {
    out.energies = closed_form_spectrum(model, beta, model.is_well() ? 4096 : o.cap);
    out.kind = "closed-form";
    return out;
  }
  if (o.oracle == "closed") throw Error(ErrorCode::NoClosedForm, "model '" + model.name() + "' has no closed form");
  GridSolveConfig config;
  if (!model.is_well()) config.levels_wanted = o.cap;
  out.energies = grid_eigensolve(model, beta, config).energies;
  out.kind = "grid";
  return out;
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const QuantizationMode mode = parse_mode(o.mode, o.t);
  const FamilyParams base = family_params(o);

  std::string sweep_name;
  std::vector<double> sweep_values{std::nan("")};
  if (!o.sweep.empty()) {
    const auto eq = o.sweep.find('=');
    if (eq == std::string::npos || o.catalog.empty()) throw ConfigError("--sweep needs NAME=v1,v2,... and --catalog");
    sweep_name = o.sweep.substr(0, eq);
    sweep_values = parse_list(o.sweep.substr(eq + 1));
    if (sweep_values.empty()) throw ConfigError("--sweep has no values");
  }

  std::vector<PotentialModel> models;
  for (double v : sweep_values) {
    FamilyParams p = base;
    if (!sweep_name.empty()) p[sweep_name] = v;
    models.push_back(build_model(o, p));
  }

  Table rows{{}, {}};
  if (!sweep_name.empty()) rows.columns.push_back(sweep_name);
  for (const char* c : {"n", "epsilon", "mode", "delta_used", "delta1", "delta1_source", "residual", "oracle_epsilon",
                        "error"}) {
    rows.columns.push_back(c);
  }
  Table invariants = invariant_table();
  OracleLevels last_oracle;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const auto levels = solve_spectrum(models[m], mode, o.beta, {o.cap});
    const OracleLevels oracle = oracle_levels(models[m], o.beta, o);
    last_oracle = oracle;
    double max_residual = 0.0;
    for (const LevelResult& l : levels) {
      std::vector<Cell> row;
      if (!sweep_name.empty()) row.push_back(sweep_values[m]);
      row.push_back(static_cast<long long>(l.n));
      row.push_back(l.epsilon);
      row.push_back(to_string(l.mode));
      row.push_back(l.delta_used);
      row.push_back(l.delta1);
      row.push_back(std::string(to_string(l.delta1_source)));
      row.push_back(l.residual);
      if (static_cast<std::size_t>(l.n) < oracle.energies.size()) {
        const double e = oracle.energies[static_cast<std::size_t>(l.n)];
        row.push_back(e);
        row.push_back(std::abs(l.epsilon - e));
      } else {
        row.push_back(std::monostate{});
        row.push_back(std::monostate{});
      }
      rows.add(std::move(row));
      max_residual = std::max(max_residual, l.residual);
    }
    const std::string subject = sweep_name.empty() ? models[m].name() : sweep_name + "=" + format_number(sweep_values[m]);
    add_check(invariants, "max_residual", subject, max_residual, 1e-8, max_residual < 1e-8);
    if (oracle.kind != "none" && models[m].is_well()) {
      const double count = static_cast<double>(levels.size());
      const double ref = static_cast<double>(oracle.energies.size());
      add_check(invariants, "level_count_matches_oracle", subject, count - ref, 0.0, count == ref);
    }
  }

  ordered_json config = ordered_json::object();
  config["command"] = "spectrum";
  config["potential"] = potential_json(o);
  config["beta"] = rounded(o.beta);
  config["mode"] = to_string(mode);
  if (mode.kind == ModeKind::TwoParameter) config["t"] = rounded(o.t);
  config["cap"] = o.cap;
  if (!sweep_name.empty()) config["sweep"] = o.sweep;
  config["oracle"] = last_oracle.kind;
  emit(o, out, config, rows, &invariants);
  return kOk;
}

// -------------------------------------------------------------- thresholds

SturmianFamily build_family(const Options& o) {
  if (o.catalog.empty()) throw ConfigError("thresholds need --catalog tanh2|poschl_teller|sturmian_family|perturbed_sturmian");
  const FamilyParams p = family_params(o);
  auto get = [&](const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
  };
  auto allow = [&](std::initializer_list<std::string_view> keys) {
    for (const auto& [k, v] : p) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
        throw ConfigError("parameter --" + k + " does not apply to thresholds for " + o.catalog);
      }
    }
  };
  if (o.fixed_w) {
    if (o.catalog != "sturmian_family") throw ConfigError("--fixed-W needs --catalog sturmian_family");
    allow({"scale"});
    return SturmianFamily::fixed_w(*o.fixed_w, get("scale", 1.0));
  }
  if (o.catalog == "tanh2" || o.catalog == "poschl_teller") {
    allow({"alpha", "scale"});
    return SturmianFamily::class_member(1.0, get("alpha", get("scale", 1.0)));
  }
  if (o.catalog == "sturmian_family") {
    allow({"r", "scale"});
    return SturmianFamily::class_member(get("r", 1.0), get("scale", 1.0));
  }
  if (o.catalog == "perturbed_sturmian") {
    allow({"r", "scale", "eta"});
    return SturmianFamily::perturbed(get("r", 1.0), get("scale", 1.0), get("eta", 0.1));
  }
  throw ConfigError("family '" + o.catalog + "' has no threshold sweep");
}

int cmd_thresholds(const Options& o, std::ostream& out) {
  const SturmianFamily family = build_family(o);
  std::vector<int> ns;
  for (double v : parse_list(o.levels)) {
    if (v < 0 || v != std::floor(v)) throw ConfigError("--n takes non-negative integers");
    ns.push_back(static_cast<int>(v));
  }
  if (ns.empty()) throw ConfigError("--n is empty");

  Table rows{{"n", "U_condition21", "U_refined", "U_oracle", "rel_err_condition21", "rel_err_refined", "b", "k", "t",
              "note"},
             {}};
  for (int n : ns) {
    std::vector<Cell> row{static_cast<long long>(n)};
    std::optional<ThresholdResult> c21, refined, oracle;
    std::string note;
    try {
      c21 = threshold_U(family, n, o.beta, ThresholdMethod::Condition21);
      refined = threshold_U(family, n, o.beta, ThresholdMethod::RefinedDelta);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoRealRoot) throw;
      note = "no positive threshold";
    }
    if (c21 && !o.no_oracle && n >= 1) oracle = threshold_U_oracle(family, n, o.beta);
    auto value = [](const std::optional<ThresholdResult>& r) -> Cell {
      return r ? Cell{r->U} : Cell{std::monostate{}};
    };
    row.push_back(value(c21));
    row.push_back(value(refined));
    row.push_back(value(oracle));
    if (oracle) {
      row.push_back((c21->U - oracle->U) / oracle->U);
      row.push_back((refined->U - oracle->U) / oracle->U);
    } else {
      row.push_back(std::monostate{});
      row.push_back(std::monostate{});
    }
    row.push_back(small_parameter_b(n + 1));
    row.push_back(c21 ? family.k(c21->U) : (family.has_fixed_ratio() ? family.k(1.0) : std::nan("")));
    row.push_back(refined ? Cell{refined->t} : Cell{std::monostate{}});
    row.push_back(note);
    rows.add(std::move(row));
  }

  ordered_json config = ordered_json::object();
  config["command"] = "thresholds";
  config["family"] = family.name();
  config["potential"] = potential_json(o);
  if (o.fixed_w) config["fixed_W"] = rounded(*o.fixed_w);
  config["beta"] = rounded(o.beta);
  config["n"] = ns;
  config["oracle"] = !o.no_oracle;
  emit(o, out, config, rows, nullptr);
  return kOk;
}

// ----------------------------------------------------------------- compare

int cmd_compare(const Options& o, std::ostream& out) {
  const PotentialModel model = build_model(o, family_params(o));
  std::vector<QuantizationMode> modes;
  for (const std::string& name : split(o.modes)) modes.push_back(parse_mode(name, o.t));
  if (modes.empty()) throw ConfigError("--modes is empty");
  const ComparisonTable table = compare_modes(model, o.beta, modes, {o.beta_sweep, o.cap});

  Table rows{{"kind", "n", "mode", "beta", "epsilon", "oracle", "abs_error", "rel_error", "slope"}, {}};
  for (const ComparisonRow& r : table.rows) {
    rows.add({std::string("level"), static_cast<long long>(r.n), to_string(r.mode), r.beta, r.epsilon, r.oracle,
              r.abs_error, r.rel_error, std::monostate{}});
  }
  for (const SlopeFit& s : table.slopes) {
    rows.add({std::string("slope"), static_cast<long long>(s.n), to_string(s.mode), std::monostate{}, std::monostate{},
              std::monostate{}, std::monostate{}, std::monostate{}, s.slope});
  }
  ordered_json config = ordered_json::object();
  config["command"] = "compare";
  config["potential"] = potential_json(o);
  config["beta"] = rounded(o.beta);
  auto names = ordered_json::array();
  for (const auto& m : modes) names.push_back(to_string(m));
  config["modes"] = names;
  config["beta_sweep"] = o.beta_sweep;
  config["oracle"] = table.oracle;
  emit(o, out, config, rows, nullptr);
  return kOk;
}

// ---------------------------------------------------------------- validate

struct Member {
  std::string label;
  PotentialModel model;
};

std::vector<Member> class_members() {
  return {{"harmonic", harmonic(1.0)},
          {"morse(D=10,a=1)", morse(10.0, 1.0)},
          {"tanh2(U=2)", poschl_teller(2.0, 1.0)},
          {"tanh2(U=6)", poschl_teller(6.0, 1.0)},
          {"tanh2(U=12)", poschl_teller(12.0, 1.0)},
          {"sturmian_family(U=1,r=3)", sturmian_family(1.0, 3.0, 1.0)},
          {"sturmian_family(U=4,r=3)", sturmian_family(4.0, 3.0, 1.0)}};
}

std::vector<double> interior_energies(const PotentialModel& m, double beta) {
  if (!m.is_well()) {
    const double s = m.energy_scale(beta);
    return {m.v_min() + s, m.v_min() + 2.0 * s, m.v_min() + 3.0 * s};
  }
  const double span = m.edge() - m.v_min();
  return {m.v_min() + 0.25 * span, m.v_min() + 0.5 * span, m.v_min() + 0.75 * span};
}

int cmd_validate(const Options& o, std::ostream& out) {
  const double beta = o.beta;
  Table t = invariant_table();

  for (const Member& m : class_members()) {
    const auto levels = solve_spectrum(m.model, QuantizationMode::class_exact(), beta, {5});
    GridSolveConfig config;
    if (!m.model.is_well()) config.levels_wanted = 5;
    const auto grid = grid_eigensolve(m.model, beta, config).energies;
    double worst = levels.size() == grid.size() ? 0.0 : kInf;
    for (std::size_t i = 0; i < std::min(levels.size(), grid.size()); ++i) {
      worst = std::max(worst, std::abs(levels[i].epsilon - grid[i]));
    }
    add_check(t, "class_exact_vs_grid", m.label, worst, 1e-5, worst <= 1e-5);
  }

  for (const Member& m : class_members()) {
    const double closed = delta1_closed(*m.model.class_five(), beta);
    double worst = 0.0, gamma = 0.0;
    for (double e : interior_energies(m.model, beta)) {
      worst = std::max(worst, std::abs(delta1_numeric(m.model, e, beta).value - closed) / (1.0 + std::abs(closed)));
      gamma = std::max(gamma, std::abs(gamma_numeric(m.model, e, beta)));
    }
    add_check(t, "delta1_numeric_vs_closed", m.label, worst, 1e-4, worst <= 1e-4);
    add_check(t, "gamma_zero", m.label, gamma, 1e-3, gamma < 1e-3);
  }
  {
    const double g = std::abs(gamma_numeric(perturbed_sturmian(2.0, 1.0, 1.0, 0.2), 1.0, beta));
    add_check(t, "gamma_zero", "perturbed_sturmian(U=2,r=1,eta=0.2) eps=1", g, 1e-3, g < 1e-3, true);
    add_check(t, "gamma_detector_fires", "perturbed_sturmian(U=2,r=1,eta=0.2) eps=1", g, 1e-2, g > 1e-2);
  }

  auto edge_identity = [&](const SturmianFamily& fam, const std::string& label) {
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double U = 0.5 + 1.5 * i;
      const double d1 = delta1_closed(*fam(U).class_five(), beta);
      const double phi = phase_at_edge(fam, U, beta);
      const double k = fam.k(U);
      worst = std::max(worst, std::abs(d1 * phi * 8.0 / k + 1.0));
    }
    add_check(t, "edge_identity_delta1_phi", label, worst, 1e-8, worst < 1e-8);
  };
  edge_identity(SturmianFamily::class_member(1.0), "tanh2 family, 10 U values");
  edge_identity(SturmianFamily::class_member(3.0), "r=3 family, 10 U values");

  {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double d = dist(rng);
      worst = std::max(worst, std::abs(delta_two_param(d, 0.0) - delta_class(d)));
    }
    add_check(t, "two_param_t0_equals_class", "1000 random delta1 in [-10,10]", worst, 1e-12, worst <= 1e-12);
  }
  {
    double worst = 0.0;
    for (double x : {1e-1, 1e-2}) {
      worst = std::max(worst, std::abs(delta_class(x) - delta_series(x, 3)) / std::pow(x, 5));
    }
    add_check(t, "series_consistency_over_x5", "x in {1e-1, 1e-2}", worst, 100.0, worst <= 100.0);
  }
  {
    double prev = 0.0, worst = 0.0;
    bool monotone = true;
    for (double d = 0.01; d < 1e12; d *= 1.7) {
      const double v = delta_class(d);
      worst = std::max(worst, std::abs(v));
      if (!(v > prev) && v != 0.5) monotone = false;
      prev = v;
    }
    add_check(t, "delta_class_bounded_monotone", "delta1 from 1e-2 to 1e12", worst, 0.5, worst < 0.5 && monotone);
  }
  {
    double c[3];
    const double phis[3] = {0.1, 0.05, 0.025};
    for (int i = 0; i < 3; ++i) {
      c[i] = std::abs(refined_delta_U(phis[i], -1.0 / (8.0 * phis[i]), 1.0) + 0.5 - phis[i]) / (phis[i] * phis[i]);
    }
    const double ratio = std::max({c[1] / c[0], c[0] / c[1], c[2] / c[0], c[0] / c[2]});
    add_check(t, "edge_limit_constant_ratio", "Phi in {0.1, 0.05, 0.025}", ratio, 2.0, ratio <= 2.0);
  }

  {
    const SturmianFamily fam = SturmianFamily::class_member(1.0);
    double prev_err = kInf;
    bool shrinking = true;
    for (int n = 1; n <= 3; ++n) {
      const double exact = n * (n + 1) * beta * beta;
      const double oracle = threshold_U_oracle(fam, n, beta).U;
      const double refined = threshold_U(fam, n, beta, ThresholdMethod::RefinedDelta).U;
      const double c21 = threshold_U(fam, n, beta, ThresholdMethod::Condition21).U;
      const std::string label = "tanh2 family n=" + std::to_string(n);
      add_check(t, "threshold_oracle_vs_exact", label, std::abs(oracle - exact) / exact, 1e-4,
                std::abs(oracle - exact) / exact <= 1e-4);
      add_check(t, "threshold_refined_vs_oracle", label, std::abs(refined - oracle) / oracle, 1e-5,
                std::abs(refined - oracle) / oracle <= 1e-5);
      const double err = std::abs(c21 - exact) / exact;
      shrinking = shrinking && err < prev_err;
      prev_err = err;
    }
    add_check(t, "condition21_error_decreases", "tanh2 family n=1..3", prev_err, 1e-3, shrinking);
  }

  for (const Member& m : class_members()) {
    if (!m.model.has_exact_spectrum()) continue;
    GridSolveConfig config;
    if (!m.model.is_well()) config.levels_wanted = 5;
    const auto grid = grid_eigensolve(m.model, beta, config).energies;
    const auto exact = closed_form_spectrum(m.model, beta, static_cast<int>(grid.size()));
    double worst = grid.size() == exact.size() ? 0.0 : kInf;
    for (std::size_t i = 0; i < std::min(grid.size(), exact.size()); ++i) {
      worst = std::max(worst, std::abs(grid[i] - exact[i]));
    }
    add_check(t, "grid_vs_closed_form", m.label, worst, 1e-6, worst <= 1e-6);
  }
  {
    const double p = grid_convergence_order(poschl_teller(6.0, 1.0), beta, 0, {});
    add_check(t, "grid_convergence_order", "tanh2(U=6) ground level", p, 2.0, p >= 1.8 && p <= 2.2);
  }
  {
    const PotentialModel p = perturbed_sturmian(15.0, 1.0, 1.0, 0.1);
    const auto grid = grid_eigensolve(p, beta).energies;
    const auto lead = solve_spectrum(p, QuantizationMode::leading(), beta);
    const auto first = solve_spectrum(p, QuantizationMode::first_order(), beta);
    const auto exact = solve_spectrum(p, QuantizationMode::class_exact(), beta);
    const std::size_t n = std::min({grid.size(), lead.size(), first.size(), exact.size()});
    int violations = lead.size() == grid.size() && first.size() == grid.size() && exact.size() == grid.size() ? 0 : 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double el = std::abs(lead[i].epsilon - grid[i]);
      const double ef = std::abs(first[i].epsilon - grid[i]);
      const double ec = std::abs(exact[i].epsilon - grid[i]);
      if (!(ec <= ef && ef <= el)) ++violations;
    }
    add_check(t, "mode_hierarchy_violations", "perturbed_sturmian(U=15,r=1,eta=0.1)", violations, 0.0, violations == 0);
  }

  ordered_json config = ordered_json::object();
  config["command"] = "validate";
  config["beta"] = rounded(beta);
  emit(o, out, config, t, &t);
  return all_pass(t) ? kOk : kComputeError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (const char* env = std::getenv("SEMIQUANT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) kernels::set_thread_limit(n);
  }

  CLI::App app{"Semiclassical bound-state spectra and thresholds of 1D wells", "semiquant"};
  app.require_subcommand(1);
  Options o;
  std::map<std::string, double> raw;

  auto* spectrum = app.add_subcommand("spectrum", "levels under one quantization mode");
  add_common(spectrum, o, raw);
  spectrum->add_option("--mode", o.mode, "leading | first-order | class-exact | two-param")->capture_default_str();
  spectrum->add_option("--t", o.t, "deviation parameter for two-param");
  spectrum->add_option("--cap", o.cap, "level cap for confining potentials")->capture_default_str();
  spectrum->add_option("--sweep", o.sweep, "NAME=v1,v2,... repeats the run over a family parameter");
  spectrum->add_option("--oracle", o.oracle, "auto | closed | grid | none")
      ->check(CLI::IsMember({"auto", "closed", "grid", "none"}))
      ->capture_default_str();

  auto* thresholds = app.add_subcommand("thresholds", "well strengths at which new bound states appear");
  add_common(thresholds, o, raw);
  thresholds->add_option("--n", o.levels, "comma-separated state indices")->capture_default_str();
  thresholds->add_option("--fixed-W", o.fixed_w, "hold W fixed instead of r (sturmian_family)");
  thresholds->add_flag("--no-oracle", o.no_oracle, "skip the grid-count oracle column");

  auto* validate = app.add_subcommand("validate", "run the invariant suite over the catalog");
  validate->add_option("--beta", o.beta, "quantum parameter beta > 0")->capture_default_str();
  validate->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  validate->add_option("--output", o.output, "output file (default: standard output)");

  auto* compare = app.add_subcommand("compare", "mode errors against the oracle");
  add_common(compare, o, raw);
  compare->add_option("--modes", o.modes, "comma-separated modes")->capture_default_str();
  compare->add_option("--t", o.t, "deviation parameter for two-param");
  compare->add_option("--cap", o.cap, "level cap for confining potentials")->capture_default_str();
  compare->add_flag("--beta-sweep", o.beta_sweep, "also run beta/2 and beta/4 and fit slopes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  CLI::App* active = app.get_subcommands().front();
  for (const char* name : kParamNames) {
    const CLI::Option* opt = active->get_option_no_throw(std::string("--") + name);
    if (opt && opt->count() > 0) o.params[name] = raw[name];
  }
  if (!(o.beta > 0.0)) {
    err << "error: --beta must be positive\n";
    return kConfigError;
  }

  const std::string command = active->get_name();
  try {
    if (command == "spectrum") return cmd_spectrum(o, out);
    if (command == "thresholds") return cmd_thresholds(o, out);
    if (command == "compare") return cmd_compare(o, out);
    return cmd_validate(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::BadParams:
      case ErrorCode::BadInput:
      case ErrorCode::UnknownFamily:
      case ErrorCode::NonMonotoneX:
      case ErrorCode::MultiWell:
      case ErrorCode::TooFewSamples:
      case ErrorCode::BadRatio:
      case ErrorCode::NoWell:
      case ErrorCode::BranchEscape:
        return kConfigError;
      default:
        return kComputeError;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kComputeError;
  }
}

}  // namespace semiquant::cli
