#include "cocycle_lab/experiment.hpp"

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/catalog.hpp"
#include "cocycle_lab/error.hpp"
#include "cocycle_lab/euclid.hpp"
#include "cocycle_lab/expr.hpp"
#include "cocycle_lab/gradient.hpp"
#include "cocycle_lab/littlewood_paley.hpp"
#include "cocycle_lab/multiplier.hpp"
#include "cocycle_lab/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace cocycle_lab::experiment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void usage(const std::string& ptr, const std::string& what) {
  throw Error(ErrorKind::usage, "config " + (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

const std::map<std::string, std::set<std::string>>& option_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"check-length", {"t_grid"}},
      {"cocycle", {"side", "construct", "radii"}},
      {"bmo", {"elements", "count", "characters", "t_grid"}},
      {"multiplier", {"trials", "steps"}},
      {"mihlin", {"expr", "n", "order", "eps", "shells", "directions", "threshold", "epsilon_mode", "r_min", "r_max",
                  "relative_step"}},
      {"lp", {"samples", "family"}},
      {"meyer", {"samples"}},
      {"khintchine", {"elements", "count", "characters", "num_z"}},
      {"fft", {"symbol", "sizes", "trials", "steps", "scale", "max_spread"}},
      {"report-merge", {"inputs"}},
  };
  return keys;
}

double p_from_json(const json& v, const std::string& ptr) {
  if (v.is_number()) {
    const double p = v.get<double>();
    if (!(p >= 1.0)) usage(ptr, "p must be >= 1");
    return p;
  }
  if (v.is_string() && (v == "inf" || v == "infinity")) return kInf;
  usage(ptr, "p must be a number >= 1 or \"inf\"");
}

json p_to_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

void require_object(const json& j, const std::string& ptr) {
  if (!j.is_object()) usage(ptr, "expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& ptr) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) usage(ptr + "/" + it.key(), "unknown field");
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"check-length", "cocycle", "bmo",        "multiplier", "mihlin",
                                                 "lp",           "meyer",   "khintchine", "fft",        "report-merge"};
  return names;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  require_object(j, "");
  reject_unknown(j, {"command", "group", "psi", "symbols", "p", "tolerances", "seed", "output", "options"}, "");
  ExperimentConfig c;
  if (!j.contains("command") || !j["command"].is_string()) usage("/command", "missing or not a string");
  c.command = j["command"].get<std::string>();
  if (!option_keys().count(c.command)) usage("/command", "unknown command \"" + c.command + "\"");

  if (j.contains("group")) {
    c.group = j["group"];
    require_object(c.group, "/group");
    reject_unknown(c.group, {"kind", "params", "path", "order", "table", "labels", "name"}, "/group");
  }
  if (j.contains("psi")) {
    c.psi = j["psi"];
    require_object(c.psi, "/psi");
    reject_unknown(c.psi, {"catalog", "values", "n", "v", "terms", "scale", "gamma", "radius", "alpha", "beta", "step",
                           "theta", "generators"},
                   "/psi");
    if (c.psi.contains("catalog") == c.psi.contains("values")) usage("/psi", "give exactly one of catalog or values");
  }
  if (j.contains("symbols")) {
    c.symbols = j["symbols"];
    if (!c.symbols.is_array()) usage("/symbols", "expected an array");
    for (std::size_t i = 0; i < c.symbols.size(); ++i) {
      const std::string ptr = "/symbols/" + std::to_string(i);
      require_object(c.symbols[i], ptr);
      reject_unknown(c.symbols[i], {"kind", "eta", "expr", "s", "values", "name"}, ptr);
      if (!c.symbols[i].contains("kind")) usage(ptr + "/kind", "missing");
    }
  }
  if (j.contains("p")) {
    const json& p = j["p"];
    if (!p.is_array()) usage("/p", "expected an array");
    for (std::size_t i = 0; i < p.size(); ++i) c.p.push_back(p_from_json(p[i], "/p/" + std::to_string(i)));
  }
  if (j.contains("tolerances")) {
    require_object(j["tolerances"], "/tolerances");
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
      if (!it->is_number()) usage("/tolerances/" + it.key(), "expected a number");
      c.tolerances[it.key()] = it->get<double>();
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) usage("/seed", "expected an unsigned integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    c.output = j["output"];
    require_object(c.output, "/output");
    reject_unknown(c.output, {"json", "csv"}, "/output");
  }
  if (j.contains("options")) {
    c.options = j["options"];
    require_object(c.options, "/options");
    reject_unknown(c.options, option_keys().at(c.command), "/options");
  } else {
    c.options = json::object();
  }
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  if (!group.is_null()) j["group"] = group;
  if (!psi.is_null()) j["psi"] = psi;
  if (!symbols.is_null()) j["symbols"] = symbols;
  if (!p.empty()) {
    json a = json::array();
    for (double v : p) a.push_back(p_to_json(v));
    j["p"] = a;
  }
  if (!tolerances.empty()) j["tolerances"] = tolerances;
  j["seed"] = seed;
  if (!output.is_null()) j["output"] = output;
  j["options"] = options.is_null() ? json::object() : options;
  return j;
}

double ExperimentConfig::tol(const std::string& name, double fallback) const {
  auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

template <class T>
T opt(const json& o, const std::string& key, T fallback) {
  if (!o.is_object() || !o.contains(key)) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception&) {
    usage("/options/" + key, "wrong type");
  }
}

Eigen::VectorXd vec_of(const json& j, const std::string& ptr) {
  if (!j.is_array()) usage(ptr, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) usage(ptr + "/" + std::to_string(i), "expected a number");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

std::shared_ptr<const FiniteGroup> load_group(const json& g) {
  if (g.contains("path")) return std::make_shared<const FiniteGroup>(io::group_from_json(io::read_json_file(g["path"])));
  if (g.contains("table")) return std::make_shared<const FiniteGroup>(io::group_from_json(g));
  if (!g.contains("kind") || !g["kind"].is_string()) usage("/group/kind", "missing or not a string");
  static const std::map<std::string, GroupKind> kinds = {{"cyclic", GroupKind::cyclic},
                                                         {"dihedral", GroupKind::dihedral},
                                                         {"symmetric", GroupKind::symmetric},
                                                         {"product", GroupKind::product},
                                                         {"heisenberg_mod", GroupKind::heisenberg_mod}};
  const auto it = kinds.find(g["kind"].get<std::string>());
  if (it == kinds.end()) usage("/group/kind", "unknown group kind");
  std::vector<Index> params;
  if (g.contains("params")) {
    if (!g["params"].is_array()) usage("/group/params", "expected an array");
    for (std::size_t i = 0; i < g["params"].size(); ++i) {
      if (!g["params"][i].is_number_unsigned()) usage("/group/params/" + std::to_string(i), "expected a positive integer");
      params.push_back(g["params"][i].get<Index>());
    }
  }
  return std::make_shared<const FiniteGroup>(build_named(it->second, params));
}

template <class T>
T psi_param(const json& psi, const std::string& key, std::optional<T> fallback = {}) {
  if (!psi.contains(key)) {
    if (fallback) return *fallback;
    usage("/psi/" + key, "missing");
  }
  try {
    return psi.at(key).get<T>();
  } catch (const json::exception&) {
    usage("/psi/" + key, "wrong type");
  }
}

}  // namespace

std::shared_ptr<const Cocycle> Setup::require_cocycle() {
  if (!cocycle) {
    cocycle = std::make_shared<const Cocycle>(build_cocycle(require_psi()));
  }
  return cocycle;
}

const LengthFunction& Setup::require_psi() const {
  if (!psi) throw Error(ErrorKind::usage, "config /psi: this command needs a length function");
  return *psi;
}

Setup load_setup(const ExperimentConfig& cfg) {
  Setup s;
  std::shared_ptr<const FiniteGroup> finite;
  if (!cfg.group.is_null()) {
    finite = load_group(cfg.group);
    s.group = GroupCarrier(finite);
  }
  auto need_group = [&](const std::string& what) {
    if (!finite) usage("/group", what + " needs a group");
  };
  const json& p = cfg.psi;
  if (p.is_null()) {
    s.group_id = s.group.empty() ? "none" : s.group.describe();
    return s;
  }
  if (p.contains("values")) {
    need_group("an explicit length function");
    std::vector<double> values;
    try {
      values = p["values"].get<std::vector<double>>();
    } catch (const json::exception&) {
      usage("/psi/values", "expected an array of numbers");
    }
    s.psi.emplace(s.group, std::move(values));
  } else {
    const std::string name = psi_param<std::string>(p, "catalog");
    Cocycle c;
    if (name == "zn_roots") {
      c = catalog::zn_roots(psi_param<Index>(p, "n"));
    } else if (name == "heisenberg_roots") {
      c = catalog::heisenberg_roots(psi_param<Index>(p, "n"));
    } else if (name == "dihedral_plane") {
      if (!finite) finite = std::make_shared<const FiniteGroup>(build_dihedral(psi_param<Index>(p, "n")));
      const Index n = finite->order() / 2;
      if (finite->order() % 2 != 0 || !finite->same_table(build_dihedral(n))) {
        usage("/group", "dihedral_plane needs the dihedral group with the builder's labelling");
      }
      Eigen::VectorXd v = p.contains("v") ? vec_of(p["v"], "/psi/v") : Eigen::VectorXd(Eigen::Vector2d(1.0, 0.5));
      if (v.size() != 2) usage("/psi/v", "expected 2 entries");
      c = catalog::linear_coboundary(finite, catalog::dihedral_plane_rep(n), v);
    } else if (name == "regular") {
      need_group("the regular coboundary");
      Eigen::VectorXd v;
      if (p.contains("v")) {
        v = vec_of(p["v"], "/psi/v");
      } else {
        v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(finite->order()));
        v[0] = 1.0;
      }
      c = catalog::regular_coboundary(finite, v);
    } else if (name == "random") {
      need_group("a random length function");
      Rng rng(derive_seed(cfg.seed, "random-length"));
      s.psi = catalog::random_length(finite, rng, psi_param<int>(p, "terms", 2), psi_param<double>(p, "scale", 4.0));
    } else if (name == "directional") {
      const Eigen::VectorXd g = vec_of(psi_param<json>(p, "gamma"), "/psi/gamma");
      c = catalog::directional(std::span<const double>(g.data(), static_cast<std::size_t>(g.size())),
                               psi_param<int>(p, "radius", 4));
    } else if (name == "helix") {
      c = catalog::helix(psi_param<double>(p, "alpha"), psi_param<double>(p, "beta"), psi_param<double>(p, "step", 1.0),
                         psi_param<int>(p, "radius", 16));
    } else if (name == "free_so3") {
      std::string warning;
      c = catalog::free_so3(psi_param<double>(p, "theta", catalog::kDefaultFreeAngle), psi_param<int>(p, "radius", 2),
                            &warning);
      if (!warning.empty()) s.warnings.push_back(warning);
    } else if (name == "haagerup") {
      c = catalog::haagerup(psi_param<int>(p, "generators", 2), psi_param<int>(p, "radius", 2));
    } else {
      usage("/psi/catalog", "unknown catalog entry \"" + name + "\"");
    }
    if (!s.psi) {
      if (finite && c.group.finite() && !c.group.same_as(GroupCarrier(finite)) && !c.group.finite()->same_table(*finite)) {
        usage("/group", "group does not match the catalog cocycle");
      }
      s.group = c.group;
      s.psi.emplace(c.group, c.lengths());
      s.cocycle = std::make_shared<const Cocycle>(std::move(c));
    }
  }
  s.group_id = s.group.describe();
  return s;
}

namespace {

// Accumulates named checks, each with the tolerance it was tested against.
class Checks {
 public:
  void le(const std::string& name, double value, double tol) { add(name, value, tol, "<=", value <= tol); }
  void ge(const std::string& name, double value, double bound) { add(name, value, bound, ">=", value >= bound); }
  void truth(const std::string& name, bool ok) { add(name, ok ? 1.0 : 0.0, 1.0, "==", ok); }

  bool pass() const { return pass_; }
  const json& list() const { return list_; }

 private:
  void add(const std::string& name, double value, double tol, const char* rel, bool ok) {
    json c;
    c["name"] = name;
    c["value"] = std::isfinite(value) ? json(value) : json(io::format_double(value));
    c["tolerance"] = tol;
    c["relation"] = rel;
    c["pass"] = ok;
    list_.push_back(c);
    pass_ = pass_ && ok;
  }

  json list_ = json::array();
  bool pass_ = true;
};

json num(double v) { return std::isfinite(v) ? json(v) : json(io::format_double(v)); }

std::vector<double> grid_option(const json& o, const std::string& key, std::vector<double> fallback) {
  if (!o.contains(key)) return fallback;
  const Eigen::VectorXd v = vec_of(o[key], "/options/" + key);
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Elements for bmo / khintchine: random polynomials or single characters.
std::vector<std::pair<std::string, AlgebraElement>> pick_elements(const ExperimentConfig& cfg, const Setup& s,
                                                                  const std::string& label) {
  const LengthFunction& psi = s.require_psi();
  const auto& g = s.group.finite_ptr();
  std::vector<std::pair<std::string, AlgebraElement>> out;
  const std::string mode = opt<std::string>(cfg.options, "elements", "random");
  if (mode == "characters") {
    std::vector<Index> which;
    if (cfg.options.contains("characters")) {
      which = opt<std::vector<Index>>(cfg.options, "characters", {});
    } else {
      for (Index k = 1; k < g->order(); ++k) which.push_back(k);
    }
    for (Index k : which) {
      if (k >= g->order()) usage("/options/characters", "element index out of range");
      out.emplace_back("lambda(" + g->label(k) + ")", AlgebraElement::lambda(g, k));
    }
  } else if (mode == "random") {
    const int count = opt<int>(cfg.options, "count", 10);
    if (count < 1) usage("/options/count", "must be >= 1");
    for (int i = 0; i < count; ++i) {
      Rng rng(derive_seed(cfg.seed, label, static_cast<std::uint64_t>(i)));
      out.emplace_back("random#" + std::to_string(i), random_polynomial(psi, rng));
    }
  } else {
    usage("/options/elements", "expected \"random\" or \"characters\"");
  }
  return out;
}

json residuals_json(const CocycleResiduals& r) {
  return json{{"gram", r.gram},           {"length", r.length},
              {"law", r.law},             {"orthogonality", r.orthogonality},
              {"representation", r.representation}, {"coverage", r.coverage}};
}

void run_check_length(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks) {
  const LengthFunction& psi = s.require_psi();
  const double cn_tol = cfg.tol("conditional_negativity", 1e-10) * std::max(1.0, psi.max_value());
  const NegativityCertificate cert = is_conditionally_negative(psi, cn_tol);
  res["conditionally_negative"] = cert.pass;
  res["min_eig"] = cert.min_eig;
  res["max_psi"] = psi.max_value();
  checks.le("conditional_negativity", -cert.min_eig, cn_tol);
  const auto grid = grid_option(cfg.options, "t_grid", schoenberg_grid());
  const double psd_tol = cfg.tol("schoenberg_psd", 1e-8);
  const auto verdicts = schoenberg_check(psi, grid, psd_tol);
  json sv = json::array();
  double worst = kInf;
  for (const auto& v : verdicts) {
    sv.push_back({{"t", v.t}, {"min_eig", v.min_eig}, {"psd", v.psd}});
    worst = std::min(worst, v.min_eig);
  }
  res["schoenberg"] = sv;
  checks.ge("schoenberg_min_eig", worst, -psd_tol);
}

void run_cocycle(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks) {
  const LengthFunction& psi = s.require_psi();
  const std::string side = opt<std::string>(cfg.options, "side", "left");
  if (side != "left" && side != "right") usage("/options/side", "expected \"left\" or \"right\"");
  const bool construct = opt<bool>(cfg.options, "construct", false) || !s.cocycle || side == "right";
  Cocycle c = construct ? build_cocycle(psi, side == "left" ? Side::left : Side::right) : *s.cocycle;
  res["constructed"] = construct;
  res["side"] = to_string(c.side);
  res["dim"] = c.dim;
  res["kind"] = c.kind;
  const CocycleResiduals r = cocycle_residuals(c, &psi);
  res["residuals"] = residuals_json(r);
  checks.le("length_residual", r.length, cfg.tol("length", 1e-10) * std::max(1.0, psi.max_value()));
  checks.le("law_residual", r.law, cfg.tol("law", 1e-8));
  if (c.has_action()) {
    checks.le("orthogonality_residual", r.orthogonality, cfg.tol("orthogonality", 1e-8));
    checks.le("representation_residual", r.representation, cfg.tol("representation", 1e-8));
  }
  const SeparationReport sep = separation_report(c);
  res["separation"] = {{"delta", sep.delta}, {"injective", sep.injective}, {"well_separated", sep.well_separated},
                       {"standard", sep.standard}};
  if (sep.delta > 0.0 && c.dim > 0) {
    const auto radii = grid_option(cfg.options, "radii", {1.0, 2.0, 4.0});
    json counts = json::array();
    bool ok = true;
    for (const auto& bc : ball_count_check(c, radii)) {
      counts.push_back({{"radius", bc.radius}, {"count", bc.count}, {"bound", num(bc.bound)}, {"pass", bc.pass}});
      ok = ok && bc.pass;
    }
    res["ball_counts"] = counts;
    checks.truth("counting_bound", ok);
  }
}

void run_bmo(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks) {
  const LengthFunction& psi = s.require_psi();
  const auto grid = grid_option(cfg.options, "t_grid", default_bmo_grid());
  const double tol = cfg.tol("kadison_schwarz", 1e-8);
  json items = json::array();
  double worst = kInf;
  for (const auto& [name, f] : pick_elements(cfg, s, "bmo")) {
    const BmoReport r = bmo_norm(psi, f, grid, kInf);
    double m = kInf;
    for (double v : r.column_min_eig) m = std::min(m, v);
    for (double v : r.row_min_eig) m = std::min(m, v);
    worst = std::min(worst, m);
    items.push_back({{"element", name},
                     {"column", r.column},
                     {"row", r.row},
                     {"bmo", r.max},
                     {"column_argmax_t", r.column_argmax_t},
                     {"row_argmax_t", r.row_argmax_t},
                     {"boundary_argmax", r.boundary_argmax},
                     {"min_eig", m}});
    if (r.boundary_argmax) s.warnings.push_back(name + ": BMO supremum attained at the end of the t grid");
  }
  res["t_grid"] = grid;
  res["elements"] = items;
  checks.ge("kadison_schwarz_min_eig", worst, -tol);
}

MultiplierSymbol build_symbol(const json& spec, std::size_t i, Setup& s) {
  const std::string ptr = "/symbols/" + std::to_string(i);
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "riesz") {
    auto c = s.require_cocycle();
    if (!spec.contains("eta")) usage(ptr + "/eta", "missing");
    return riesz_symbol(*c, vec_of(spec["eta"], ptr + "/eta"));
  }
  if (kind == "radial") {
    if (!spec.contains("expr")) usage(ptr + "/expr", "missing");
    const SymbolExpr e = SymbolExpr::parse(spec["expr"].get<std::string>(), 1);
    return radial_symbol(s.require_psi(), [e](double x) { return e(std::span<const double>(&x, 1)); }, e.text());
  }
  if (kind == "imaginary_power") {
    if (!spec.contains("s") || !spec["s"].is_number()) usage(ptr + "/s", "missing or not a number");
    return imaginary_power_symbol(s.require_psi(), spec["s"].get<double>());
  }
  if (kind == "lifted") {
    auto c = s.require_cocycle();
    if (!spec.contains("expr")) usage(ptr + "/expr", "missing");
    const SymbolExpr e = SymbolExpr::parse(spec["expr"].get<std::string>(), static_cast<int>(std::max<Index>(c->dim, 1)));
    if (c->dim == 0) usage(ptr, "lifted symbols need a cocycle of dimension >= 1");
    return lifted_symbol(*c, [e](std::span<const double> xi) { return e(xi); }, e.text());
  }
  if (kind == "explicit") {
    if (!spec.contains("values")) usage(ptr + "/values", "missing");
    return explicit_symbol(s.group, io::complex_vector(spec["values"]));
  }
  usage(ptr + "/kind", "unknown symbol kind \"" + kind + "\"");
}

void run_multiplier(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks, io::CsvTable& table) {
  if (!cfg.symbols.is_array() || cfg.symbols.empty()) usage("/symbols", "the multiplier command needs symbols");
  const int trials = opt<int>(cfg.options, "trials", 4);
  const int steps = opt<int>(cfg.options, "steps", 200);
  const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{2.0} : cfg.p;
  json items = json::array();
  for (std::size_t i = 0; i < cfg.symbols.size(); ++i) {
    const json& spec = cfg.symbols[i];
    const MultiplierSymbol m = build_symbol(spec, i, s);
    const std::string name = spec.value("name", m.description.empty() ? to_string(m.kind) : m.description);
    json item;
    item["name"] = name;
    item["kind"] = to_string(m.kind);
    item["l2_norm_exact"] = l2_norm_exact(m);
    json searches = json::array();
    for (std::size_t k = 0; k < ps.size(); ++k) {
      const LpSearchResult r = lp_norm_search(m, ps[k], trials, steps, derive_seed(cfg.seed, "multiplier-" + std::to_string(i), k));
      searches.push_back({{"p", p_to_json(ps[k])}, {"lower_bound", r.lower_bound}, {"best_start", r.best_start}});
      table.add_row({s.group_id, name, io::format_double(ps[k]), io::format_double(r.lower_bound)});
      if (ps[k] == 2.0) {
        checks.le(name + ": p=2 search minus exact L2 norm", r.lower_bound - l2_norm_exact(m), cfg.tol("l2_law", 1e-9));
      }
    }
    item["searches"] = searches;
    if (m.kind == SymbolKind::riesz) {
      const Eigen::VectorXd eta = vec_of(spec["eta"], "/symbols/" + std::to_string(i) + "/eta");
      checks.le(name + ": max |m| - |eta|", l2_norm_exact(m) - eta.norm(), 1e-12);
      auto c = s.require_cocycle();
      if (c->has_action()) {
        const double r = schur_riesz_residual(*c, eta, 64, derive_seed(cfg.seed, "schur", i));
        item["schur_riesz_residual"] = r;
        checks.le(name + ": Schur-Riesz residual", r, cfg.tol("schur_riesz", 1e-8));
      }
    }
    if (s.cocycle || s.psi) {
      const auto conds = epsilon_free_conditions(*s.require_cocycle(), &m);
      item["epsilon_free"] = {{"abelian", conds.abelian},
                              {"lattice", conds.lattice},
                              {"finite_action", conds.finite_action},
                              {"radial", conds.radial},
                              {"distinct_actions", conds.distinct_actions}};
    }
    items.push_back(item);
  }
  res["symbols"] = items;
}

void run_mihlin(const ExperimentConfig& cfg, json& res, Checks& checks) {
  const json& o = cfg.options;
  if (!o.contains("expr")) usage("/options/expr", "missing");
  const int n = opt<int>(o, "n", 1);
  const SymbolExpr e = SymbolExpr::parse(opt<std::string>(o, "expr", ""), n);
  MihlinOptions mo;
  mo.order = opt<int>(o, "order", -1);
  mo.eps = opt<double>(o, "eps", 0.1);
  mo.shells = opt<int>(o, "shells", 25);
  mo.directions = opt<int>(o, "directions", 16);
  mo.r_min = opt<double>(o, "r_min", 1e-3);
  mo.r_max = opt<double>(o, "r_max", 1e3);
  mo.relative_step = opt<double>(o, "relative_step", 1e-4);
  mo.threshold = opt<double>(o, "threshold", 0.0);
  mo.epsilon_mode = opt<bool>(o, "epsilon_mode", false);
  const MihlinReport r = mihlin_check([e](std::span<const double> xi) { return e(xi); }, n, mo);
  res["expr"] = e.text();
  res["n"] = r.n;
  res["order"] = r.order;
  res["eps"] = r.eps;
  res["shells"] = {{"count", r.shells}, {"directions", r.directions}, {"r_min", r.r_min}, {"r_max", r.r_max}};
  json per = json::array();
  for (const auto& st : r.per_order) {
    per.push_back({{"order", st.order},
                   {"sup", st.sup},
                   {"sup_minus_eps", st.sup_minus},
                   {"sup_plus_eps", st.sup_plus},
                   {"sup_eps_envelope", st.sup_eps},
                   {"step", st.step}});
  }
  res["per_order"] = per;
  if (!r.finite) res["bad_point"] = r.bad_point;
  checks.truth("finite_derivatives", r.finite);
  if (mo.threshold > 0.0) {
    double worst = 0.0;
    for (const auto& st : r.per_order) worst = std::max(worst, mo.epsilon_mode ? st.sup_eps : st.sup);
    checks.le(mo.epsilon_mode ? "epsilon_envelope" : "mihlin_sup", worst, mo.threshold);
  }
}

DyadicFamily family_from(const ExperimentConfig& cfg, const LengthFunction& psi) {
  const json fam = cfg.options.contains("family") ? cfg.options["family"] : json::object();
  require_object(fam, "/options/family");
  reject_unknown(fam, {"bump", "m_min", "m_max", "normalize"}, "/options/family");
  const bool normalize = fam.value("normalize", true);
  std::optional<std::pair<int, int>> range;
  if (fam.contains("m_min") != fam.contains("m_max")) usage("/options/family", "give both m_min and m_max");
  if (fam.contains("m_min")) range = std::make_pair(fam["m_min"].get<int>(), fam["m_max"].get<int>());
  const std::string bump = fam.value("bump", std::string("default"));
  if (bump == "default") return dyadic_family(psi, normalize, range);
  const SymbolExpr e = SymbolExpr::parse(bump, 1);
  return dyadic_family(
      psi, normalize, range, [e](double x) { return e(std::span<const double>(&x, 1)).real(); }, e.text());
}

void run_lp(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks, io::CsvTable& table) {
  const LengthFunction& psi = s.require_psi();
  const DyadicFamily fam = family_from(cfg, psi);
  if (fam.extended) s.warnings.push_back(fam.note);
  const int samples = opt<int>(cfg.options, "samples", 20);
  if (samples < 1) usage("/options/samples", "must be >= 1");
  const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{2.0} : cfg.p;
  res["family"] = {{"bump", fam.description()}, {"m_min", fam.m_min()}, {"m_max", fam.m_max()},
                   {"normalized", fam.normalized()}, {"extended", fam.extended}};
  json per_p = json::array();
  for (double p : ps) {
    double lo = kInf, hi = 0.0, max_dev = 0.0;
    bool finite = true;
    for (int i = 0; i < samples; ++i) {
      Rng rng(derive_seed(cfg.seed, "lp", static_cast<std::uint64_t>(i)));
      const AlgebraElement f = AlgebraElement::random(s.group.finite_ptr(), rng);
      const SquareFunctionNorms sq = square_function_norms(psi, fam, f, p);
      double ratio = 1.0;
      if (fam.normalized()) {
        const Reconstruction rc = reconstruction_check(psi, fam, f, p);
        ratio = rc.ratio;
      }
      finite = finite && std::isfinite(ratio);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      max_dev = std::max(max_dev, std::abs(ratio - 1.0));
      table.add_row({s.group_id, io::format_double(p), std::to_string(i), io::format_double(sq.column),
                     io::format_double(sq.row), io::format_double(sq.rc), io::format_double(ratio)});
    }
    per_p.push_back({{"p", p_to_json(p)}, {"min_ratio", num(lo)}, {"max_ratio", num(hi)}});
    checks.truth("ratios finite at p=" + io::format_double(p), finite);
    if (p == 2.0 && fam.normalized()) checks.le("p=2 reconstruction |ratio - 1|", max_dev, cfg.tol("plancherel", 1e-9));
  }
  res["per_p"] = per_p;
}

void run_meyer(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks) {
  const LengthFunction& psi = s.require_psi();
  const int samples = opt<int>(cfg.options, "samples", 200);
  const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{2.0} : cfg.p;
  json per_p = json::array();
  for (double p : ps) {
    const MeyerStats st = meyer_ratio(psi, p, samples, cfg.seed);
    per_p.push_back({{"p", p_to_json(p)}, {"min", st.min}, {"max", st.max}, {"median", st.median}});
    if (p == 2.0) {
      checks.le("p=2 ratios |r - 1|", std::max(std::abs(st.max - 1.0), std::abs(st.min - 1.0)), cfg.tol("meyer_p2", 1e-6));
    }
    checks.le("max/min ratio at p=" + io::format_double(p), st.max / st.min, cfg.tol("meyer_spread", 50.0));
  }
  res["per_p"] = per_p;
  // ‖A^{1/2} f‖_2^2 = tau Gamma(f, f) on the same samples.
  double worst = 0.0, worst_gram = 0.0;
  std::shared_ptr<const Cocycle> c;
  try {
    c = s.require_cocycle();
  } catch (const Error&) {
    c = nullptr;
  }
  for (int i = 0; i < samples; ++i) {
    Rng rng(derive_seed(cfg.seed, "meyer", static_cast<std::uint64_t>(i)));
    const AlgebraElement f = random_polynomial(psi, rng);
    const AlgebraElement gam = gamma_generator(psi, f, f);
    worst = std::max(worst, std::abs(generator_apply(psi, f, 0.5).coeffs().squaredNorm() - gam.trace().real()));
    if (c && c->side == Side::left && c->group.finite()) {
      worst_gram = std::max(worst_gram, (gam.coeffs() - gamma_gram(*c, f, f).coeffs()).cwiseAbs().maxCoeff());
    }
  }
  res["identity_residual"] = worst;
  checks.le("|A^{1/2} f|_2^2 - tau Gamma(f,f)", worst, cfg.tol("gamma_trace", 1e-10));
  if (c) {
    res["gram_generator_residual"] = worst_gram;
    checks.le("Gamma generator vs Gram", worst_gram, cfg.tol("gamma_agreement", 1e-10));
  }
}

void run_khintchine(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks) {
  const LengthFunction& psi = s.require_psi();
  auto c = s.require_cocycle();
  const int num_z = opt<int>(cfg.options, "num_z", 20000);
  const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{2.0, 4.0} : cfg.p;
  json items = json::array();
  std::size_t idx = 0;
  for (const auto& [name, f] : pick_elements(cfg, s, "khintchine")) {
    for (double p : ps) {
      const KhintchineBand b = khintchine_band(psi, c, f, p, num_z, derive_seed(cfg.seed, "khintchine-mc", idx++));
      items.push_back({{"element", name},
                       {"p", p_to_json(p)},
                       {"mc_norm", b.mc_norm},
                       {"std_error", b.std_error},
                       {"rc_norm", b.rc_norm},
                       {"ratio", b.ratio}});
      checks.truth(name + " p=" + io::format_double(p) + ": mc >= rc - 4 se", b.pass);
      if (p == 2.0) {
        const double exact = std::sqrt(std::max(0.0, gamma_gram(*c, f, f).trace().real()));
        checks.le(name + " p=2: |mc - exact| / se", b.std_error > 0.0 ? std::abs(b.mc_norm - exact) / b.std_error : 0.0,
                  cfg.tol("mc_sigmas", 4.0));
      }
    }
  }
  res["bands"] = items;
}

void run_fft(const ExperimentConfig& cfg, Setup& s, json& res, Checks& checks, io::CsvTable& table) {
  const json& o = cfg.options;
  const json spec = o.contains("symbol") ? o["symbol"] : json{{"kind", "donut"}};
  require_object(spec, "/options/symbol");
  reject_unknown(spec, {"kind", "alpha", "beta", "gamma", "expr"}, "/options/symbol");
  const std::string kind = spec.value("kind", std::string("donut"));
  FrequencySymbol sym;
  if (kind == "donut") {
    std::string warning;
    sym = donut_symbol(spec.value("alpha", 1.0), spec.value("beta", std::sqrt(2.0)), spec.value("gamma", 0.25), &warning);
    if (!warning.empty()) s.warnings.push_back(warning);
  } else if (kind == "expr") {
    const SymbolExpr e = SymbolExpr::parse(spec.value("expr", std::string()), 1);
    sym = [e](double x) { return e(std::span<const double>(&x, 1)); };
  } else {
    usage("/options/symbol/kind", "expected \"donut\" or \"expr\"");
  }
  const std::vector<std::size_t> sizes = opt<std::vector<std::size_t>>(o, "sizes", {256, 512, 1024});
  const int trials = opt<int>(o, "trials", 2);
  const int steps = opt<int>(o, "steps", 100);
  const double scale = opt<double>(o, "scale", 0.0);
  const std::vector<double> ps = cfg.p.empty() ? std::vector<double>{2.0} : cfg.p;
  json rows = json::array();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto sweep = empirical_norm_sweep(sym, ps[k], sizes, trials, steps, derive_seed(cfg.seed, "fft", k), scale);
    double lo = kInf, hi = 0.0;
    for (const auto& r : sweep) {
      rows.push_back({{"n", r.n}, {"p", p_to_json(r.p)}, {"lower_bound", r.lower_bound}, {"exact_l2", r.exact_l2}});
      table.add_row({std::to_string(r.n), io::format_double(r.p), io::format_double(r.lower_bound), std::to_string(r.trials)});
      lo = std::min(lo, r.lower_bound);
      hi = std::max(hi, r.lower_bound);
      if (ps[k] == 2.0) {
        checks.le("N=" + std::to_string(r.n) + " p=2 |bound - sup|", std::abs(r.lower_bound - r.exact_l2), cfg.tol("plancherel", 1e-10));
      }
    }
    if (o.contains("max_spread") && lo > 0.0) {
      checks.le("max/min across N at p=" + io::format_double(ps[k]), hi / lo, opt<double>(o, "max_spread", 1.5));
    }
  }
  res["sweep"] = rows;
}

void run_merge(const ExperimentConfig& cfg, json& res, Checks& checks) {
  const auto inputs = opt<std::vector<std::string>>(cfg.options, "inputs", {});
  if (inputs.empty()) usage("/options/inputs", "report-merge needs input reports");
  json merged = json::array();
  for (const auto& path : inputs) {
    const json r = io::read_json_file(path);
    merged.push_back(stable_view(r));
    checks.truth(path, r.value("pass", false));
  }
  res["reports"] = merged;
}

}  // namespace

RunResult run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunResult out;
  json res = json::object();
  Checks checks;
  Setup s = cfg.command == "mihlin" || cfg.command == "fft" || cfg.command == "report-merge" ? Setup{} : load_setup(cfg);
  io::CsvTable table({"unused"});
  std::string table_name;

  const std::string& cmd = cfg.command;
  if (cmd == "check-length") {
    run_check_length(cfg, s, res, checks);
  } else if (cmd == "cocycle") {
    run_cocycle(cfg, s, res, checks);
  } else if (cmd == "bmo") {
    run_bmo(cfg, s, res, checks);
  } else if (cmd == "multiplier") {
    table = io::CsvTable({"group", "symbol", "p", "lower_bound"});
    table_name = "multiplier";
    run_multiplier(cfg, s, res, checks, table);
  } else if (cmd == "mihlin") {
    run_mihlin(cfg, res, checks);
  } else if (cmd == "lp") {
    table = io::CsvTable({"group", "p", "sample", "column", "row", "rc", "ratio"});
    table_name = "lp";
    run_lp(cfg, s, res, checks, table);
  } else if (cmd == "meyer") {
    run_meyer(cfg, s, res, checks);
  } else if (cmd == "khintchine") {
    run_khintchine(cfg, s, res, checks);
  } else if (cmd == "fft") {
    table = io::CsvTable({"N", "p", "lower_bound", "trials"});
    table_name = "fft";
    run_fft(cfg, s, res, checks, table);
  } else if (cmd == "report-merge") {
    run_merge(cfg, res, checks);
  } else {
    usage("/command", "unknown command \"" + cmd + "\"");
  }

  json report;
  report["command"] = cmd;
  report["config"] = cfg.to_json();
  report["group"] = s.group_id.empty() ? json(nullptr) : json(s.group_id);
  report["checks"] = checks.list();
  report["results"] = res;
  report["warnings"] = s.warnings;
  report["pass"] = checks.pass();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = {{"seconds", secs}};
  out.report = std::move(report);
  out.pass = checks.pass();
  if (!table_name.empty()) out.tables.emplace_back(table_name, std::move(table));
  return out;
}

json stable_view(const json& report) {
  json r = report;
  if (r.is_object()) r.erase("timing");
  return r;
}

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') out += "~0";
    else if (ch == '/') out += "~1";
    else out += ch;
  }
  return out;
}

void collect(const json& j, const std::string& ptr, json& fields, double tol) {
  if (j.is_number()) {
    fields[ptr] = {{"value", j.get<double>()}, {"tol", tol}};
  } else if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) collect(*it, ptr + "/" + escape_token(it.key()), fields, tol);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) collect(j[i], ptr + "/" + std::to_string(i), fields, tol);
  }
}

}  // namespace

json make_golden(const json& report, double tol) {
  json fields = json::object();
  if (report.contains("results")) collect(report["results"], "/results", fields, tol);
  return json{{"command", report.value("command", std::string())}, {"fields", fields}};
}

GoldenDiff verify_golden(const json& report, const json& golden) {
  GoldenDiff diff;
  if (!golden.contains("fields") || !golden["fields"].is_object()) {
    throw Error(ErrorKind::validation, "golden file has no fields object");
  }
  for (auto it = golden["fields"].begin(); it != golden["fields"].end(); ++it) {
    const std::string& ptr = it.key();
    const double expected = it->at("value").get<double>();
    const double tol = it->at("tol").get<double>();
    const json::json_pointer jp(ptr);
    if (!report.contains(jp) || !report.at(jp).is_number()) {
      diff.missing.push_back(ptr);
      diff.pass = false;
      continue;
    }
    const double got = report.at(jp).get<double>();
    if (!(std::abs(got - expected) <= tol * (1.0 + std::abs(expected)))) {
      diff.drifted.push_back(ptr + ": expected " + io::format_double(expected) + ", got " + io::format_double(got) +
                             " (tol " + io::format_double(tol) + ")");
      diff.pass = false;
    }
  }
  return diff;
}

}  // namespace cocycle_lab::experiment
