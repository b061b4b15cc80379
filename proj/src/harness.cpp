#include "qsis/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qsis/cardinal.hpp"
#include "qsis/error.hpp"
#include "qsis/recovery.hpp"

namespace qsis {

namespace {

using json = nlohmann::json;

enum class Type { string, number, integer, cells, number_list, integer_list, boolean };

struct Field {
  Type type;
  json fallback;  // null: optional with no default
};

using Schema = std::map<std::string, Field>;

const Schema& schema(const std::string& command) {
  static const std::map<std::string, Schema> all = [] {
    std::map<std::string, Schema> s;
    const Schema common{{"preset", {Type::string, nullptr}}, {"seed", {Type::integer, 1}}};
    auto with = [&](Schema extra) {
      extra.insert(common.begin(), common.end());
      return extra;
    };
    s["verify-kernel"] = with({{"kernel", {Type::string, "gaussian"}},
                               {"alpha", {Type::number, nullptr}},
                               {"K", {Type::cells, "auto"}},
                               {"M", {Type::integer, 1024}},
                               {"tail-tolerance", {Type::number, 1e-3}}});
    s["riesz"] = with({{"nodes", {Type::string, "lattice"}}, {"J", {Type::integer, 24}}});
    s["interpolate"] = with({{"psi", {Type::string, "gaussian(1)"}},
                             {"phi", {Type::string, nullptr}},
                             {"nodes", {Type::string, "lattice"}},
                             {"nodes-y", {Type::string, nullptr}},
                             {"J", {Type::integer, 24}},
                             {"X", {Type::number, nullptr}},
                             {"h", {Type::number, 1.0 / 64.0}},
                             {"central-fraction", {Type::number, 0.5}},
                             {"M", {Type::integer, 4096}}});
    s["cardinal"] = with({{"kernel", {Type::string, "gaussian"}},
                          {"alpha", {Type::number, nullptr}},
                          {"K", {Type::cells, "auto"}},
                          {"M", {Type::integer, 1 << 15}},
                          {"X", {Type::number, 8.0}},
                          {"h", {Type::number, 1.0 / 16.0}},
                          {"Xi", {Type::number, 4.0 * kPi}},
                          {"spectrum-points", {Type::integer, 1024}},
                          {"cardinality-tolerance", {Type::number, 1e-6}}});
    s["recover"] = with({{"family", {Type::string, "convolution"}},
                         {"base", {Type::string, "gaussian"}},
                         {"psi", {Type::string, "triangle-spectrum"}},
                         {"nodes", {Type::string, "kadec-alternating:0.2"}},
                         {"nodes-y", {Type::string, nullptr}},
                         {"J", {Type::integer, 24}},
                         {"alphas", {Type::number_list, json::array({1, 2, 4, 8, 16})}},
                         {"condition-alphas", {Type::number_list, nullptr}},
                         {"X", {Type::number, nullptr}},
                         {"h", {Type::number, 1.0 / 64.0}},
                         {"central-fraction", {Type::number, 0.5}},
                         {"route", {Type::string, "auto"}},
                         {"M", {Type::integer, 2048}},
                         {"limit-tolerance", {Type::number, 1e-3}},
                         {"final-ratio", {Type::number, 1.0}},
                         {"conditions", {Type::boolean, true}}});
    s["counterexample"] = with({{"alphas", {Type::number_list, json::array({1, 2, 4, 8, 16})}},
                                {"seeds", {Type::integer_list, json::array({1, 2, 3})}},
                                {"J", {Type::integer, 24}},
                                {"X", {Type::number, nullptr}},
                                {"h", {Type::number, 1.0 / 64.0}},
                                {"central-fraction", {Type::number, 0.5}},
                                {"floor-ratio", {Type::number, 0.5}},
                                {"control-ratio", {Type::number, 0.01}}});
    s["half-shift"] = with({{"kernel", {Type::string, "gaussian(1)"}},
                            {"J-list", {Type::integer_list, json::array({4, 8, 16, 24})}},
                            {"stabilization-tolerance", {Type::number, 0.05}}});
    return s;
  }();
  auto it = all.find(command);
  if (it == all.end()) throw Error(ErrorKind::usage, "unknown command '" + command + "'");
  return it->second;
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::usage, "config key '" + key + "': " + what);
}

bool integral(const json& v) {
  if (v.is_number_integer()) return true;
  if (!v.is_number_float()) return false;
  double d = v.get<double>();
  return std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 1e15;
}

json check_type(const std::string& key, const Field& f, const json& v) {
  switch (f.type) {
    case Type::string:
      if (!v.is_string()) bad(key, "expected a string");
      return v;
    case Type::number:
      if (!v.is_number() || !std::isfinite(v.get<double>())) bad(key, "expected a finite number");
      return v.get<double>();
    case Type::integer:
      if (!integral(v)) bad(key, "expected an integer");
      return static_cast<long long>(v.get<double>());
    case Type::cells:
      if (v.is_string() && v.get<std::string>() == "auto") return v;
      if (!integral(v)) bad(key, "expected an integer or \"auto\"");
      return static_cast<long long>(v.get<double>());
    case Type::boolean:
      if (!v.is_boolean()) bad(key, "expected true or false");
      return v;
    case Type::number_list: {
      if (!v.is_array()) bad(key, "expected a list of numbers");
      json out = json::array();
      for (const auto& x : v) {
        if (!x.is_number() || !std::isfinite(x.get<double>())) bad(key, "expected a list of numbers");
        out.push_back(x.get<double>());
      }
      return out;
    }
    case Type::integer_list: {
      if (!v.is_array()) bad(key, "expected a list of integers");
      json out = json::array();
      for (const auto& x : v) {
        if (!integral(x)) bad(key, "expected a list of integers");
        out.push_back(static_cast<long long>(x.get<double>()));
      }
      return out;
    }
  }
  return v;
}

void require(bool ok, const std::string& key, double value, const std::string& what) {
  if (!ok) throw Error(ErrorKind::range, "config key '" + key + "' " + what, value);
}

void check_ranges(const json& c) {
  auto num = [&](const char* k) { return c.at(k).get<double>(); };
  auto has = [&](const char* k) { return c.contains(k) && !c.at(k).is_null(); };
  if (has("alpha")) require(num("alpha") > 0.0, "alpha", num("alpha"), "must be positive");
  if (has("J")) require(num("J") >= 1 && num("J") <= 64, "J", num("J"), "must lie in [1, 64]");
  if (has("M")) require(num("M") >= 8 && num("M") <= (1 << 22), "M", num("M"), "must lie in [8, 2^22]");
  if (has("K") && c.at("K").is_number()) require(num("K") >= 1 && num("K") <= 4096, "K", num("K"), "must lie in [1, 4096]");
  if (has("X")) require(num("X") > 0.0 && num("X") <= 4096.0, "X", num("X"), "must lie in (0, 4096]");
  if (has("h")) require(num("h") > 0.0 && num("h") <= 1.0, "h", num("h"), "must lie in (0, 1]");
  if (has("Xi")) require(num("Xi") > 0.0, "Xi", num("Xi"), "must be positive");
  if (has("central-fraction"))
    require(num("central-fraction") > 0.0 && num("central-fraction") <= 1.0, "central-fraction",
            num("central-fraction"), "must lie in (0, 1]");
  for (const char* k : {"tail-tolerance", "limit-tolerance", "final-ratio", "floor-ratio", "control-ratio",
                        "stabilization-tolerance", "cardinality-tolerance"})
    if (has(k)) require(num(k) > 0.0, k, num(k), "must be positive");
  if (has("seed")) require(num("seed") >= 0, "seed", num("seed"), "must be >= 0");
  if (has("spectrum-points")) require(num("spectrum-points") >= 2, "spectrum-points", num("spectrum-points"), "must be >= 2");
  for (const char* k : {"alphas", "condition-alphas"})
    if (has(k)) {
      const auto& a = c.at(k);
      require(a.size() >= 3, k, static_cast<double>(a.size()), "needs at least 3 values");
      for (size_t i = 0; i < a.size(); ++i) {
        require(a[i].get<double>() > 0.0, k, a[i].get<double>(), "values must be positive");
        if (i > 0) require(a[i].get<double>() > a[i - 1].get<double>(), k, a[i].get<double>(), "must be strictly increasing");
      }
    }
  if (has("seeds")) {
    require(!c.at("seeds").empty(), "seeds", 0, "must not be empty");
    for (const auto& s : c.at("seeds")) require(s.get<long long>() >= 0, "seeds", s.get<double>(), "must be >= 0");
  }
  if (has("J-list")) {
    require(c.at("J-list").size() >= 2, "J-list", static_cast<double>(c.at("J-list").size()), "needs at least 2 values");
    for (const auto& s : c.at("J-list"))
      require(s.get<long long>() >= 1 && s.get<long long>() <= 64, "J-list", s.get<double>(), "values must lie in [1, 64]");
  }
}

// ---------------------------------------------------------------- helpers

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Kernel kernel_with_alpha(const json& c, const char* key = "kernel") {
  json j = parse_kernel_expression(c.at(key).get<std::string>());
  if (c.contains("alpha") && !c.at("alpha").is_null()) j["alpha"] = c.at("alpha").get<double>();
  return kernel_from_json(j);
}

Kernel kernel_of(const json& c, const char* key) {
  return kernel_from_json(parse_kernel_expression(c.at(key).get<std::string>()));
}

int cells_of(const json& c, const Kernel& k) {
  if (c.at("K").is_string()) return spectrum_cells(k, 4096);
  return c.at("K").get<int>();
}

LineGrid grid_of(const json& c, const Kernel& psi) {
  const double h = c.at("h").get<double>();
  const double X = c.at("X").is_null() ? default_line_grid(psi).X() : c.at("X").get<double>();
  return LineGrid(X, h);
}

std::vector<double> doubles(const json& a) { return a.get<std::vector<double>>(); }

struct Output {
  json result;
  bool pass = true;
  json verdict = json::object();
  std::vector<std::pair<std::string, std::string>> csv;  // suffix, content
};

// ---------------------------------------------------------------- commands

Output cmd_verify_kernel(const json& c) {
  Output o;
  Kernel k = kernel_with_alpha(c);
  const int K = cells_of(c, k);
  auto rep = regularity_report(k, K, c.at("M").get<int>(), c.at("tail-tolerance").get<double>());
  o.result = {{"kernel", k.to_json()}, {"report", to_json(rep)}};
  o.pass = rep.pass_A1 && rep.pass_A2;
  o.verdict = {{"pass-A1", rep.pass_A1}, {"pass-A2", rep.pass_A2}};
  std::ostringstream s;
  s << "k,cell_sup\n";
  for (int i = -K; i <= K; ++i) s << i << ',' << fmt17(rep.cell_sup(i)) << '\n';
  o.csv.push_back({"", s.str()});
  return o;
}

Output cmd_riesz(const json& c) {
  Output o;
  NodeSet X = parse_nodes(c.at("nodes").get<std::string>(), c.at("J").get<int>());
  auto r = riesz_estimate(X);
  o.result = {{"nodes", X.to_json()}, {"separation", X.separation()}, {"spread", X.spread()}, {"riesz", to_json(r)}};
  o.pass = std::isfinite(r.C);
  o.verdict = {{"finite", o.pass}};
  return o;
}

Output cmd_interpolate(const json& c) {
  Output o;
  const int J = c.at("J").get<int>();
  Kernel psi = kernel_of(c, "psi");
  Kernel phi = c.at("phi").is_null() ? psi : kernel_of(c, "phi");
  NodeSet X = parse_nodes(c.at("nodes").get<std::string>(), J);
  NodeSet Y = c.at("nodes-y").is_null() ? X : parse_nodes(c.at("nodes-y").get<std::string>(), J);
  auto f = random_function(psi, X, c.at("seed").get<std::uint64_t>());
  auto data = sample(f, Y);
  auto g = solve(assemble(phi, Y), data);
  auto res = residual_report(f, g, grid_of(c, psi), c.at("central-fraction").get<double>());
  auto reg = regularity_report(phi, spectrum_cells(phi, 256));
  auto cb = coefficient_bound(g, data, reg, riesz_estimate(X), riesz_estimate(Y));
  auto fs = fourier_side_sample_check(g, data, -1, TorusGrid(c.at("M").get<int>()));
  const double contract = std::max(g.kappa * 1e-12, 1e-10) * std::max(g.rhs_scale, 1e-300);
  o.pass = g.residual <= contract;
  o.result = {{"function", f.to_json()},
              {"interpolant", g.to_json()},
              {"residual-report", to_json(res)},
              {"coefficient-bound", to_json(cb)},
              {"fourier-side-discrepancy", fs.max_discrepancy}};
  o.verdict = {{"node-residual", g.residual}, {"contract", contract}, {"within-contract", o.pass}};
  std::ostringstream s;
  s << "x,f,g,f_minus_g\n";
  for (size_t i = 0; i < res.x.size(); ++i)
    s << fmt17(res.x[i]) << ',' << fmt17(res.f[i]) << ',' << fmt17(res.g[i]) << ',' << fmt17(res.f[i] - res.g[i])
      << '\n';
  o.csv.push_back({"", s.str()});
  return o;
}

Output cmd_cardinal(const json& c) {
  Output o;
  Kernel phi = kernel_with_alpha(c);
  const int K = c.at("K").is_string() ? -1 : c.at("K").get<int>();
  CardinalFunction L(phi, K, c.at("M").get<int>());
  double card = 0.0;
  json values = json::array();
  for (int k = -8; k <= 8; ++k) {
    double v = L.eval(static_cast<double>(k));
    values.push_back(v);
    card = std::max(card, std::fabs(v - (k == 0 ? 1.0 : 0.0)));
  }
  // spectrum bounds and the lattice partition identity
  TorusGrid tg(1024);
  const int P = std::min(L.K(), 256);
  double part = 0.0, lo = 0.0, hi = 0.0;
  for (int m = 0; m < tg.M(); ++m) {
    double s = 0.0;
    for (int j = -P; j <= P; ++j) {
      double v = L.spectrum(tg.node(m) + kTwoPi * j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      s += v;
    }
    part = std::max(part, std::fabs(s - kInvSqrt2Pi));
  }
  auto reg = cardinal_regularity(phi);
  const double tol = c.at("cardinality-tolerance").get<double>();
  o.pass = card <= tol;
  o.result = {{"kernel", L.kernel().to_json()},
              {"route", L.route()},
              {"K", L.K()},
              {"symbol-ratio", L.symbol_ratio()},
              {"lattice-values", values},
              {"cardinality-error", card},
              {"partition-error", part},
              {"partition-cells", P},
              {"spectrum-min", lo},
              {"spectrum-max", hi},
              {"regularity", to_json(reg)}};
  o.verdict = {{"cardinality", o.pass}, {"tolerance", tol}, {"regularity-bound", reg.bound_holds}};
  LineGrid grid(c.at("X").get<double>(), c.at("h").get<double>());
  auto tab = L.tabulate(grid);
  std::ostringstream s;
  s << "x,L\n";
  for (int i = 0; i < grid.size(); ++i) s << fmt17(grid.node(i)) << ',' << fmt17(tab[i]) << '\n';
  o.csv.push_back({"", s.str()});
  std::ostringstream t;
  t << "xi,L_hat\n";
  const int n = c.at("spectrum-points").get<int>();
  const double Xi = c.at("Xi").get<double>();
  for (int i = 0; i < n; ++i) {
    double xi = -Xi + 2.0 * Xi * i / (n - 1);
    t << fmt17(xi) << ',' << fmt17(L.spectrum(xi)) << '\n';
  }
  o.csv.push_back({"-spectrum", t.str()});
  return o;
}

Output cmd_recover(const json& c) {
  Output o;
  const int J = c.at("J").get<int>();
  FamilySpec fam{c.at("family").get<std::string>(), c.at("base").get<std::string>(), kernel_of(c, "psi"),
                 doubles(c.at("alphas"))};
  fam.validate();
  NodeSet X = parse_nodes(c.at("nodes").get<std::string>(), J);
  NodeSet Y = c.at("nodes-y").is_null() ? X : parse_nodes(c.at("nodes-y").get<std::string>(), J);
  const auto seed = c.at("seed").get<std::uint64_t>();
  auto f = random_function(fam.psi, X, seed);
  SweepOptions so;
  so.grid = grid_of(c, fam.psi);
  so.central_fraction = c.at("central-fraction").get<double>();
  so.route = c.at("route").get<std::string>();
  so.torus_points = c.at("M").get<int>();
  auto sweep = recovery_sweep(f, fam, Y, so, seed);
  o.result = {{"sweep", sweep.to_json()}};
  if (c.at("conditions").get<bool>()) {
    FamilySpec cf = fam;
    if (!c.at("condition-alphas").is_null()) cf.alphas = doubles(c.at("condition-alphas"));
    ConditionOptions co;
    co.torus_points = c.at("M").get<int>();
    co.seed = seed;
    co.limit_tolerance = c.at("limit-tolerance").get<double>();
    o.result["conditions"] = check_conditions(cf, X, Y, co).to_json();
  }
  const auto l2 = sweep.l2(), sup = sweep.sup();
  const bool ok = sweep.all_ok();
  const bool dl2 = ok && strictly_decreasing(l2), dsup = ok && strictly_decreasing(sup);
  const double ratio = ok ? l2.back() / l2.front() : std::numeric_limits<double>::quiet_NaN();
  const double limit = c.at("final-ratio").get<double>();
  const bool final_ok = limit >= 1.0 || (ok && ratio < limit);
  bool bounds = ok;
  for (const auto& r : sweep.rows) bounds = bounds && r.bound_holds;
  o.pass = dl2 && dsup && final_ok;
  o.verdict = {{"rows-ok", ok},
               {"l2-strictly-decreasing", dl2},
               {"sup-strictly-decreasing", dsup},
               {"final-over-initial", ok ? json(ratio) : json()},
               {"final-ratio-limit", limit},
               {"final-ratio-ok", final_ok},
               {"recovery-bound-holds", bounds}};
  o.csv.push_back({"", sweep.to_csv()});
  return o;
}

Output cmd_counterexample(const json& c) {
  Output o;
  SweepOptions so;
  if (!c.at("X").is_null()) so.grid = LineGrid(c.at("X").get<double>(), c.at("h").get<double>());
  else so.grid = LineGrid(default_line_grid(gaussian(1.0)).X(), c.at("h").get<double>());
  so.central_fraction = c.at("central-fraction").get<double>();
  auto seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
  const auto alphas = doubles(c.at("alphas"));
  FamilySpec{"convolution", "gaussian", gaussian(1.0), alphas}.validate();
  // thresholds live on the result so that both verdicts use the configured values
  CounterexampleResult r = counterexample_run(alphas, seeds, c.at("J").get<int>(), so);
  r.floor_ratio = c.at("floor-ratio").get<double>();
  r.control_ratio = c.at("control-ratio").get<double>();
  bool floor = true;
  for (const auto& s : r.runs) {
    auto l2 = s.l2();
    if (!s.all_ok() || !(l2.back() > r.floor_ratio * l2.front())) floor = false;
  }
  r.persistent_floor = floor;
  auto cl2 = r.control.l2();
  r.control_converges = r.control.all_ok() && strictly_decreasing(cl2) && strictly_decreasing(r.control.sup()) &&
                        cl2.back() < r.control_ratio * cl2.front();
  o.result = r.to_json();
  o.pass = r.persistent_floor && r.control_converges;
  o.verdict = {{"persistent-floor", r.persistent_floor}, {"control-converges", r.control_converges}};
  std::ostringstream s;
  s << "run,alpha,l2_error,sup_error,kappa,coeff_norm\n";
  auto rows = [&](const std::string& name, const SweepReport& rep) {
    for (const auto& x : rep.rows)
      s << name << ',' << fmt17(x.alpha) << ',' << fmt17(x.l2_error) << ',' << fmt17(x.sup_error) << ','
        << fmt17(x.kappa) << ',' << fmt17(x.coeff_norm) << '\n';
  };
  for (size_t i = 0; i < r.runs.size(); ++i) rows("seed-" + std::to_string(seeds[i]), r.runs[i]);
  rows("control", r.control);
  o.csv.push_back({"", s.str()});
  return o;
}

Output cmd_half_shift(const json& c) {
  Output o;
  auto Js = c.at("J-list").get<std::vector<int>>();
  auto r = half_shift_conditioning(Js, kernel_of(c, "kernel"), c.at("stabilization-tolerance").get<double>());
  o.result = r.to_json();
  o.pass = r.cross_increasing && r.control_stabilizes;
  o.verdict = {{"cross-increasing", r.cross_increasing}, {"control-stabilizes", r.control_stabilizes}};
  o.csv.push_back({"", r.to_csv()});
  return o;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::io, "write failed for '" + p.string() + "'");
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"verify-kernel", "riesz",          "interpolate", "cardinal",
                                              "recover",       "counterexample", "half-shift"};
  return names;
}

const nlohmann::json& presets() {
  static const json p = {
      {"regular-gaussian-sinc",
       {{"command", "recover"}, {"family", "regular-gaussian"}, {"base", ""}, {"psi", "sinc"},
        {"nodes", "lattice"}, {"alphas", {1, 2, 4, 8, 16}}, {"final-ratio", 0.01}}},
      {"gaussian-conv-triangle",
       {{"command", "recover"}, {"family", "convolution"}, {"base", "gaussian"}, {"psi", "triangle-spectrum"},
        {"nodes", "kadec-alternating:0.2"}, {"alphas", {1, 2, 4, 8, 16}},
        {"condition-alphas", {1, 2, 4, 8, 16, 32, 64}}, {"final-ratio", 0.01}}},
      {"poisson-conv-triangle",
       {{"command", "recover"}, {"family", "convolution"}, {"base", "poisson"}, {"psi", "triangle-spectrum"},
        {"nodes", "kadec-alternating:0.2"}, {"alphas", {1, 4, 16, 64}}}},
      {"imq-conv-triangle",
       {{"command", "recover"}, {"family", "convolution"}, {"base", "inverse-multiquadric"},
        {"psi", "triangle-spectrum"}, {"nodes", "kadec-alternating:0.2"}, {"alphas", {1, 2, 4, 8, 16, 32}}}},
      {"approx-identity-triangle",
       {{"command", "recover"}, {"family", "dilated-approx-identity"}, {"base", "gaussian(1)"},
        {"psi", "triangle-spectrum"}, {"nodes", "kadec-alternating:0.2"}, {"alphas", {1, 2, 4, 8, 16}}}},
      {"multiquadric-cardinal-sinc",
       {{"command", "recover"}, {"family", "multiquadric-cardinal"}, {"base", ""}, {"psi", "sinc"},
        {"nodes", "lattice"}, {"alphas", {1, 2, 4, 8}}}},
      {"sqrt2-swap", {{"command", "counterexample"}, {"alphas", {1, 2, 4, 8, 16}}, {"seeds", {1, 2, 3}}}},
      {"half-shift", {{"command", "half-shift"}, {"J-list", {4, 8, 16, 24}}}},
  };
  return p;
}

nlohmann::json resolve_config(const std::string& command, const nlohmann::json& config) {
  const Schema& s = schema(command);
  if (!config.is_null() && !config.is_object()) throw Error(ErrorKind::usage, "config must be an object");
  json in = config.is_null() ? json::object() : config;
  if (in.contains("command")) {
    if (!in.at("command").is_string() || in.at("command").get<std::string>() != command)
      throw Error(ErrorKind::usage, "config names a different command");
    in.erase("command");
  }
  json out = json::object();
  for (const auto& [k, f] : s) out[k] = f.fallback;
  if (in.contains("preset") && !in.at("preset").is_null()) {
    if (!in.at("preset").is_string()) bad("preset", "expected a string");
    const std::string name = in.at("preset").get<std::string>();
    if (!presets().contains(name)) throw Error(ErrorKind::usage, "unknown preset '" + name + "'");
    const json& p = presets().at(name);
    if (p.at("command").get<std::string>() != command)
      throw Error(ErrorKind::usage, "preset '" + name + "' belongs to command '" + p.at("command").get<std::string>() + "'");
    for (auto it = p.begin(); it != p.end(); ++it)
      if (it.key() != "command") out[it.key()] = check_type(it.key(), s.at(it.key()), it.value());
  }
  for (auto it = in.begin(); it != in.end(); ++it) {
    auto f = s.find(it.key());
    if (f == s.end()) throw Error(ErrorKind::usage, "unknown config key '" + it.key() + "' for " + command);
    if (it.value().is_null()) continue;
    out[it.key()] = check_type(it.key(), f->second, it.value());
  }
  check_ranges(out);
  out["command"] = command;
  return out;
}

std::string config_hash(const nlohmann::json& resolved) {
  const std::string text = resolved.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunResult run_command(const std::string& command, const nlohmann::json& config, const std::string& out_dir) {
  const json c = resolve_config(command, config);
  const std::string hash = config_hash(c);
  Output o;
  if (command == "verify-kernel") o = cmd_verify_kernel(c);
  else if (command == "riesz") o = cmd_riesz(c);
  else if (command == "interpolate") o = cmd_interpolate(c);
  else if (command == "cardinal") o = cmd_cardinal(c);
  else if (command == "recover") o = cmd_recover(c);
  else if (command == "counterexample") o = cmd_counterexample(c);
  else if (command == "half-shift") o = cmd_half_shift(c);
  else throw Error(ErrorKind::usage, "unknown command '" + command + "'");

  RunResult r;
  o.verdict["pass"] = o.pass;
  r.report = {{"command", command}, {"hash", hash}, {"config", c}, {"result", o.result}, {"verdict", o.verdict}};
  r.exit_code = o.pass ? 0 : 1;
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + out_dir + "'");
    const std::filesystem::path base = std::filesystem::path(out_dir) / (command + "-" + hash);
    const std::string jpath = base.string() + ".json";
    write_file(jpath, r.report.dump(2) + "\n");
    r.files.push_back(jpath);
    for (const auto& [suffix, content] : o.csv) {
      const std::string p = base.string() + suffix + ".csv";
      write_file(p, content);
      r.files.push_back(p);
    }
  }
  return r;
}

int exit_code_for(int error_kind) {
  switch (static_cast<ErrorKind>(error_kind)) {
    case ErrorKind::usage:
    case ErrorKind::range:
    case ErrorKind::domain:
    case ErrorKind::io:
      return 2;
    default:
      return 3;
  }
}

}  // namespace qsis
