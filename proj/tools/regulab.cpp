// regulab: command-line front end. Each subcommand resolves its settings
// (defaults, then config file, then flags), evaluates a grid, and writes CSV
// or JSON records headed by the resolved settings.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "regulab/cli_support.hpp"
#include "regulab/flanagan.hpp"
#include "regulab/regulator_lab.hpp"
#include "regulab/selftest.hpp"
#include "regulab/static_well.hpp"
#include "regulab/time_step.hpp"

namespace {

using namespace regulab;
using cli::Settings;

using Cell = std::variant<double, std::string>;
using Row = std::vector<Cell>;

struct Table {
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

const Settings kCommon = {
    {"format", "csv"},
    {"out", "-"},
    {"quadrature.rel_tol", "1e-10"},
    {"quadrature.abs_tol", "1e-14"},
    {"quadrature.max_subdivisions", "2000"},
    {"quadrature.tail_truncation_multiple", "60"},
};

const std::map<std::string, Settings> kDefaults = {
    {"well-energy",
     {{"lambda", "1"}, {"a", "1"}, {"eps0", "0"}, {"eps1", "0"}, {"tau", "0.05"}, {"t", "0"},
      {"grid", "0:0:1"}, {"path", ""}, {"s_schedule", "0.2,0.1,0.05"}}},
    {"step-energy",
     {{"lambda", "1"}, {"mass", "1"}, {"eps0", "0.0025"}, {"eps1", "0.0025"}, {"tau", "0.05"},
      {"grid", "1:1:1"}, {"compare", "false"}}},
    {"limit-scan",
     {{"expr", "ratio239"}, {"path", "1,1,1"}, {"s_schedule", "0.1,0.01,0.001,0.0001"}, {"lambda", "1"},
      {"a", "1"}, {"V", "exp(v)"}, {"v", "0"}}},
    {"flanagan", {{"V", "v"}, {"grid", "0:0:1"}, {"tau", "0.1"}, {"mode", "taylor"}, {"offset", "0.01"}}},
    {"qi-bound", {{"rho", ""}, {"support", "-1,1"}}},
};

std::set<std::string> known_keys() {
  std::set<std::string> keys;
  for (const auto& [k, v] : kCommon) keys.insert(k);
  for (const auto& [cmd, s] : kDefaults)
    for (const auto& [k, v] : s) keys.insert(k);
  return keys;
}

double number(const Settings& s, const std::string& key) { return cli::parse_number(key, s.at(key)); }

bool boolean(const Settings& s, const std::string& key) {
  const std::string v = s.at(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InvalidArgument("--" + key + ": expected true or false, got '" + v + "'");
}

std::pair<double, double> interval(const Settings& s, const std::string& key) {
  const auto v = cli::parse_list(key, s.at(key));
  if (v.size() != 2) throw InvalidArgument("--" + key + ": expected lo,hi");
  return {v[0], v[1]};
}

lab::LimitPath limit_path(const Settings& s) {
  const auto v = cli::parse_list("path", s.at("path"));
  if (v.size() != 3 && v.size() != 6) throw InvalidArgument("--path: expected p0,p1,ptau or p0,p1,ptau,c0,c1,ctau");
  lab::LimitPath p;
  p.p0 = v[0];
  p.p1 = v[1];
  p.ptau = v[2];
  if (v.size() == 6) {
    p.c0 = v[3];
    p.c1 = v[4];
    p.ctau = v[5];
  }
  try {
    p.validate();
  } catch (const ValidationError& e) {
    throw InvalidArgument(std::string("--path: ") + e.what());
  }
  return p;
}

Regulator regulator(const Settings& s) { return {number(s, "eps0"), number(s, "eps1"), number(s, "tau")}; }

// --- subcommands -------------------------------------------------------------

Table run_well(const Settings& s) {
  const well::WellConfig cfg{number(s, "lambda"), number(s, "a")};
  cfg.validate();
  const double t = number(s, "t");
  const auto spec = cli::quadrature_from(s);
  const auto xs = cli::parse_grid("grid", s.at("grid"));
  std::vector<std::pair<double, Regulator>> points;
  if (s.at("path").empty()) {
    for (double x : xs) points.push_back({x, regulator(s)});
  } else {
    const auto path = limit_path(s);
    const auto sched = cli::parse_list("s-schedule", s.at("s_schedule"));
    for (double x : xs)
      for (double sv : sched) points.push_back({x, path.at(sv)});
  }
  for (const auto& [x, reg] : points) {
    reg.require_cutoff();
    if (!(std::abs(x) + 0.5 * reg.eps1 < cfg.a))
      throw OutsideRegionI("--grid: x outside |x|<a (x = " + cli::format_number(x) + ", a = " +
                           cli::format_number(cfg.a) + ")");
  }
  Table table{{"x", "value", "error_estimate", "eps0", "eps1", "tau"}, {}, {}};
  table.rows = cli::ordered_parallel_map<Row>(points.size(), [&](std::size_t i) {
    const auto& [x, reg] = points[i];
    const auto r = well::t00r_static(cfg, reg, x, t, spec);
    return Row{x, r.value, r.error_estimate, reg.eps0, reg.eps1, reg.tau};
  });
  return table;
}

Table run_step(const Settings& s) {
  const step::StepConfig cfg{number(s, "lambda"), number(s, "mass")};
  cfg.validate();
  const bool compare = boolean(s, "compare");
  const auto spec = cli::quadrature_from(s);
  const auto ts = cli::parse_grid("grid", s.at("grid"));
  const Regulator reg = regulator(s);
  for (double t : ts) {
    if (t < 0.0) throw InvalidArgument("--grid: times must be >= 0");
    if (compare && !(t > 0.0)) throw InvalidArgument("--grid: --compare needs times > 0");
  }
  if (compare) {
    reg.require_cutoff();
    for (double t : ts)
      if (!(reg.eps0 < 2.0 * t)) throw SplitStraddlesStep("--eps0: split times straddle the step (need eps0 < 2t)");
  }
  Table table;
  table.columns = compare ? std::vector<std::string>{"t", "mode_reg", "pointsplit", "d_term", "residual"}
                          : std::vector<std::string>{"t", "mode_reg"};
  table.rows = cli::ordered_parallel_map<Row>(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    const double mode = step::mode_reg_density(cfg, t, spec).value;
    if (!compare) return Row{t, mode};
    const double ps = step::pointsplit_density(cfg, t, reg, spec).value;
    const double d = step::d_term(cfg, reg);
    return Row{t, mode, ps, d, ps - d - mode};
  });
  return table;
}

Table run_limit_scan(const Settings& s) {
  const auto id = lab::parse_ambiguity(s.at("expr"));
  const auto path = limit_path(s);
  const auto sched = cli::parse_list("s-schedule", s.at("s_schedule"));
  lab::AmbiguityContext ctx;
  ctx.lambda = number(s, "lambda");
  ctx.a = number(s, "a");
  ctx.v = number(s, "v");
  if (id == lab::Ambiguity::FlanaganDelta) ctx.map = flanagan::ConformalMap::parse(s.at("V"));
  const auto scan = lab::scan_path(id, path, sched, ctx);
  Table table{{"s", "eps0", "eps1", "tau", "value_re", "value_im"}, {}, {}};
  for (const auto& sample : scan.samples) {
    const Regulator r = path.at(sample.s);
    table.rows.push_back(Row{sample.s, r.eps0, r.eps1, r.tau, sample.value.real(), sample.value.imag()});
  }
  const auto& o = scan.outcome;
  table.summary.push_back({"kind", std::string(to_string(o.kind))});
  if (o.kind == LimitKind::Finite) {
    table.summary.push_back({"value_re", o.value.real()});
    table.summary.push_back({"value_im", o.value.imag()});
  }
  table.summary.push_back({"confidence", o.confidence});
  if (scan.singular_at) table.summary.push_back({"singular_at_s", *scan.singular_at});
  return table;
}

Table run_flanagan(const Settings& s) {
  const auto map = flanagan::ConformalMap::parse(s.at("V"));
  const std::string mode = s.at("mode");
  if (mode != "taylor" && mode != "tau_first" && mode != "pointsplit")
    throw InvalidArgument("--mode: expected taylor, tau_first or pointsplit, got '" + mode + "'");
  const auto vs = cli::parse_grid("grid", s.at("grid"));
  const double tau = number(s, "tau");
  const double offset = number(s, "offset");
  Table table;
  table.columns = mode == "pointsplit" ? std::vector<std::string>{"v", "delta", "mode", "vbar", "tau", "delta_im"}
                                       : std::vector<std::string>{"v", "delta", "mode"};
  table.rows = cli::ordered_parallel_map<Row>(vs.size(), [&](std::size_t i) {
    const double v = vs[i];
    if (mode == "taylor") return Row{v, flanagan::delta_flanagan(map, v), mode};
    if (mode == "tau_first") {
      if (map.jet(v).d1 == 0.0) throw DegenerateMap("--V: V'(v) = 0 at v = " + cli::format_number(v));
      return Row{v, flanagan::delta_tau(map, v, tau), mode};
    }
    if (map.jet(v).d1 == 0.0) throw DegenerateMap("--V: V'(v) = 0 at v = " + cli::format_number(v));
    const double vbar = v + offset;
    const auto d = flanagan::delta_pointsplit(map, v, vbar, tau);
    return Row{v, d.real(), mode, vbar, tau, d.imag()};
  });
  return table;
}

Table run_qi(const Settings& s) {
  if (s.at("rho").empty()) throw InvalidArgument("--rho: a weight function is required");
  const auto [lo, hi] = interval(s, "support");
  const auto rho = flanagan::WeightFunction::parse(s.at("rho"), lo, hi);
  const auto r = flanagan::qi_bound_rhs(rho, cli::quadrature_from(s));
  return Table{{"bound", "error_estimate", "edge_integrand"}, {Row{r.value, r.error_estimate, r.edge_integrand}}, {}};
}

// --- output ----------------------------------------------------------------

std::string cell_text(const Cell& c) {
  return std::holds_alternative<double>(c) ? cli::format_number(std::get<double>(c)) : std::get<std::string>(c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  return std::get<std::string>(c);
}

std::string render(const std::string& command, const Settings& resolved, const Table& table) {
  std::ostringstream out;
  if (resolved.at("format") == "json") {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : resolved) doc["config"][k] = v;
    doc["columns"] = table.columns;
    doc["records"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json rec = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) rec[table.columns[i]] = cell_json(row[i]);
      doc["records"].push_back(rec);
    }
    if (!table.summary.empty()) {
      doc["summary"] = nlohmann::ordered_json::object();
      for (const auto& [k, v] : table.summary) doc["summary"][k] = cell_json(v);
    }
    out << doc.dump(2) << "\n";
    return out.str();
  }
  out << "# regulab " << command;
  for (const auto& [k, v] : resolved) out << " " << k << "=" << (v.empty() ? "\"\"" : v);
  out << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
  if (!table.summary.empty()) {
    out << "# summary";
    for (const auto& [k, v] : table.summary) out << " " << k << "=" << cell_text(v);
    out << "\n";
  }
  return out.str();
}

void emit(const std::string& target, const std::string& text) {
  if (target == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(target, std::ios::binary);
  if (!f) throw InvalidArgument("--out: cannot write '" + target + "'");
  f << text;
}

int run_selftest() {
  bool all = true;
  for (const auto& check : selftest::all_checks()) {
    const auto r = check();
    all = all && r.passed;
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << ". " << r.title << "\n     " << r.detail << "\n";
  }
  std::cout << (all ? "all checks passed" : "some checks FAILED") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regulab: point-split and mode-sum energy densities"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const std::vector<Flag> flags = {
      {"--lambda", "lambda", "potential strength"},
      {"--mass", "mass", "field mass"},
      {"--a", "a", "well half-width"},
      {"--eps0", "eps0", "time split"},
      {"--eps1", "eps1", "space split"},
      {"--tau", "tau", "frequency cutoff"},
      {"--t", "t", "time"},
      {"--path", "path", "p0,p1,ptau[,c0,c1,ctau]"},
      {"--s-schedule", "s_schedule", "comma-separated decreasing s values"},
      {"--grid", "grid", "start:stop:count"},
      {"--V", "V", "conformal map V(v)"},
      {"--v", "v", "point v for the flanagan expression in limit-scan"},
      {"--rho", "rho", "weight function rho(x)"},
      {"--support", "support", "lo,hi"},
      {"--mode", "mode", "taylor | tau_first | pointsplit"},
      {"--offset", "offset", "vbar - v in pointsplit mode"},
      {"--expr", "expr", "ratio239 | rstatic317 | dterm616 | flanagan"},
      {"--format", "format", "csv | json"},
      {"--out", "out", "output path, - for stdout"},
      {"--rel-tol", "quadrature.rel_tol", "quadrature relative tolerance"},
      {"--abs-tol", "quadrature.abs_tol", "quadrature absolute tolerance"},
  };
  const std::map<std::string, std::vector<std::string>> accepted = {
      {"well-energy", {"lambda", "a", "eps0", "eps1", "tau", "t", "path", "s_schedule", "grid"}},
      {"step-energy", {"lambda", "mass", "eps0", "eps1", "tau", "grid"}},
      {"limit-scan", {"expr", "path", "s_schedule", "lambda", "a", "V", "v"}},
      {"flanagan", {"V", "grid", "tau", "mode", "offset"}},
      {"qi-bound", {"rho", "support"}},
  };

  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::App*> subs;
  std::string config_path;
  bool compare = false;
  for (const auto& [name, keys] : accepted) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& f : flags) {
      const bool common = std::string(f.key) == "format" || std::string(f.key) == "out" ||
                          std::string(f.key).rfind("quadrature.", 0) == 0;
      if (!common && std::find(keys.begin(), keys.end(), f.key) == keys.end()) continue;
      sub->add_option(f.name, storage[name + "/" + f.key], f.help);
    }
    sub->add_option("--config", config_path, "key = value config file (default: $REGULAB_CONFIG)");
    if (name == "step-energy") sub->add_flag("--compare", compare, "also compute pointsplit, D and residual");
  }
  auto* selftest_cmd = app.add_subcommand("selftest", "run the oracle checks and print pass/fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (selftest_cmd->parsed()) return run_selftest();

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    Settings resolved = kCommon;
    for (const auto& [k, v] : kDefaults.at(command)) resolved[k] = v;

    if (config_path.empty())
      if (const char* env = std::getenv("REGULAB_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) {
      const auto keys = known_keys();
      for (const auto& [k, v] : cli::read_config_file(config_path)) {
        if (!keys.count(k)) throw InvalidArgument(config_path + ": unknown key '" + k + "'");
        if (resolved.count(k)) resolved[k] = v;
      }
    }
    for (const auto& f : flags) {
      auto* opt = subs[command]->get_option_no_throw(f.name);
      if (opt && opt->count() > 0) resolved[f.key] = storage[command + "/" + f.key];
    }
    if (command == "step-energy" && compare) resolved["compare"] = "true";

    const std::string format = resolved.at("format");
    if (format != "csv" && format != "json")
      throw InvalidArgument("--format: expected csv or json, got '" + format + "'");
    cli::quadrature_from(resolved);

    Table table;
    if (command == "well-energy") table = run_well(resolved);
    else if (command == "step-energy") table = run_step(resolved);
    else if (command == "limit-scan") table = run_limit_scan(resolved);
    else if (command == "flanagan") table = run_flanagan(resolved);
    else table = run_qi(resolved);

    emit(resolved.at("out"), render(command, resolved, table));
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "regulab " << command << ": " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "regulab " << command << ": numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "regulab " << command << ": " << e.what() << "\n";
    return 3;
  }
}
