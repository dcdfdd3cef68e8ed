// SPDX-License-Identifier: Apache-2.0
#include "polylab/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "polylab/error.hpp"
#include "polylab/parallel.hpp"

namespace polylab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_numbers(const std::string& flag, const std::string& s) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    T v{};
    try {
      if constexpr (std::is_integral_v<T>)
        v = static_cast<T>(std::stoll(item, &used));
      else
        v = static_cast<T>(std::stod(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CliError(exit_value, flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

// Config lines become `--key=value` arguments placed after the command line,
// so with take-first options a flag given explicitly wins.
std::vector<std::string> config_arguments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(exit_file, "--config: cannot read '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CliError(exit_usage, path + ":" + std::to_string(number) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    while (!key.empty() && key.front() == '-') key.erase(0, 1);
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

std::string find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return "";
}

}  // namespace

std::string RunConfig::json_file() const {
  if (!json_path.empty()) return json_path;
  return (std::filesystem::path(out_dir) / ("polylab-" + command + "-" + subcommand + ".json")).string();
}

std::string RunConfig::csv_file() const {
  if (!csv_path.empty()) return csv_path;
  return (std::filesystem::path(out_dir) / ("polylab-" + command + "-" + subcommand + ".csv")).string();
}

RunConfig parse_cli(const std::vector<std::string>& input) {
  std::vector<std::string> args = input;
  const std::string config_path = find_config(args);
  if (!config_path.empty()) {
    const auto extra = config_arguments(config_path);
    args.insert(args.end(), extra.begin(), extra.end());
  }

  RunConfig c;
  CLI::App app{"Semi-discrete polymer and geometric RSK toolkit", "polylab"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeFirst);
  app.require_subcommand(1);
  std::string ignored_config;
  app.add_option("--config", ignored_config, "Flat key = value file; flags override it");
  app.add_option("--threads", c.threads, "Worker threads (0: POLYLAB_THREADS or OpenMP default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out-dir", c.out_dir, "Directory for reports");
  app.add_option("--json", c.json_path, "JSON report path");
  app.add_option("--csv", c.csv_path, "CSV table path");

  auto group = [&](const std::string& name, const std::string& desc) {
    CLI::App* g = app.add_subcommand(name, desc);
    g->require_subcommand(1);
    g->fallthrough();
    return g;
  };
  auto leaf = [](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    return s;
  };
  const auto positive = CLI::PositiveNumber;

  // verify identities
  CLI::App* verify = group("verify", "Deterministic identity and oracle checks");
  CLI::App* v_id = leaf(verify, "identities", "Residuals of every identity on smooth environments");
  std::string id_list = "all";
  std::string id_family = "sin-poly";
  int id_random = 2;
  std::uint64_t id_seed = 1;
  auto& ic = c.identities;
  v_id->add_option("--n", ic.n_max, "Largest n")->check(positive);
  v_id->add_option("--n-min", ic.n_min, "Smallest n")->check(positive);
  v_id->add_option("--wf-n-max", ic.wf_n_max, "Largest n for wf-wrf")->check(positive);
  v_id->add_option("--grid", ic.grid, "Cells per unit length")->check(positive);
  v_id->add_option("--seed", id_seed, "Seed of the first random smooth family");
  v_id->add_option("--family", id_family, "Named smooth family");
  v_id->add_option("--random-families", id_random, "Random smooth families added")->check(CLI::NonNegativeNumber);
  v_id->add_option("--identity", id_list, "Comma list of identities or 'all'");
  v_id->add_option("--T", ic.T, "T of the scaled inverse temperature (T/2)^(1/3)")->check(positive);
  v_id->add_option("--d-max", ic.d_max, "Largest polytope dimension")->check(positive);
  for (const IdentityId id : all_identities()) {
    ic.tol[id] = default_tolerance(id);
    v_id->add_option("--tol-" + std::string(to_string(id)), ic.tol[id], "Tolerance")->check(positive);
  }

  CLI::App* v_or = leaf(verify, "oracle", "Chain quadrature against nested Gauss-Legendre");
  auto& oc = c.oracle;
  v_or->add_option("--cases", oc.cases)->check(positive);
  v_or->add_option("--n", oc.n_max)->check(positive);
  v_or->add_option("--depth", oc.depth_max)->check(positive);
  v_or->add_option("--grid", oc.grid)->check(positive);
  v_or->add_option("--T", oc.T)->check(positive);
  v_or->add_option("--seed", oc.seed);
  v_or->add_option("--points", oc.points)->check(positive);
  v_or->add_option("--tol", oc.tol)->check(positive);

  CLI::App* v_cv = leaf(verify, "convergence", "Residuals over a grid ladder with refinement ratios");
  auto& cc = c.convergence;
  std::string cv_identity = "greene";
  std::string cv_grids = "512,1024,2048,4096";
  v_cv->add_option("--identity", cv_identity);
  v_cv->add_option("--grids", cv_grids, "Comma list, each twice the previous");
  v_cv->add_option("--n", cc.n_max)->check(positive);
  v_cv->add_option("--n-min", cc.n_min)->check(positive);
  v_cv->add_option("--family", cc.family);
  v_cv->add_option("--min-ratio", cc.min_ratio)->check(positive);
  v_cv->add_option("--floor", cc.floor)->check(CLI::NonNegativeNumber);
  v_cv->add_option("--tol", cc.tol)->check(positive);
  v_cv->add_option("--d-max", cc.d_max)->check(positive);

  CLI::App* v_br = leaf(verify, "brownian", "wf-wrf identity on Brownian curves");
  auto& bc = c.brownian;
  v_br->add_option("--n", bc.n_max)->check(positive);
  v_br->add_option("--n-min", bc.n_min)->check(positive);
  v_br->add_option("--grid", bc.grid)->check(positive);
  v_br->add_option("--samples", bc.samples)->check(positive);
  v_br->add_option("--seed", bc.seed);
  v_br->add_option("--tol", bc.tol)->check(positive);

  // sample oy
  CLI::App* sample = group("sample", "Replica tables");
  CLI::App* s_oy = leaf(sample, "oy", "One polymer quantity over independent samples");
  auto& sc = c.sample;
  std::string s_args;
  int s_grid = 256;
  s_oy->add_option("--quantity", sc.quantity, "sheet, sheet-b, line, f-field, g-field, line-down-right, "
                                              "reversed-down-right, reversed-w, brownian")
      ->required();
  s_oy->add_option("--args", s_args, "Comma list of arguments");
  s_oy->add_option("--replicas", sc.replicas)->check(positive);
  s_oy->add_option("--seed", sc.master_seed);
  s_oy->add_option("--n", sc.n)->check(positive);
  s_oy->add_option("--T", sc.T)->check(positive);
  s_oy->add_option("--grid", s_grid)->check(positive);
  s_oy->add_option("--l-max", sc.l_max, "Right cutoff (0: default)")->check(CLI::NonNegativeNumber);

  // experiments
  CLI::App* experiment = group("experiment", "Finite-k scaling experiments");
  CLI::App* e_bu = leaf(experiment, "busemann", "Busemann-ray sandwich along z_k = -kT/x");
  auto& uc = c.busemann;
  e_bu->add_option("--n", uc.n)->check(positive);
  e_bu->add_option("--T", uc.T)->check(positive);
  e_bu->add_option("--x", uc.x)->check(positive);
  e_bu->add_option("--x-second", uc.x_second)->check(positive);
  e_bu->add_option("--y1", uc.y1);
  e_bu->add_option("--y2", uc.y2);
  e_bu->add_option("--k-max", uc.k_max, "0: admissible maximum")->check(CLI::NonNegativeNumber);
  e_bu->add_option("--replicas", uc.replicas)->check(positive);
  e_bu->add_option("--grid", uc.grid)->check(positive);
  e_bu->add_option("--seed", uc.seed);
  e_bu->add_option("--slack-floor", uc.slack_floor);

  CLI::App* e_rt = leaf(experiment, "remainder-tail", "Empirical tail of the remainder field");
  auto& rc = c.remainder;
  e_rt->add_option("--n", rc.n)->check(positive);
  e_rt->add_option("--T", rc.T)->check(positive);
  e_rt->add_option("--x", rc.x)->check(positive);
  e_rt->add_option("--x-bar", rc.x_bar)->check(positive);
  e_rt->add_option("--eps", rc.eps)->check(positive);
  e_rt->add_option("--k-max", rc.k_max)->check(CLI::NonNegativeNumber);
  e_rt->add_option("--replicas", rc.replicas)->check(positive);
  e_rt->add_option("--grid", rc.grid)->check(positive);
  e_rt->add_option("--seed", rc.seed);

  // checks
  CLI::App* check = group("check", "Per-sample inequalities and distributional identities");
  CLI::App* c_in = leaf(check, "inequalities", "Quantile, scaled and decay bounds over a design");
  auto& nc = c.inequalities;
  c_in->add_option("--samples", nc.samples)->check(positive);
  c_in->add_option("--n", nc.n)->check(positive);
  c_in->add_option("--T", nc.T)->check(positive);
  c_in->add_option("--grid", nc.grid)->check(positive);
  c_in->add_option("--seed", nc.seed);
  c_in->add_option("--design", nc.design_points)->check(positive);
  c_in->add_option("--eps", nc.eps)->check(positive);
  c_in->add_option("--slack-floor", nc.slack_floor);
  c_in->add_option("--mass-tol", nc.mass_tol)->check(positive);
  c_in->add_option("--ab-tol", nc.ab_tol)->check(positive);

  CLI::App* c_di = leaf(check, "distributions", "Two-sample KS checks of distributional identities");
  auto& dc = c.distributions;
  std::string d_checks = "all";
  int d_grid = 256;
  c_di->add_option("--check", d_checks, "sheet-shift, f-downright, wrz-law or 'all'");
  c_di->add_option("--n", dc.params.n)->check(positive);
  c_di->add_option("--T", dc.params.T)->check(positive);
  c_di->add_option("--k", dc.params.k)->check(positive);
  c_di->add_option("--x", dc.params.x);
  c_di->add_option("--y", dc.params.y);
  c_di->add_option("--z", dc.params.z);
  c_di->add_option("--t", dc.params.t)->check(positive);
  c_di->add_option("--grid", d_grid)->check(positive);
  c_di->add_option("--replicas", dc.params.replicas)->check(positive);
  c_di->add_option("--seed", dc.params.seed);
  c_di->add_option("--seeds", dc.seeds)->check(positive);
  c_di->add_option("--pass-count", dc.pass_count)->check(CLI::NonNegativeNumber);
  c_di->add_option("--p-min", dc.p_min)->check(CLI::Range(0.0, 1.0));

  CLI::App* c_kc = leaf(check, "kconcave", "Concavity gap against its quadratic floor");
  auto& kc = c.kconcave;
  std::string k_ks = "1,3";
  std::string k_ts = "2,16";
  c_kc->add_option("--points", kc.points)->check(positive);
  c_kc->add_option("--lo", kc.lo)->check(positive);
  c_kc->add_option("--hi", kc.hi)->check(positive);
  c_kc->add_option("--eps", kc.eps)->check(CLI::Range(0.0, 1.0));
  c_kc->add_option("--ks", k_ks, "Comma list of k");
  c_kc->add_option("--Ts", k_ts, "Comma list of T");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    std::ostringstream help;
    app.exit(e, help, help);
    c.help = true;
    c.help_text = help.str();
    return c;
  } catch (const CLI::ConversionError& e) {
    throw CliError(exit_value, e.what());
  } catch (const CLI::ValidationError& e) {
    throw CliError(exit_value, e.what());
  } catch (const CLI::ParseError& e) {
    throw CliError(exit_usage, e.what());
  }

  for (CLI::App* cmd : app.get_subcommands()) {
    c.command = cmd->get_name();
    for (CLI::App* sub : cmd->get_subcommands()) c.subcommand = sub->get_name();
  }

  try {
    ic.families.clear();
    ic.families.push_back(id_family);
    for (int j = 0; j < id_random; ++j) ic.families.push_back("random:" + std::to_string(id_seed + static_cast<std::uint64_t>(j)));
    ic.identities.clear();
    if (id_list != "all")
      for (const auto& name : split_list(id_list)) ic.identities.push_back(identity_from_string(name));
    cc.identity = identity_from_string(cv_identity);
    cc.grids = parse_numbers<int>("--grids", cv_grids);
    sc.args = parse_numbers<double>("--args", s_args);
    sc.h = grid_step(s_grid);
    dc.params.h = grid_step(d_grid);
    if (d_checks != "all") {
      dc.checks.clear();
      for (const auto& name : split_list(d_checks)) dc.checks.push_back(dist_check_from_string(name));
    }
    kc.ks = parse_numbers<int>("--ks", k_ks);
    kc.Ts = parse_numbers<double>("--Ts", k_ts);
  } catch (const ConfigError& e) {
    throw CliError(exit_value, e.what());
  }
  return c;
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw CliError(exit_file, "cannot write '" + path + "'");
  out << text;
}

struct Outcome {
  SuiteReport report;
  std::string csv;  // empty: the command has no table
};

Outcome run_command(const RunConfig& c) {
  const std::string key = c.command + " " + c.subcommand;
  Outcome o;
  std::ostringstream csv;
  if (key == "verify identities") {
    o.report = identity_suite(c.identities);
  } else if (key == "verify oracle") {
    o.report = oracle_suite(c.oracle);
  } else if (key == "verify convergence") {
    o.report = convergence_suite(c.convergence);
    csv << "n,case,grid,residual\n";
    for (const auto& row : o.report.json["rows"]) {
      if (!row.contains("residuals")) continue;
      for (std::size_t g = 0; g < c.convergence.grids.size(); ++g)
        csv << row["n"].get<int>() << ',' << row["case"].get<std::string>() << ',' << c.convergence.grids[g] << ','
            << format_number(row["residuals"][g].get<double>()) << '\n';
    }
    o.csv = csv.str();
  } else if (key == "verify brownian") {
    o.report = brownian_identity_suite(c.brownian);
  } else if (key == "sample oy") {
    const SampleTable t = run_replicas(c.sample);
    csv << "replica,quantity,arg1,arg2,arg3,value\n";
    for (std::size_t r = 0; r < t.value.size(); ++r) {
      csv << t.replica[r] << ',' << c.sample.quantity;
      for (std::size_t i = 0; i < 3; ++i) {
        csv << ',';
        if (i < c.sample.args.size()) csv << format_number(c.sample.args[i]);
      }
      csv << ',' << format_number(t.value[r]) << '\n';
    }
    o.csv = csv.str();
    const double n = static_cast<double>(t.value.size());
    const double mean = std::accumulate(t.value.begin(), t.value.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : t.value) ss += (v - mean) * (v - mean);
    o.report.json = {{"suite", "sample"}, {"query", c.sample.to_json()}, {"rows", t.value.size()},
                     {"mean", mean}, {"variance", t.value.size() > 1 ? ss / (n - 1.0) : 0.0}, {"pass", true}};
  } else if (key == "experiment busemann") {
    const BusemannResult r = busemann_suite(c.busemann);
    o.report = r.report;
    csv << "replica,k,delta,target,lower,upper,logA,logB\n";
    for (const auto& row : r.rows)
      csv << row.replica << ',' << row.k << ',' << format_number(row.delta) << ',' << format_number(row.target) << ','
          << format_number(row.lower) << ',' << format_number(row.upper) << ',' << format_number(row.log_a) << ','
          << format_number(row.log_b) << '\n';
    o.csv = csv.str();
  } else if (key == "experiment remainder-tail") {
    const RemainderTailResult r = remainder_tail_suite(c.remainder);
    o.report = r.report;
    csv << "k,x,x_bar,eps,hits,trials,p_hat,wilson_lo,wilson_hi\n";
    for (const auto& row : r.rows)
      csv << row.k << ',' << format_number(c.remainder.x) << ',' << format_number(c.remainder.x_bar) << ','
          << format_number(c.remainder.eps) << ',' << row.hits << ',' << row.trials << ','
          << format_number(row.p_hat) << ',' << format_number(row.ci.lo) << ',' << format_number(row.ci.hi) << '\n';
    o.csv = csv.str();
  } else if (key == "check inequalities") {
    o.report = inequality_suite(c.inequalities);
  } else if (key == "check distributions") {
    o.report = distribution_suite(c.distributions);
  } else if (key == "check kconcave") {
    o.report = kconcave_suite(c.kconcave);
  } else {
    throw CliError(exit_usage, "unknown command '" + key + "'");
  }
  return o;
}

}  // namespace

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.help) {
    out << c.help_text;
    return exit_ok;
  }
  if (c.threads > 0) set_worker_threads(c.threads);
  const std::string key = c.command + " " + c.subcommand;
  nlohmann::json report;
  std::string csv;
  int code = exit_ok;
  try {
    Outcome o = run_command(c);
    report = std::move(o.report.json);
    csv = std::move(o.csv);
    code = o.report.pass ? exit_ok : exit_tolerance;
    report["status"] = o.report.pass ? "pass" : "fail";
  } catch (const CliError& e) {
    report = {{"status", "error"}, {"error", e.what()}};
    code = e.code();
  } catch (const CapabilityError& e) {
    report = {{"status", "error"}, {"kind", "capability"}, {"error", e.what()}};
    code = exit_runtime;
  } catch (const ConfigError& e) {
    report = {{"status", "error"}, {"kind", "config"}, {"error", e.what()}};
    code = exit_value;
  } catch (const RangeError& e) {
    report = {{"status", "error"}, {"kind", "range"}, {"error", e.what()}};
    code = exit_value;
  } catch (const std::exception& e) {
    report = {{"status", "error"}, {"kind", "runtime"}, {"error", e.what()}};
    code = exit_runtime;
  }
  report["command"] = key;
  if (report.contains("error")) err << "polylab: " << report["error"].get<std::string>() << '\n';
  try {
    write_text(c.json_file(), report.dump(2) + "\n");
    if (!csv.empty()) write_text(c.csv_file(), csv);
  } catch (const std::exception& e) {
    err << "polylab: " << e.what() << '\n';
    return exit_file;
  }
  out << key << ": " << (code == exit_ok ? "PASS" : code == exit_tolerance ? "FAIL" : "ERROR") << " -> "
      << c.json_file();
  if (!csv.empty()) out << ", " << c.csv_file();
  out << '\n';
  return code;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return execute(parse_cli(args), out, err);
  } catch (const CliError& e) {
    err << "polylab: " << e.what() << '\n';
    return e.code();
  }
}

}  // namespace polylab
