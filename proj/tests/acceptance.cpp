// SPDX-License-Identifier: Apache-2.0
// Acceptance runner: one PASS/FAIL line per criterion. Reports land in
// ./acceptance-reports next to the binary.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "polylab/cli.hpp"
#include "polylab/parallel.hpp"
#include "polylab/suites.hpp"

using namespace polylab;
namespace fs = std::filesystem;

namespace {

const fs::path kReports = "acceptance-reports";

struct Outcome {
  bool pass = false;
  std::string detail;
};

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void save(const std::string& name, const nlohmann::json& j) {
  fs::create_directories(kReports);
  std::ofstream(kReports / (name + ".json")) << j.dump(2) << '\n';
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Largest residual of each identity in an identity-suite report, checked
// against the given bound.
Outcome identity_bounds(const SuiteReport& r, const std::vector<std::pair<std::string, double>>& bounds) {
  Outcome o{r.pass, ""};
  for (const auto& [name, bound] : bounds) {
    const auto& s = r.json["summary"][name];
    const double worst = s["max_residual"].get<double>();
    o.pass = o.pass && worst <= bound;
    o.detail += name + " max " + num(worst) + " (<= " + num(bound) + ") ";
  }
  return o;
}

IdentitySuiteConfig identity_config(std::vector<IdentityId> ids) {
  IdentitySuiteConfig c;
  c.identities = std::move(ids);
  return c;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Runs one command at the given thread count and returns the bytes of its
// JSON report and CSV table.
std::string run_bytes(const std::vector<std::string>& args, int threads) {
  const fs::path dir = kReports / "determinism" / ("threads-" + std::to_string(threads));
  std::vector<std::string> full{"--threads", std::to_string(threads), "--out-dir", dir.string()};
  full.insert(full.end(), args.begin(), args.end());
  const RunConfig cfg = parse_cli(full);
  std::ostringstream out, err;
  execute(cfg, out, err);
  std::string bytes = read_file(cfg.json_file());
  if (fs::exists(cfg.csv_file())) bytes += read_file(cfg.csv_file());
  return bytes;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o, double seconds) {
    std::printf("criterion %2d: %s  %s: %s[%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = oracle_suite(OracleConfig{});
    const double t = elapsed_since(t0);
    save("criterion-01-oracle", r.json);
    Outcome o{r.pass && t < 60.0, "max relative error " + num(r.json["max_error"].get<double>()) + " (<= 1e-4), "};
    report(1, "chain quadrature vs nested quadrature", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport g = identity_suite(identity_config({IdentityId::greene}));
    const SuiteReport c = convergence_suite(ConvergenceConfig{});
    const double t = elapsed_since(t0);
    save("criterion-02-greene", g.json);
    save("criterion-02-convergence", c.json);
    Outcome o = identity_bounds(g, {{"greene", 1e-3}});
    const double ratio = c.json["min_ratio"].is_null() ? 0.0 : c.json["min_ratio"].get<double>();
    o.pass = o.pass && c.pass && ratio >= 1.5 && t < 120.0;
    o.detail += "min refinement ratio " + num(ratio) + " (>= 1.5) ";
    report(2, "top-k sums vs non-intersecting free energies", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = identity_suite(identity_config({IdentityId::invariance}));
    const double t = elapsed_since(t0);
    save("criterion-03-invariance", r.json);
    report(3, "free energies invariant under W", identity_bounds(r, {{"invariance", 1e-3}}), t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport s = identity_suite(identity_config({IdentityId::wf_wrf}));
    const SuiteReport b = brownian_identity_suite(BrownianIdentityConfig{});
    const double t = elapsed_since(t0);
    save("criterion-04-wf-wrf-smooth", s.json);
    save("criterion-04-wf-wrf-brownian", b.json);
    Outcome o = identity_bounds(s, {{"wf-wrf", 1e-3}});
    const double worst = b.json["max_residual"].get<double>();
    o.pass = o.pass && b.pass && worst <= 1e-2;
    o.detail += "brownian max " + num(worst) + " (<= 0.01) ";
    report(4, "W f plus reversed W f", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = identity_suite(identity_config(
        {IdentityId::change_of_variables, IdentityId::z_reverse, IdentityId::searrow, IdentityId::pileup}));
    const double t = elapsed_since(t0);
    save("criterion-05-exact-identities", r.json);
    const Outcome o = identity_bounds(
        r, {{"change-of-variables", 1e-6}, {"z-reverse", 1e-3}, {"searrow", 1e-3}, {"pileup", 1e-3}});
    report(5, "change of variables, reversal, down/right complement, pile-up", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = inequality_suite(InequalityConfig{});
    const double t = elapsed_since(t0);
    save("criterion-06-07-inequalities", r.json);
    double worst = 0.0;
    bool first = true;
    std::string worst_name;
    for (const auto& [name, entry] : r.json["families"].items()) {
      if (entry["min_slack"].is_null()) continue;
      const double v = entry["min_slack"].get<double>();
      if (first || v < worst) {
        worst = v;
        worst_name = name;
        first = false;
      }
    }
    Outcome six{r.json["slack_pass"].get<bool>() && t < 600.0,
                "min slack " + num(worst) + " (" + worst_name + ", >= -1e-8), "};
    report(6, "quantile, scaled and decay inequalities on every sample", six, t);
    const double mass = r.json["max_mass_error"].get<double>();
    const double ab = r.json["max_ab_error"].get<double>();
    Outcome seven{r.json["marginal_pass"].get<bool>(),
                  "max |mass - 1| " + num(mass) + " (<= 1e-3), max |A + B - 1| " + num(ab) + " (<= 1e-9) "};
    report(7, "polymer marginal normalization", seven, 0.0);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = distribution_suite(DistributionSuiteConfig{});
    const double t = elapsed_since(t0);
    save("criterion-08-distributions", r.json);
    Outcome o{r.pass && t < 900.0, ""};
    for (const auto& c : r.json["checks"]) {
      o.detail += c["check"].get<std::string>() + " " + std::to_string(c["seeds_passing"].get<int>()) + "/10" +
                  (c["documented_pass"].get<bool>() ? " " : " (documented seed failed) ");
    }
    report(8, "distributional identities, two-sample KS", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const SuiteReport r = kconcave_suite(KconcaveConfig{});
    const double t = elapsed_since(t0);
    save("criterion-09-kconcave", r.json);
    Outcome o{r.pass, std::to_string(r.json["violations"].get<long long>()) + " violations over " +
                          std::to_string(r.json["evaluated"].get<long long>()) + " points "};
    report(9, "concavity gap above its quadratic floor", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const BusemannResult r = busemann_suite(BusemannConfig{});
    const double t = elapsed_since(t0);
    save("criterion-10-busemann", r.report.json);
    Outcome o{r.report.pass && t < 300.0,
              "k_max " + std::to_string(r.report.json["k_max"].get<int>()) + ", min lower slack " +
                  num(r.report.json["min_lower_slack"].get<double>()) + ", min upper slack " +
                  num(r.report.json["min_upper_slack"].get<double>()) + " "};
    report(10, "Busemann-ray sandwich", o, t);
  }

  {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::vector<std::string>> commands{
        {"verify", "oracle", "--cases", "10"},
        {"verify", "identities", "--n", "3", "--wf-n-max", "3", "--grid", "1024"},
        {"verify", "convergence", "--grids", "256,512,1024", "--n", "3"},
        {"verify", "brownian", "--n", "3", "--grid", "1024", "--samples", "4"},
        {"sample", "oy", "--quantity", "sheet", "--args", "1,0.5", "--replicas", "16"},
        {"check", "inequalities", "--samples", "4", "--design", "40"},
        {"check", "distributions", "--replicas", "200", "--seeds", "2", "--pass-count", "0"},
        {"check", "kconcave", "--points", "10000"},
        {"experiment", "busemann", "--replicas", "4"},
        {"experiment", "remainder-tail", "--replicas", "40"},
    };
    Outcome o{true, ""};
    int same = 0;
    for (const auto& cmd : commands) {
      const bool equal = run_bytes(cmd, 1) == run_bytes(cmd, 4);
      if (equal) {
        ++same;
      } else {
        o.pass = false;
        o.detail += "differs: " + cmd[0] + " " + cmd[1] + "; ";
      }
    }
    set_worker_threads(0);
    o.detail += std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical at 1 vs 4 threads ";
    report(11, "determinism across thread counts", o, elapsed_since(t0));
  }

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
