// polarsphere: random polarization experiments and law evaluators.
//
// Exit codes: 0 all verdicts pass, 1 a statistical verdict failed,
// 2 usage error, 3 resource / depth-limit error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "polarsphere/dynamics.hpp"
#include "polarsphere/error.hpp"
#include "polarsphere/experiments.hpp"
#include "polarsphere/laws.hpp"
#include "polarsphere/report.hpp"
#include "polarsphere/set_spec.hpp"

using namespace polarsphere;
using std::numbers::pi;

namespace {

enum ExitCode { kOk = 0, kVerdictFailed = 1, kUsage = 2, kResource = 3 };

struct RunConfig {
  int d = 2;
  std::string experiment;
  std::string set = "hemi";
  std::string set_b;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  double alpha = 0.2;
  std::optional<double> xi;
  std::optional<double> ell;
  std::string format = "csv";
  std::string out;
  int threads = 0;
  bool ci = false;
  std::size_t samples = 0;
  std::size_t burn_in = kDefaultBurnIn;
  std::size_t grid = 0;
  std::size_t mc = 0;
  std::size_t axes = 20;
  double threshold = 0.05;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ParallelConfig parallel_of(const RunConfig& c) {
  return ParallelConfig{Exec::kOpenMP, c.threads};
}

std::uint64_t seed_of(const RunConfig& c) { return c.seed.value_or(1); }

double runtime_of(const RunConfig& c, const Stopwatch& w) { return c.ci ? 0.0 : w.seconds(); }

json base_params(const RunConfig& c) {
  return json{{"d", c.d}, {"seed", seed_of(c)}, {"threads", c.threads}};
}

void emit_json(const RunConfig& c, const std::string& experiment, json params, json rows,
               json verdicts, const Stopwatch& w) {
  Output out(c.out);
  out.stream() << make_report(experiment, std::move(params), std::move(rows), std::move(verdicts),
                              runtime_of(c, w))
                      .dump(2)
               << '\n';
}

void print_verdicts(const json& verdicts) {
  for (const auto& v : verdicts) {
    std::cerr << (v.at("passed").get<bool>() ? "PASS " : "FAIL ") << v.at("name").get<std::string>()
              << ": " << v.at("detail").get<std::string>() << '\n';
  }
}

bool all_passed(const json& verdicts) {
  for (const auto& v : verdicts) {
    if (!v.at("passed").get<bool>()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

int cmd_converge(const RunConfig& c) {
  Stopwatch w;
  const Dimension d(c.d);
  const auto set = parse_set_spec(c.set, d, c.alpha);
  ConvergenceOptions opts;
  opts.parallel = parallel_of(c);
  if (c.samples) opts.mc_samples = c.samples;
  const bool is_cap = set.as_cap().has_value();
  const std::size_t n_max = c.n_max.value_or(200);
  const std::size_t trials = c.trials.value_or(is_cap ? 100000 : 100);
  const auto table = convergence_experiment(set, d, n_max, trials, seed_of(c), opts);

  const auto check = upper_bound_check(table, d);
  json verdicts = verdicts_json(check);
  json fit_info = nullptr;
  try {
    const auto fit = fit_power_law(table, c.burn_in);
    fit_info = fit_json(fit);
    std::ostringstream detail;
    detail << "mean ~ " << format_double(fit.C) << " n^-" << format_double(fit.p)
           << (fit.decaying ? "" : " (non-decaying)");
    verdicts.push_back(verdict_json(Verdict{"power_law_fit", true, fit.p, 0.0, detail.str()}));
  } catch (const FitNotApplicable& e) {
    verdicts.push_back(verdict_json(Verdict{"power_law_fit", true, 0.0, 0.0,
                                            std::string("not applicable: ") + e.what()}));
  }

  if (c.format == "json") {
    json params = base_params(c);
    params["set"] = c.set;
    params["alpha"] = c.alpha;
    params["n_max"] = n_max;
    params["trials"] = trials;
    params["exact_cap_tracking"] = table.exact_cap_tracking;
    params["burn_in"] = c.burn_in;
    params["fit"] = fit_info;
    emit_json(c, "converge", std::move(params), rows_json(table), verdicts, w);
  } else {
    Output out(c.out);
    write_convergence_csv(out.stream(), table);
  }
  print_verdicts(verdicts);
  return all_passed(verdicts) ? kOk : kVerdictFailed;
}

int cmd_law(const RunConfig& c) {
  Stopwatch w;
  const Dimension d(c.d);
  if (!c.xi) throw UsageError("law needs --xi in (0, pi]");
  const TauLaw law(d, *c.xi);
  const std::size_t grid = c.grid ? c.grid : 33;
  if (grid < 2) throw UsageError("--grid must be at least 2");

  std::vector<double> draws;
  if (c.mc) {
    const double a[] = {*c.xi};
    const auto start = point_from_angles(d, a);
    draws = collect_trials(c.mc, parallel_of(c), [&](std::size_t t) {
      Rng rng(seed_of(c), streams::kCompression, t + 1);  // same draws as tau_law_geometry_ks
      double out[2];
      compression_distances(start, rng, out);
      return out[1];
    });
    std::sort(draws.begin(), draws.end());
  }
  auto empirical_tail = [&](double beta) {
    const auto above = draws.end() - std::upper_bound(draws.begin(), draws.end(), beta);
    return static_cast<double>(above) / static_cast<double>(draws.size());
  };

  json rows = json::array();
  for (std::size_t i = 0; i < grid; ++i) {
    const double beta = i + 1 == grid ? pi : pi * static_cast<double>(i) / static_cast<double>(grid - 1);
    json row{{"beta", beta}, {"tail", law.tail(beta)}};
    row["integral_bound"] = beta <= law.xi() ? json(tau_integral_bound(d, law.xi(), beta)) : json(nullptr);
    if (c.mc) row["mc_tail"] = empirical_tail(beta);
    rows.push_back(row);
  }

  json verdicts = json::array();
  if (c.mc) {
    const auto ks = tau_law_geometry_ks(d, *c.xi, c.mc, seed_of(c), parallel_of(c));
    // Asymptotic KS critical value at the 0.1% level.
    const double envelope = 1.95 / std::sqrt(static_cast<double>(c.mc));
    verdicts.push_back(verdict_json(Verdict{"mc_vs_tail_ks", ks.statistic < envelope, ks.statistic,
                                            envelope, "KS against the quadrature tail"}));
  }

  if (c.format == "json") {
    json params = base_params(c);
    params["xi"] = law.xi();
    params["atom"] = law.atom();
    params["grid"] = grid;
    params["mc"] = c.mc;
    emit_json(c, "law", std::move(params), rows, verdicts, w);
  } else {
    Output out(c.out);
    out.stream() << "beta,tail,integral_bound" << (c.mc ? ",mc_tail" : "") << '\n';
    for (const auto& r : rows) {
      out.stream() << format_double(r["beta"].get<double>()) << ','
                   << format_double(r["tail"].get<double>()) << ',';
      if (!r["integral_bound"].is_null()) out.stream() << format_double(r["integral_bound"].get<double>());
      if (c.mc) out.stream() << ',' << format_double(r["mc_tail"].get<double>());
      out.stream() << '\n';
    }
  }
  print_verdicts(verdicts);
  return all_passed(verdicts) ? kOk : kVerdictFailed;
}

int cmd_gamma(const RunConfig& c) {
  Stopwatch w;
  const Dimension d(c.d);
  const std::size_t n = c.n_max.value_or(500);
  const std::size_t trials = c.trials.value_or(10000);
  const auto r = gamma_limit_check(d, c.alpha, n, trials, seed_of(c), parallel_of(c), c.threshold);
  json verdicts = json::array({verdict_json(Verdict{"gamma_limit_ks", r.passed, r.ks.statistic,
                                                    r.threshold, "KS(n*delta_n, " + r.ks.reference + ")"})});
  if (c.format == "json") {
    json params = base_params(c);
    params["alpha"] = c.alpha;
    params["n"] = n;
    params["trials"] = trials;
    json rows = json::array({{{"ks", r.ks.statistic}, {"n_samples", r.ks.n_samples},
                              {"reference", r.ks.reference}}});
    emit_json(c, "gamma", std::move(params), rows, verdicts, w);
  } else {
    Output out(c.out);
    out.stream() << "d,alpha,n,trials,seed,ks,threshold,passed\n"
                 << c.d << ',' << format_double(c.alpha) << ',' << n << ',' << trials << ','
                 << seed_of(c) << ',' << format_double(r.ks.statistic) << ','
                 << format_double(r.threshold) << ',' << (r.passed ? 1 : 0) << '\n';
  }
  print_verdicts(verdicts);
  return r.passed ? kOk : kVerdictFailed;
}

int cmd_dominate(const RunConfig& c) {
  Stopwatch w;
  const Dimension d(c.d);
  const double xi = c.xi.value_or(0.3);
  const double ell = c.ell.value_or(pi - xi * xi);
  const std::size_t n = c.n_max.value_or(20);
  const std::size_t trials = c.trials.value_or(100000);
  const std::size_t grid = c.grid ? c.grid : 50;
  const auto r = domination_check(d, xi, ell, n, trials, seed_of(c), parallel_of(c), grid);
  std::ostringstream detail;
  detail << "geometric tail >= order-statistic tail - " << r.sigmas
         << " sigma on " << grid << " points; largest passing ell "
         << format_double(r.ell_max_empirical);
  json verdicts = json::array({verdict_json(Verdict{"domination", r.passed, r.ell_max_empirical, ell, detail.str()})});
  if (c.format == "json") {
    json params = base_params(c);
    params["xi"] = xi;
    params["ell"] = ell;
    params["y0"] = r.y0;
    params["n"] = n;
    params["trials"] = trials;
    params["ell_max_empirical"] = r.ell_max_empirical;
    emit_json(c, "dominate", std::move(params), rows_json(r), verdicts, w);
  } else {
    Output out(c.out);
    out.stream() << "eta,geometric_tail,std_error,orderstat_tail,passed\n";
    for (const auto& row : r.rows) {
      out.stream() << format_double(row.eta) << ',' << format_double(row.geometric_tail) << ','
                   << format_double(row.std_error) << ',' << format_double(row.orderstat_tail)
                   << ',' << (row.passed ? 1 : 0) << '\n';
    }
  }
  print_verdicts(verdicts);
  return r.passed ? kOk : kVerdictFailed;
}

int cmd_identity(const RunConfig& c) {
  Stopwatch w;
  const Dimension d(c.d);
  if (c.set_b.empty()) throw UsageError("identity needs --A and --B set specs");
  const auto a = parse_set_spec(c.set, d, c.alpha);
  const auto b = parse_set_spec(c.set_b, d, c.alpha);
  const std::size_t samples = c.samples ? c.samples : 100000;
  const auto r = identity_check(a, b, d, c.axes, samples, seed_of(c), parallel_of(c));
  std::size_t failing = 0;
  for (const auto& e : r.entries) failing += e.passed() ? 0 : 1;
  json verdicts = json::array({verdict_json(
      Verdict{"two_set_identity", r.passed(), static_cast<double>(failing), 0.0,
              std::to_string(r.entries.size() - failing) + "/" + std::to_string(r.entries.size()) +
                  " axes agree within 4 sigma with non-negative sides"})});
  if (c.format == "json") {
    json params = base_params(c);
    params["A"] = c.set;
    params["B"] = c.set_b;
    params["axes"] = c.axes;
    params["samples"] = samples;
    emit_json(c, "identity", std::move(params), rows_json(r), verdicts, w);
  } else {
    Output out(c.out);
    out.stream() << "axis,lhs_mean,lhs_std_error,rhs_mean,rhs_std_error,diff_mean,diff_std_error,passed\n";
    for (std::size_t i = 0; i < r.entries.size(); ++i) {
      const auto& e = r.entries[i];
      out.stream() << i << ',' << format_double(e.lhs.mean) << ',' << format_double(e.lhs.std_error)
                   << ',' << format_double(e.rhs.mean) << ',' << format_double(e.rhs.std_error)
                   << ',' << format_double(e.diff.mean) << ',' << format_double(e.diff.std_error)
                   << ',' << (e.passed() ? 1 : 0) << '\n';
    }
  }
  print_verdicts(verdicts);
  return r.passed() ? kOk : kVerdictFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random polarizations on the d-sphere: experiments and law evaluators"};
  app.set_config("--config", "", "Flat key=value config file (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig c;
  app.add_option("--d", c.d, "Sphere dimension d >= 1")->capture_default_str();
  app.add_option("--set,--A", c.set, "Set spec (see docs/set_spec.md)")->capture_default_str();
  app.add_option("--B", c.set_b, "Second set spec (identity)");
  app.add_option("--n", c.n_max, "Number of polarizations / steps");
  app.add_option("--trials", c.trials, "Independent trials");
  app.add_option("--seed", c.seed, "Master seed")->envname("POLARSPHERE_SEED");
  app.add_option("--alpha", c.alpha, "Polar angle of a bare 'hemi' center (radians)")
      ->capture_default_str();
  app.add_option("--xi", c.xi, "Initial distance from the north pole (radians)");
  app.add_option("--ell", c.ell, "Order-statistic interval length (default pi - xi^2)");
  app.add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", c.out, "Output path (default stdout)");
  app.add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--ci", c.ci, "CI mode: seed required, runtime_s reported as 0");
  app.add_option("--samples", c.samples, "MC samples per trial (general sets, identity)");
  app.add_option("--burn-in", c.burn_in, "Smallest n used by the power-law fit")->capture_default_str();
  app.add_option("--grid", c.grid, "Grid points (law, dominate)");
  app.add_option("--mc", c.mc, "Geometric MC draws for the law comparison column");
  app.add_option("--axes", c.axes, "Random axes for the identity check")->capture_default_str();
  app.add_option("--threshold", c.threshold, "KS threshold (gamma)")->capture_default_str();

  app.add_subcommand("converge", "E[m(S A sym-diff A*)] table, 2^d/n bound, power-law fit");
  app.add_subcommand("law", "Tail law of delta(tau_U(x), O) over a beta grid");
  app.add_subcommand("gamma", "KS of n delta_n against pi Gamma(d)");
  app.add_subcommand("dominate", "Geometric chain vs order-statistic tails");
  app.add_subcommand("identity", "Two-set polarization identity, paired MC");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (c.ci && !c.seed) throw UsageError("--ci requires --seed or POLARSPHERE_SEED");
    const auto* sub = app.get_subcommands().front();
    c.experiment = sub->get_name();
    if (c.experiment == "converge") return cmd_converge(c);
    if (c.experiment == "law") return cmd_law(c);
    if (c.experiment == "gamma") return cmd_gamma(c);
    if (c.experiment == "dominate") return cmd_dominate(c);
    if (c.experiment == "identity") return cmd_identity(c);
    throw UsageError("unknown experiment " + c.experiment);
  } catch (const DepthLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}
