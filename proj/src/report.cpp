#include "polarsphere/report.hpp"

#include <charconv>
#include <cmath>

namespace polarsphere {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

json make_report(const std::string& experiment, json params, json rows, json verdicts,
                 double runtime_s) {
  return json{{"schema_version", kReportSchemaVersion},
              {"experiment", experiment},
              {"params", std::move(params)},
              {"rows", std::move(rows)},
              {"verdicts", std::move(verdicts)},
              {"runtime_s", runtime_s}};
}

json rows_json(const ConvergenceTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"n", r.n},
                    {"mean", r.estimate.mean},
                    {"std_error", r.estimate.std_error},
                    {"scaled", r.scaled},
                    {"trials", table.trials},
                    {"seed", table.seed}});
  }
  return rows;
}

json verdict_json(const Verdict& v) {
  return json{{"name", v.name},
              {"passed", v.passed},
              {"value", std::isfinite(v.value) ? json(v.value) : json(nullptr)},
              {"threshold", v.threshold},
              {"detail", v.detail}};
}

json verdicts_json(const CheckReport& report) {
  json out = json::array();
  for (const auto& v : report.verdicts) out.push_back(verdict_json(v));
  return out;
}

json fit_json(const PowerLawFit& fit) {
  return json{{"C", fit.C},
              {"p", fit.p},
              {"residual", fit.residual},
              {"rows_used", fit.rows_used},
              {"decaying", fit.decaying}};
}

json rows_json(const DominationReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"eta", r.eta},
                    {"geometric_tail", r.geometric_tail},
                    {"std_error", r.std_error},
                    {"orderstat_tail", r.orderstat_tail},
                    {"passed", r.passed}});
  }
  return rows;
}

json rows_json(const IdentityReport& report) {
  json rows = json::array();
  for (const auto& e : report.entries) {
    rows.push_back({{"axis", e.axis},
                    {"lhs_mean", e.lhs.mean},
                    {"lhs_std_error", e.lhs.std_error},
                    {"rhs_mean", e.rhs.mean},
                    {"rhs_std_error", e.rhs.std_error},
                    {"diff_mean", e.diff.mean},
                    {"diff_std_error", e.diff.std_error},
                    {"passed", e.passed()}});
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "n,mean,std_error,scaled,trials,seed\n";
  for (const auto& r : table.rows) {
    out << r.n << ',' << format_double(r.estimate.mean) << ','
        << format_double(r.estimate.std_error) << ',' << format_double(r.scaled) << ','
        << table.trials << ',' << table.seed << '\n';
  }
}

}  // namespace polarsphere
