#pragma once

#include <ostream>
#include <string>

#include "json.hpp"
#include "polarsphere/experiments.hpp"

namespace polarsphere {

inline constexpr int kReportSchemaVersion = 1;

using nlohmann::json;

/// {schema_version, experiment, params, rows[], verdicts[], runtime_s}
json make_report(const std::string& experiment, json params, json rows, json verdicts,
                 double runtime_s);

json rows_json(const ConvergenceTable& table);
json verdict_json(const Verdict& v);
json verdicts_json(const CheckReport& report);
json fit_json(const PowerLawFit& fit);
json rows_json(const DominationReport& report);
json rows_json(const IdentityReport& report);

/// CSV columns: n,mean,std_error,scaled,trials,seed
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace polarsphere
