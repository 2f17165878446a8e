#pragma once

#include <Eigen/Dense>
#include <string>

#include "ssr/bench.hpp"

namespace ssr {

// Plain CSV, no header: one matrix row per line, comma separated.
MatrixXd read_matrix_csv(const std::string& path);
VectorXd read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const VectorXd& v);

// Report CSV schema:
//   algorithm,k,trials,successes,probability,mean_linf,mean_seconds
std::string report_to_csv(const SweepReport& report);
void export_report_csv(const SweepReport& report, const std::string& path);

// Drops the trailing mean_seconds column. Sweep results are bitwise
// reproducible for a fixed seed except for measured wall time, so
// determinism comparisons go through this.
std::string csv_without_timing(const std::string& csv);

// Full JSON round trip including per-trial outcomes and config snapshot.
std::string report_to_json(const SweepReport& report);
void export_report_json(const SweepReport& report, const std::string& path);
SweepReport import_report_json(const std::string& path);

}  // namespace ssr
