#include "ssr/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace ssr {

namespace {

using nlohmann::json;

std::vector<double> parse_csv_row(const std::string& line, const std::string& path,
                                  int row) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  int col = 0;
  while (std::getline(ss, cell, ',')) {
    ++col;
    try {
      size_t pos = 0;
      const double v = std::stod(cell, &pos);
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
        ++pos;
      if (pos != cell.size()) throw std::invalid_argument("trailing characters");
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ": cannot parse number at row " +
                               std::to_string(row) + ", column " +
                               std::to_string(col));
    }
  }
  return values;
}

std::string full_precision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    auto values = parse_csv_row(line, path, row);
    if (!rows.empty() && values.size() != rows.front().size())
      throw std::runtime_error(path + ": ragged row " + std::to_string(row) +
                               " (expected " + std::to_string(rows.front().size()) +
                               " columns, got " + std::to_string(values.size()) + ")");
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
  return m;
}

VectorXd read_vector_csv(const std::string& path) {
  const MatrixXd m = read_matrix_csv(path);
  if (m.cols() != 1)
    throw std::runtime_error(path + ": expected a single-column vector, got " +
                             std::to_string(m.cols()) + " columns");
  return m.col(0);
}

void write_vector_csv(const std::string& path, const VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += full_precision(v[i]) + "\n";
  write_file(path, out);
}

std::string report_to_csv(const SweepReport& report) {
  std::string out = "algorithm,k,trials,successes,probability,mean_linf,mean_seconds\n";
  for (size_t a = 0; a < report.config.algorithm_names.size(); ++a) {
    for (size_t ki = 0; ki < report.config.k_values.size(); ++ki) {
      const int ia = static_cast<int>(a);
      const int iki = static_cast<int>(ki);
      out += report.config.algorithm_names[a] + "," +
             std::to_string(report.config.k_values[ki]) + "," +
             std::to_string(report.outcomes[a][ki].size()) + "," +
             std::to_string(report.successes(ia, iki)) + "," +
             full_precision(report.probability(ia, iki)) + "," +
             full_precision(report.mean_linf(ia, iki)) + "," +
             full_precision(report.mean_seconds(ia, iki)) + "\n";
    }
  }
  return out;
}

void export_report_csv(const SweepReport& report, const std::string& path) {
  write_file(path, report_to_csv(report));
}

std::string csv_without_timing(const std::string& csv) {
  std::string out;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line)) {
    const auto comma = line.rfind(',');
    out += (comma == std::string::npos ? line : line.substr(0, comma)) + "\n";
  }
  return out;
}

std::string report_to_json(const SweepReport& report) {
  json j;
  j["config"] = {
      {"algorithms", report.config.algorithm_names},
      {"k_values", report.config.k_values},
      {"trials", report.config.trials},
      {"n", report.config.n},
      {"m", report.config.m},
      {"coeff_dist", coeff_dist_name(report.config.coeff_dist)},
      {"master_seed", report.config.master_seed},
      {"noise_var", report.config.noise_var},
      {"trial_time_limit", report.config.trial_time_limit},
  };
  json cells = json::array();
  for (size_t a = 0; a < report.config.algorithm_names.size(); ++a) {
    for (size_t ki = 0; ki < report.config.k_values.size(); ++ki) {
      json trials = json::array();
      for (const auto& t : report.outcomes[a][ki]) {
        trials.push_back({{"success", t.success},
                          {"linf_err", t.linf_err},
                          {"l2_err", t.l2_err},
                          {"seconds", t.seconds}});
      }
      cells.push_back({{"algorithm", report.config.algorithm_names[a]},
                       {"k", report.config.k_values[ki]},
                       {"outcomes", trials}});
    }
  }
  j["cells"] = cells;
  return j.dump(2);
}

void export_report_json(const SweepReport& report, const std::string& path) {
  write_file(path, report_to_json(report));
}

SweepReport import_report_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  SweepReport report;
  const auto& c = j.at("config");
  report.config.algorithm_names = c.at("algorithms").get<std::vector<std::string>>();
  report.config.k_values = c.at("k_values").get<std::vector<int>>();
  report.config.trials = c.at("trials").get<int>();
  report.config.n = c.at("n").get<int>();
  report.config.m = c.at("m").get<int>();
  report.config.coeff_dist = coeff_dist_from_name(c.at("coeff_dist").get<std::string>());
  report.config.master_seed = c.at("master_seed").get<std::uint64_t>();
  report.config.noise_var = c.at("noise_var").get<double>();
  report.config.trial_time_limit = c.at("trial_time_limit").get<double>();

  const size_t n_algos = report.config.algorithm_names.size();
  const size_t n_k = report.config.k_values.size();
  report.outcomes.assign(n_algos, std::vector<std::vector<TrialOutcome>>(n_k));
  for (const auto& cell : j.at("cells")) {
    const int a = report.algo_index(cell.at("algorithm").get<std::string>());
    int ki = -1;
    for (size_t i = 0; i < n_k; ++i)
      if (report.config.k_values[i] == cell.at("k").get<int>())
        ki = static_cast<int>(i);
    if (ki < 0) throw std::runtime_error(path + ": cell k outside grid");
    for (const auto& t : cell.at("outcomes")) {
      TrialOutcome out;
      out.success = t.at("success").get<bool>();
      // non-finite errors (failed solves) serialize as null
      out.linf_err = t.at("linf_err").is_number()
                         ? t.at("linf_err").get<double>()
                         : std::numeric_limits<double>::infinity();
      out.l2_err = t.at("l2_err").is_number()
                       ? t.at("l2_err").get<double>()
                       : std::numeric_limits<double>::infinity();
      out.seconds = t.at("seconds").get<double>();
      report.outcomes[a][ki].push_back(out);
    }
  }
  return report;
}

}  // namespace ssr
