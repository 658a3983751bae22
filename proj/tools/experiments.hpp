#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ubq/cantor.hpp"
#include "ubq/config.hpp"

namespace ubq::app {

struct SummaryRow {
  std::string quantity;
  double predicted = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
  std::string id;
  std::string claim;  // the statement being checked, printed in output headers
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<SummaryRow> summary;
  Table table;

  bool pass() const;
};

/// Known ids: jarnik, mahler, rects, targets, cantor, content-slopes.
std::vector<std::string> experiment_ids();

/// Reads [experiment] id and seed plus the experiment's own [params].
ExperimentResult run_experiment(const Config& cfg, unsigned threads = 0);

/// Writes <dir>/<id>.csv, <dir>/<id>.summary.jsonl and a sidecar <dir>/<id>.log
/// holding the only timestamp.
void write_artifacts(const ExperimentResult& result, const std::string& dir);

std::string format_number(double v);

/// Construction parameters from [params]; the seed comes from [experiment].
CantorParams cantor_params(const Config& cfg);
/// Lebesgue on [0,1], rational balls q <= q_max, U_n = B_n^delta.
CantorTree cantor_from_config(const Config& cfg, const CylinderMeasure& mu);

}  // namespace ubq::app
