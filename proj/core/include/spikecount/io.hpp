#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "spikecount/harness.hpp"
#include "spikecount/sampling.hpp"

namespace spikecount {

/// Reads an n x p data matrix: one observation per line, values
/// separated by whitespace or commas. Throws input_error with line and
/// column positions on malformed content.
Eigen::MatrixXd load_matrix(const std::string& path);

/// Spectrum files: two header lines "p,<int>" and "n,<int>" followed by
/// one eigenvalue per line, descending.
Spectrum load_spectrum_csv(const std::string& path);
void save_spectrum_csv(const Spectrum& spectrum, const std::string& path);

/// Experiment config: flat "key = value" lines with [spikes], [sizes]
/// and [estimator_settings] sections mirroring ExperimentConfig fields.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name);

// One (config, size) cell flattened for result emission.
struct ResultRow {
  std::string model_id;
  int p = 0;
  int n = 0;
  double sigma2_true = 1.0;
  std::string estimator;
  std::uint64_t root_seed = 0;
  SummaryStats stats;
};

/// CSV with one row per cell and one count_k column for every q
/// observed anywhere in `rows`. The leading timestamp comment is
/// suppressed with with_timestamp = false (golden outputs).
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows,
                       bool with_timestamp = true);

}  // namespace spikecount
