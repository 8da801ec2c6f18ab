#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spikecount/model.hpp"

namespace spikecount {

/// Sorted sample-covariance eigenvalues, descending. When p > n the
/// trailing p - n values are exactly zero (Gram companion route).
struct Spectrum {
  std::vector<double> values;
  int p = 0;
  int n = 0;
};

// (root_seed, replication_index) deterministically selects the generator
// stream, so replications are reproducible independently and in parallel.
struct SampleSeed {
  std::uint64_t root_seed = 0;
  std::uint64_t replication_index = 0;
};

enum class NoiseKind {
  gaussian,
  symmetric_heavy,  // Laplace scaled to unit variance
};

/// Draws n observations from the spiked model (diagonal covariance
/// sigma2 * diag(alpha_1..alpha_q0, 1, ..., 1)); rows are observations.
Eigen::MatrixXd sample_data_matrix(const SpikeSpec& spec, const AspectRatio& ratio,
                                   SampleSeed seed,
                                   NoiseKind kind = NoiseKind::gaussian,
                                   bool rotate = false);

/// Full sorted spectrum of the sample covariance of a fresh draw.
/// `rotate` conjugates the population covariance by a Haar-orthogonal
/// matrix drawn from an independent stream (robustness checks only).
Spectrum sample_spectrum(const SpikeSpec& spec, const AspectRatio& ratio,
                         SampleSeed seed, NoiseKind kind = NoiseKind::gaussian,
                         bool rotate = false);

/// Eigenvalues of (1/n) X^T X for an n x p data matrix X (rows are
/// observations, no mean-centering), descending. Uses the n x n Gram
/// companion when p > n and pads with exact zeros.
Spectrum spectrum_from_data(const Eigen::MatrixXd& data);

}  // namespace spikecount
