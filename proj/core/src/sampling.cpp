#include "spikecount/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spikecount/errors.hpp"

namespace spikecount {

namespace {

// Stream constants keep the data draw and the optional rotation draw on
// disjoint generator streams for the same (root_seed, replication_index).
constexpr std::uint32_t kStreamData = 0;
constexpr std::uint32_t kStreamRotation = 1;

std::mt19937_64 make_engine(SampleSeed seed, std::uint32_t stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.root_seed >> 32),
      static_cast<std::uint32_t>(seed.root_seed),
      static_cast<std::uint32_t>(seed.replication_index >> 32),
      static_cast<std::uint32_t>(seed.replication_index),
      stream,
  };
  return std::mt19937_64(seq);
}

double draw_laplace(std::mt19937_64& gen) {
  // Inverse CDF of the symmetrized exponential, scaled to unit variance.
  double u = std::ldexp(static_cast<double>(gen() >> 11), -53);
  u = std::clamp(u, 0x1p-53, 1.0 - 0x1p-53);
  const double b = 1.0 / std::sqrt(2.0);
  return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
}

Eigen::MatrixXd haar_orthogonal(int p, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(p, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < p; ++i) g(i, j) = normal(gen);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Spectrum spectrum_from_covariance_factors(const Eigen::MatrixXd& data) {
  const int n = static_cast<int>(data.rows());
  const int p = static_cast<int>(data.cols());
  Spectrum out;
  out.p = p;
  out.n = n;
  out.values.assign(static_cast<std::size_t>(p), 0.0);

  const double inv_n = 1.0 / static_cast<double>(n);
  Eigen::VectorXd eig;
  if (p <= n) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
    s.selfadjointView<Eigen::Lower>().rankUpdate(data.adjoint(), inv_n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw numeric_error("spectrum_from_data: eigensolver failed to converge");
    }
    eig = solver.eigenvalues();
  } else {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    g.selfadjointView<Eigen::Lower>().rankUpdate(data, inv_n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw numeric_error("spectrum_from_data: eigensolver failed to converge");
    }
    eig = solver.eigenvalues();
  }

  // eig is ascending; store descending into the leading slots (the
  // remaining p - n slots stay exactly zero when p > n).
  const int m = static_cast<int>(eig.size());
  for (int i = 0; i < m; ++i) {
    out.values[static_cast<std::size_t>(i)] = eig[m - 1 - i];
  }

  // Symmetric eigensolvers emit tiny negatives; clamp inside the floor.
  const double top = m > 0 ? std::max(eig[m - 1], 0.0) : 0.0;
  const double floor = -1e-10 * top;
  for (double& v : out.values) {
    if (v < 0.0) {
      if (v < floor) {
        throw numeric_error("spectrum_from_data: eigenvalue " + std::to_string(v) +
                            " below the PSD floor");
      }
      v = 0.0;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd sample_data_matrix(const SpikeSpec& spec, const AspectRatio& ratio,
                                   SampleSeed seed, NoiseKind kind, bool rotate) {
  spec.validate();
  const int p = ratio.p;
  const int n = ratio.n;
  const int q0 = spec.q0();
  if (p < q0 + 2) {
    throw config_error("sample_spectrum: requires p >= q0 + 2 (p = " +
                       std::to_string(p) + ", q0 = " + std::to_string(q0) + ")");
  }
  if (n < 2) throw config_error("sample_spectrum: requires n >= 2");

  std::vector<double> scale(static_cast<std::size_t>(p), std::sqrt(spec.sigma2));
  {
    const std::vector<double> alphas = spec.expanded_alphas();
    for (int j = 0; j < q0; ++j) {
      scale[static_cast<std::size_t>(j)] =
          std::sqrt(spec.sigma2 * alphas[static_cast<std::size_t>(j)]);
    }
  }

  std::mt19937_64 gen = make_engine(seed, kStreamData);
  Eigen::MatrixXd data(n, p);
  if (kind == NoiseKind::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int j = 0; j < p; ++j) {
      const double s = scale[static_cast<std::size_t>(j)];
      for (int i = 0; i < n; ++i) data(i, j) = s * normal(gen);
    }
  } else {
    for (int j = 0; j < p; ++j) {
      const double s = scale[static_cast<std::size_t>(j)];
      for (int i = 0; i < n; ++i) data(i, j) = s * draw_laplace(gen);
    }
  }

  if (rotate) {
    std::mt19937_64 rot_gen = make_engine(seed, kStreamRotation);
    const Eigen::MatrixXd q = haar_orthogonal(p, rot_gen);
    data = data * q.transpose();
  }
  return data;
}

Spectrum sample_spectrum(const SpikeSpec& spec, const AspectRatio& ratio,
                         SampleSeed seed, NoiseKind kind, bool rotate) {
  return spectrum_from_covariance_factors(
      sample_data_matrix(spec, ratio, seed, kind, rotate));
}

Spectrum spectrum_from_data(const Eigen::MatrixXd& data) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw input_error("spectrum_from_data: empty data matrix");
  }
  if (!data.allFinite()) {
    throw input_error("spectrum_from_data: non-finite entries in data matrix");
  }
  return spectrum_from_covariance_factors(data);
}

}  // namespace spikecount
