#pragma once

#include <vector>

namespace spikecount {

// One population spike eigenvalue with its multiplicity.
struct Spike {
  double alpha = 0.0;
  int multiplicity = 1;
};

/// Spiked population covariance: eigenvalues sigma2 * (alpha_1, ...,
/// alpha_q0, 1, ..., 1) with strictly decreasing alphas, all > 1.
/// An empty spike list encodes the null (white) model.
struct SpikeSpec {
  std::vector<Spike> spikes;
  double sigma2 = 1.0;

  int q0() const;
  // Alphas repeated by multiplicity, descending; size q0().
  std::vector<double> expanded_alphas() const;
  void validate() const;  // throws config_error on violated invariants

  static SpikeSpec simple(const std::vector<double>& alphas, double sigma2 = 1.0);
  static SpikeSpec null_model(double sigma2 = 1.0);
};

// Dimension/sample-size pair with its exact ratio c = p/n.
struct AspectRatio {
  int p;
  int n;
  double c;

  AspectRatio(int p_, int n_);
};

// Marcenko-Pastur support: b_minus = sigma2*(1-sqrt(c))^2,
// b_plus = sigma2*(1+sqrt(c))^2.
struct MpLaw {
  double c = 0.0;
  double sigma2 = 1.0;
  double b_minus = 0.0;
  double b_plus = 0.0;
};

// Spike-to-sample-eigenvalue map alpha + c*alpha/(alpha - 1).
// Throws std::domain_error at the pole alpha = 1.
double phi(double alpha, double c);

MpLaw bulk_edges(double c, double sigma2);

// Continuous part of the MP density; 0 outside (b_minus, b_plus) and at
// the edges. The point mass at 0 for c >= 1 is not represented.
double mp_density(double x, const MpLaw& law);

// Limit edge-scaling constant (1+sqrt(c))*(1+sqrt(1/c))^(1/3).
double beta_limit(double c);

// Finite-sample form (1+sqrt(p/n))*(1+sqrt(n/p))^(1/3).
double beta_finite(int n, int p);

/// Gap-detection threshold 4*sqrt(2*log(log n))/n^(2/3) * beta_finite(n, p).
/// Natural logarithms; requires n >= 3 so that log(log n) > 0.
double threshold_dn(int n, int p);

// Factor-strength to spike conversion alpha = alpha_prime/sigma2 + 1.
double factor_to_spike(double alpha_prime, double sigma2);

}  // namespace spikecount
