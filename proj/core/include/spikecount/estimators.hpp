#pragma once

#include <optional>
#include <vector>

#include "spikecount/sampling.hpp"
#include "spikecount/tracy_widom.hpp"

namespace spikecount {

struct GapEstimatorSettings {
  // Preliminary bound s on the spike count; defaults to min(30, p - 2).
  std::optional<int> s_max;
  // Replaces threshold_dn(n, p) when set (sensitivity studies).
  std::optional<double> dn_override;
  // Multiplies threshold_dn(n, p) when dn_override is unset. The built-in
  // study configs pin calibrated values here; see builtin_configs().
  double dn_scale = 1.0;
};

struct IterationStep {
  int q = 0;
  double sigma2 = 0.0;  // variance estimate that produced this q
};

struct EstimateResult {
  int q_hat = 0;
  double sigma2_hat = 0.0;
  std::vector<IterationStep> iterations;
  std::vector<double> gaps;      // raw-spectrum gaps delta_1..delta_{s_max+1}
  double threshold_used = 0.0;   // the d_n applied to the rescaled gaps
  bool converged = false;
};

int resolve_s_max(const GapEstimatorSettings& settings, int p);

// [delta_1, ..., delta_{s_max+1}] with delta_j = lambda_j - lambda_{j+1}.
std::vector<double> consecutive_gaps(const Spectrum& spectrum, int s_max);

// Mean of the entries after the first q (descending order assumed).
double trimmed_mean(const std::vector<double>& values_descending, int q);

/// Gap estimator with known noise variance: rescales the spectrum by
/// sigma2 and returns the largest j <= s_max whose leading gaps all
/// reach d_n while gap j+1 falls below it; 0 when no such j exists.
int estimate_q_known_variance(const Spectrum& spectrum, double sigma2,
                              const GapEstimatorSettings& settings = {});

/// Unknown-variance loop: start from the full trace mean, alternate the
/// known-variance estimate with the trimmed mean of the eigenvalues past
/// the current count, and stop at a fixed point (or after s_max rounds).
EstimateResult estimate_q_unknown_variance(const Spectrum& spectrum,
                                           const GapEstimatorSettings& settings = {});

struct KnSettings {
  double gamma = 0.005;           // per-test significance level
  std::optional<int> k_max;       // defaults to min(p, n) - 1
  std::optional<double> sigma2;   // set -> known-variance mode
};

/// Sequential largest-eigenvalue test: accepts spike k while
/// lambda_k > sigma2 * (beta_finite(n, p-k)/n^(2/3) * s(gamma) + b)
/// with b = (1 + sqrt(p/n))^2, and returns the first failing k minus 1.
/// With sigma2 unset the variance is re-estimated by the trimmed mean
/// after each pass until the count stabilizes.
int kn_estimate(const Spectrum& spectrum, const KnSettings& settings = {});
int kn_estimate(const Spectrum& spectrum, const KnSettings& settings,
                const Tw1Table& table);

}  // namespace spikecount
