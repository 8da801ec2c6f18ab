#include "spikecount/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spikecount/errors.hpp"

namespace spikecount {

namespace {

void check_spectrum(const Spectrum& spectrum) {
  if (spectrum.p < 3 || static_cast<int>(spectrum.values.size()) != spectrum.p) {
    throw config_error("estimator: spectrum must carry p >= 3 sorted eigenvalues");
  }
}

double resolve_dn(const GapEstimatorSettings& settings, const Spectrum& spectrum) {
  if (settings.dn_override) {
    if (!(*settings.dn_override > 0.0)) {
      throw config_error("estimator: dn_override must be positive");
    }
    return *settings.dn_override;
  }
  if (!(settings.dn_scale > 0.0)) {
    throw config_error("estimator: dn_scale must be positive");
  }
  return settings.dn_scale * threshold_dn(spectrum.n, spectrum.p);
}

// Count of leading rescaled gaps >= dn; the spec's max-j rule reduces to
// this initial-segment length (0 when the first gap already fails).
int leading_gap_count(const std::vector<double>& values, double sigma2,
                      int s_max, double dn) {
  int j = 0;
  while (j < s_max + 1) {
    const double gap = values[static_cast<std::size_t>(j)] / sigma2 -
                       values[static_cast<std::size_t>(j) + 1] / sigma2;
    if (!(gap >= dn)) break;
    ++j;
  }
  return j;
}

}  // namespace

int resolve_s_max(const GapEstimatorSettings& settings, int p) {
  const int s = settings.s_max ? *settings.s_max : std::min(30, p - 2);
  if (s < 1) throw config_error("estimator: s_max must be >= 1");
  if (s > p - 2) {
    throw config_error("estimator: s_max = " + std::to_string(s) +
                       " too large for p = " + std::to_string(p) +
                       " (needs s_max <= p - 2)");
  }
  return s;
}

std::vector<double> consecutive_gaps(const Spectrum& spectrum, int s_max) {
  check_spectrum(spectrum);
  if (s_max + 1 > spectrum.p - 1) {
    throw config_error("consecutive_gaps: s_max + 1 must not exceed p - 1");
  }
  std::vector<double> gaps(static_cast<std::size_t>(s_max) + 1);
  for (int j = 0; j <= s_max; ++j) {
    gaps[static_cast<std::size_t>(j)] = spectrum.values[static_cast<std::size_t>(j)] -
                                        spectrum.values[static_cast<std::size_t>(j) + 1];
  }
  return gaps;
}

double trimmed_mean(const std::vector<double>& values_descending, int q) {
  const int p = static_cast<int>(values_descending.size());
  if (q < 0 || q >= p) {
    throw config_error("trimmed_mean: q must lie in [0, p)");
  }
  const double sum = std::accumulate(values_descending.begin() + q,
                                     values_descending.end(), 0.0);
  return sum / static_cast<double>(p - q);
}

int estimate_q_known_variance(const Spectrum& spectrum, double sigma2,
                              const GapEstimatorSettings& settings) {
  check_spectrum(spectrum);
  if (!(sigma2 > 0.0)) {
    throw config_error("estimate_q_known_variance: sigma2 must be positive");
  }
  const int s_max = resolve_s_max(settings, spectrum.p);
  const double dn = resolve_dn(settings, spectrum);
  const int j = leading_gap_count(spectrum.values, sigma2, s_max, dn);
  return j <= s_max ? j : 0;
}

EstimateResult estimate_q_unknown_variance(const Spectrum& spectrum,
                                           const GapEstimatorSettings& settings) {
  check_spectrum(spectrum);
  const int s_max = resolve_s_max(settings, spectrum.p);

  EstimateResult result;
  result.threshold_used = resolve_dn(settings, spectrum);
  result.gaps = consecutive_gaps(spectrum, s_max);

  double sigma2 = trimmed_mean(spectrum.values, 0);
  int q = estimate_q_known_variance(spectrum, sigma2, settings);
  result.iterations.push_back({q, sigma2});

  for (int iter = 0; iter < s_max; ++iter) {
    const int q_prev = q;
    sigma2 = trimmed_mean(spectrum.values, q_prev);
    q = estimate_q_known_variance(spectrum, sigma2, settings);
    result.iterations.push_back({q, sigma2});
    if (q == q_prev) {
      result.converged = true;
      break;
    }
  }

  result.q_hat = q;
  result.sigma2_hat = sigma2;
  return result;
}

int kn_estimate(const Spectrum& spectrum, const KnSettings& settings) {
  return kn_estimate(spectrum, settings, Tw1Table::builtin());
}

int kn_estimate(const Spectrum& spectrum, const KnSettings& settings,
                const Tw1Table& table) {
  check_spectrum(spectrum);
  if (!(settings.gamma > 0.0 && settings.gamma < 1.0)) {
    throw config_error("kn_estimate: gamma must lie in (0, 1)");
  }
  const int p = spectrum.p;
  const int n = spectrum.n;
  const int bound = std::min(p, n) - 1;
  const int k_max = settings.k_max ? *settings.k_max : bound;
  if (k_max < 1 || k_max > bound) {
    throw config_error("kn_estimate: k_max must lie in [1, min(p, n) - 1]");
  }
  if (settings.sigma2 && !(*settings.sigma2 > 0.0)) {
    throw config_error("kn_estimate: sigma2 must be positive");
  }

  const double s_gamma = table.upper_quantile(settings.gamma);
  const double root_c = std::sqrt(static_cast<double>(p) / static_cast<double>(n));
  const double b = (1.0 + root_c) * (1.0 + root_c);
  const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);

  auto sequential_pass = [&](double sigma2) {
    int k = 1;
    while (k <= k_max) {
      const double threshold =
          sigma2 * (beta_finite(n, p - k) / n23 * s_gamma + b);
      if (!(spectrum.values[static_cast<std::size_t>(k) - 1] > threshold)) break;
      ++k;
    }
    return k - 1;
  };

  if (settings.sigma2) return sequential_pass(*settings.sigma2);

  double sigma2 = trimmed_mean(spectrum.values, 0);
  int q = sequential_pass(sigma2);
  for (int iter = 0; iter < k_max; ++iter) {
    const int q_prev = q;
    sigma2 = trimmed_mean(spectrum.values, q_prev);
    q = sequential_pass(sigma2);
    if (q == q_prev) break;
  }
  return q;
}

}  // namespace spikecount
