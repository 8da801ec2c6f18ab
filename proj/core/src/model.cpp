#include "spikecount/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "spikecount/errors.hpp"

namespace spikecount {

int SpikeSpec::q0() const {
  int total = 0;
  for (const auto& s : spikes) total += s.multiplicity;
  return total;
}

std::vector<double> SpikeSpec::expanded_alphas() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(q0()));
  for (const auto& s : spikes) {
    for (int i = 0; i < s.multiplicity; ++i) out.push_back(s.alpha);
  }
  return out;
}

void SpikeSpec::validate() const {
  if (!(sigma2 > 0.0)) {
    throw config_error("SpikeSpec: sigma2 must be positive");
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& s : spikes) {
    if (!(s.alpha > 1.0)) {
      throw config_error("SpikeSpec: spike alpha must exceed 1, got " +
                         std::to_string(s.alpha));
    }
    if (s.multiplicity < 1) {
      throw config_error("SpikeSpec: multiplicities must be positive");
    }
    if (!(s.alpha < prev)) {
      throw config_error("SpikeSpec: alphas must be strictly decreasing");
    }
    prev = s.alpha;
  }
}

SpikeSpec SpikeSpec::simple(const std::vector<double>& alphas, double sigma2) {
  SpikeSpec spec;
  spec.sigma2 = sigma2;
  spec.spikes.reserve(alphas.size());
  for (double a : alphas) spec.spikes.push_back({a, 1});
  spec.validate();
  return spec;
}

SpikeSpec SpikeSpec::null_model(double sigma2) {
  SpikeSpec spec;
  spec.sigma2 = sigma2;
  spec.validate();
  return spec;
}

AspectRatio::AspectRatio(int p_, int n_) : p(p_), n(n_) {
  if (p < 1 || n < 1) throw config_error("AspectRatio: p and n must be positive");
  c = static_cast<double>(p) / static_cast<double>(n);
}

double phi(double alpha, double c) {
  if (alpha == 1.0) throw std::domain_error("phi: pole at alpha = 1");
  return alpha + c * alpha / (alpha - 1.0);
}

MpLaw bulk_edges(double c, double sigma2) {
  if (!(c > 0.0)) throw std::invalid_argument("bulk_edges: c must be positive");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("bulk_edges: sigma2 must be positive");
  const double r = std::sqrt(c);
  return MpLaw{c, sigma2, sigma2 * (1.0 - r) * (1.0 - r),
               sigma2 * (1.0 + r) * (1.0 + r)};
}

double mp_density(double x, const MpLaw& law) {
  if (x <= law.b_minus || x >= law.b_plus) return 0.0;
  if (x <= 0.0) return 0.0;
  const double num = std::sqrt((law.b_plus - x) * (x - law.b_minus));
  return num / (2.0 * M_PI * x * law.c * law.sigma2);
}

double beta_limit(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("beta_limit: c must be positive");
  return (1.0 + std::sqrt(c)) * std::cbrt(1.0 + std::sqrt(1.0 / c));
}

double beta_finite(int n, int p) {
  if (n < 1 || p < 1) throw std::invalid_argument("beta_finite: n, p must be >= 1");
  const double pn = static_cast<double>(p) / static_cast<double>(n);
  const double np = static_cast<double>(n) / static_cast<double>(p);
  return (1.0 + std::sqrt(pn)) * std::cbrt(1.0 + std::sqrt(np));
}

double threshold_dn(int n, int p) {
  if (n < 3) throw std::domain_error("threshold_dn: requires n >= 3");
  const double a_n = 4.0 * std::sqrt(2.0 * std::log(std::log(static_cast<double>(n))));
  const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
  return a_n / n23 * beta_finite(n, p);
}

double factor_to_spike(double alpha_prime, double sigma2) {
  if (!(sigma2 > 0.0)) throw std::invalid_argument("factor_to_spike: sigma2 must be positive");
  return alpha_prime / sigma2 + 1.0;
}

}  // namespace spikecount
