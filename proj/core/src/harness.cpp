#include "spikecount/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "spikecount/errors.hpp"

namespace spikecount {

std::string estimator_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::gap_known: return "gap_known";
    case EstimatorKind::gap_unknown: return "gap_unknown";
    case EstimatorKind::kn: return "kn";
  }
  throw config_error("estimator_name: unknown estimator kind");
}

EstimatorKind estimator_from_name(const std::string& name) {
  if (name == "gap_known") return EstimatorKind::gap_known;
  if (name == "gap_unknown") return EstimatorKind::gap_unknown;
  if (name == "kn") return EstimatorKind::kn;
  throw config_error("unknown estimator '" + name +
                     "' (expected gap_known, gap_unknown or kn)");
}

void ExperimentConfig::validate() const {
  spikes.validate();
  if (model_id.empty()) throw config_error("ExperimentConfig: model_id is empty");
  if (sizes.empty()) throw config_error("ExperimentConfig: no (p, n) sizes");
  if (replications < 1) throw config_error("ExperimentConfig: replications must be >= 1");
  const int q0 = spikes.q0();
  for (const auto& [p, n] : sizes) {
    if (p < q0 + 2 || n < 2) {
      throw config_error("ExperimentConfig: size (p = " + std::to_string(p) +
                         ", n = " + std::to_string(n) + ") too small for q0 = " +
                         std::to_string(q0));
    }
  }
}

SummaryStats summarize(const std::vector<int>& q_hats,
                       const std::optional<std::vector<double>>& sigma2_hats,
                       int q0_true, double sigma2_true) {
  if (q_hats.empty()) throw config_error("summarize: empty estimate list");
  if (sigma2_hats && sigma2_hats->size() != q_hats.size()) {
    throw config_error("summarize: sigma2 list length mismatch");
  }

  SummaryStats stats;
  stats.q0_true = q0_true;
  stats.replications = static_cast<int>(q_hats.size());

  long long sum = 0;
  long long sq_err = 0;
  for (int q : q_hats) {
    stats.counts[q] += 1;
    sum += q;
    const long long d = q - q0_true;
    sq_err += d * d;
  }
  const double reps = static_cast<double>(stats.replications);
  stats.mean_q = static_cast<double>(sum) / reps;
  stats.mse_q = static_cast<double>(sq_err) / reps;
  const auto hit = stats.counts.find(q0_true);
  stats.freq_correct = hit == stats.counts.end()
                           ? 0.0
                           : static_cast<double>(hit->second) / reps;

  if (sigma2_hats) {
    double s = 0.0;
    double s_err = 0.0;
    for (double v : *sigma2_hats) {
      s += v;
      s_err += (v - sigma2_true) * (v - sigma2_true);
    }
    const double mean = s / reps;
    double spread = 0.0;
    for (double v : *sigma2_hats) spread += (v - mean) * (v - mean);
    stats.mean_sigma2 = mean;
    stats.mse_sigma2 = s_err / reps;
    stats.var_sigma2 = spread / reps;
  }
  return stats;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, count);

  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

// Per-cell driver shared by run_experiment and run_comparison. Fills the
// preallocated result slots by replication index, so aggregation order
// (and therefore every statistic) is independent of thread count.
template <typename Fn>
void run_cell(const ExperimentConfig& config, int p, int n, int threads, Fn&& per_rep) {
  parallel_for(config.replications, threads, [&](int r) {
    const std::string where = "cell (p = " + std::to_string(p) + ", n = " +
                              std::to_string(n) + ", rep = " + std::to_string(r) +
                              "): ";
    try {
      const Spectrum spectrum =
          sample_spectrum(config.spikes, AspectRatio(p, n),
                          {config.root_seed, static_cast<std::uint64_t>(r)},
                          config.noise_kind);
      per_rep(r, spectrum);
    } catch (const numeric_error& e) {
      throw numeric_error(where + e.what());
    } catch (const input_error& e) {
      throw input_error(where + e.what());
    } catch (const std::exception& e) {
      throw config_error(where + e.what());
    }
  });
}

}  // namespace

std::map<SizeKey, SummaryStats> run_experiment(const ExperimentConfig& config,
                                               int threads) {
  config.validate();
  const int q0 = config.spikes.q0();
  std::map<SizeKey, SummaryStats> out;

  for (const auto& [p, n] : config.sizes) {
    std::vector<int> q_hats(static_cast<std::size_t>(config.replications), 0);
    std::vector<double> sigma2_hats;
    const bool track_sigma2 = config.estimator == EstimatorKind::gap_unknown;
    if (track_sigma2) {
      sigma2_hats.assign(static_cast<std::size_t>(config.replications), 0.0);
    }

    switch (config.estimator) {
      case EstimatorKind::gap_known:
        run_cell(config, p, n, threads, [&](int r, const Spectrum& sp) {
          q_hats[static_cast<std::size_t>(r)] = estimate_q_known_variance(
              sp, config.spikes.sigma2, config.gap_settings);
        });
        break;
      case EstimatorKind::gap_unknown:
        run_cell(config, p, n, threads, [&](int r, const Spectrum& sp) {
          const EstimateResult res =
              estimate_q_unknown_variance(sp, config.gap_settings);
          q_hats[static_cast<std::size_t>(r)] = res.q_hat;
          sigma2_hats[static_cast<std::size_t>(r)] = res.sigma2_hat;
        });
        break;
      case EstimatorKind::kn:
        run_cell(config, p, n, threads, [&](int r, const Spectrum& sp) {
          q_hats[static_cast<std::size_t>(r)] = kn_estimate(sp, config.kn_settings);
        });
        break;
    }

    out.emplace(SizeKey{p, n},
                summarize(q_hats,
                          track_sigma2 ? std::optional(std::move(sigma2_hats))
                                       : std::nullopt,
                          q0, config.spikes.sigma2));
  }
  return out;
}

std::map<SizeKey, ComparisonStats> run_comparison(const ExperimentConfig& config,
                                                  int threads) {
  config.validate();
  const int q0 = config.spikes.q0();
  const GapEstimatorSettings& gap = config.gap_settings;
  const KnSettings& kn = config.kn_settings;

  std::map<SizeKey, ComparisonStats> out;
  for (const auto& [p, n] : config.sizes) {
    std::vector<int> q_gap(static_cast<std::size_t>(config.replications), 0);
    std::vector<double> s2_gap(static_cast<std::size_t>(config.replications), 0.0);
    std::vector<int> q_kn(static_cast<std::size_t>(config.replications), 0);

    run_cell(config, p, n, threads, [&](int r, const Spectrum& sp) {
      const EstimateResult res = estimate_q_unknown_variance(sp, gap);
      q_gap[static_cast<std::size_t>(r)] = res.q_hat;
      s2_gap[static_cast<std::size_t>(r)] = res.sigma2_hat;
      q_kn[static_cast<std::size_t>(r)] = kn_estimate(sp, kn);
    });

    ComparisonStats cell{
        summarize(q_gap, std::optional(std::move(s2_gap)), q0, config.spikes.sigma2),
        summarize(q_kn, std::nullopt, q0, config.spikes.sigma2)};
    out.emplace(SizeKey{p, n}, std::move(cell));
  }
  return out;
}

namespace {

const std::vector<std::pair<int, int>> kSizesC03 = {
    {30, 100}, {60, 200}, {120, 400}, {240, 800}};
const std::vector<std::pair<int, int>> kSizesC06 = {
    {60, 100}, {120, 200}, {240, 400}, {480, 800}};

ExperimentConfig gap_model(const std::string& id, const SpikeSpec& spikes,
                           const std::vector<std::pair<int, int>>& sizes) {
  ExperimentConfig cfg;
  cfg.model_id = id;
  cfg.spikes = spikes;
  cfg.sizes = sizes;
  cfg.estimator = EstimatorKind::gap_known;
  cfg.gap_settings.dn_scale = kModelStudyDnScale;
  return cfg;
}

// Factor-model comparison settings: spikes derived from the factor
// strengths alpha' via alpha = alpha'/sigma2 + 1.
ExperimentConfig kn_setting(const std::string& id,
                            const std::vector<double>& alpha_prime, double sigma2,
                            int p, int n, int replications) {
  ExperimentConfig cfg;
  cfg.model_id = id;
  std::vector<double> alphas;
  alphas.reserve(alpha_prime.size());
  for (double a : alpha_prime) alphas.push_back(factor_to_spike(a, sigma2));
  cfg.spikes = SpikeSpec::simple(alphas, sigma2);
  cfg.sizes = {{p, n}};
  cfg.replications = replications;
  cfg.estimator = EstimatorKind::kn;
  cfg.gap_settings.dn_scale = kComparisonStudyDnScale;
  return cfg;
}

ExperimentConfig moment_comparison(const std::string& id,
                                   const std::vector<double>& alphas, int p, int n) {
  ExperimentConfig cfg;
  cfg.model_id = id;
  cfg.spikes = SpikeSpec::simple(alphas, 1.0);
  cfg.sizes = {{p, n}};
  cfg.estimator = EstimatorKind::gap_unknown;
  cfg.gap_settings.dn_scale = kModelStudyDnScale;
  return cfg;
}

}  // namespace

std::vector<ExperimentConfig> builtin_configs() {
  const SpikeSpec model1 = SpikeSpec::simple({259.72, 17.97, 11.04, 7.88, 4.82});
  const SpikeSpec model2 = SpikeSpec::simple({7.0, 6.0, 5.0, 4.0});
  SpikeSpec model3;
  model3.sigma2 = 1.0;
  model3.spikes = {{259.7, 2}, {18.0, 1}, {11.1, 1}, {7.9, 1}, {4.8, 1}};
  model3.validate();
  SpikeSpec model4;
  model4.sigma2 = 1.0;
  model4.spikes = {{7.0, 1}, {6.0, 3}, {5.0, 1}, {4.0, 1}};
  model4.validate();

  std::vector<ExperimentConfig> configs;
  configs.push_back(gap_model("model1_c03", model1, kSizesC03));
  configs.push_back(gap_model("model1_c06", model1, kSizesC06));
  configs.push_back(gap_model("model2_c03", model2, kSizesC03));
  configs.push_back(gap_model("model2_c06", model2, kSizesC06));
  configs.push_back(gap_model("model3_c03", model3, kSizesC03));
  configs.push_back(gap_model("model3_c06", model3, kSizesC06));
  configs.push_back(gap_model("model4_c03", model4, kSizesC03));
  configs.push_back(gap_model("model4_c06", model4, kSizesC06));

  configs.push_back(kn_setting("A1", {200, 50}, 1.0, 64, 16, 1000));
  configs.push_back(kn_setting("A2", {200, 50}, 1.0, 64, 64, 1000));
  configs.push_back(kn_setting("A2prime", {200, 50}, 20.0, 64, 64, 1000));
  configs.push_back(kn_setting("B1", {200, 50, 10, 5}, 1.0, 64, 16, 1000));
  configs.push_back(kn_setting("B2", {200, 50, 10, 5}, 1.0, 64, 64, 1000));
  configs.push_back(kn_setting("B2prime", {200, 50, 10, 5}, 2.0, 64, 64, 1000));
  // p = 1024 suite defaults to 200 replications to stay desk-scale.
  configs.push_back(kn_setting("A1_p1024", {200, 50}, 1.0, 1024, 256, 200));
  configs.push_back(kn_setting("A2_p1024", {200, 50}, 1.0, 1024, 1024, 200));
  configs.push_back(kn_setting("B1_p1024", {200, 50, 10, 5}, 1.0, 1024, 256, 200));
  configs.push_back(kn_setting("B2_p1024", {200, 50, 10, 5}, 1.0, 1024, 1024, 200));

  configs.push_back(moment_comparison(
      "moments_30_100", {258.719, 16.973, 10.038, 6.877, 3.817}, 30, 100));
  configs.push_back(moment_comparison(
      "moments_90_100", {259.010, 18.101, 10.785, 7.276, 3.692}, 90, 100));
  configs.push_back(moment_comparison(
      "moments_210_300", {259.083, 18.418, 10.992, 7.377, 3.649}, 210, 300));
  configs.push_back(moment_comparison(
      "moments_250_500", {259.005, 18.453, 11.057, 7.448, 3.634}, 250, 500));

  for (const auto& cfg : configs) cfg.validate();
  return configs;
}

ExperimentConfig builtin_config(const std::string& model_id) {
  for (auto& cfg : builtin_configs()) {
    if (cfg.model_id == model_id) return cfg;
  }
  throw config_error("unknown builtin config '" + model_id + "'");
}

}  // namespace spikecount
