#include "spikecount/tracy_widom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "spikecount/errors.hpp"

namespace spikecount {

namespace {

// Fritsch-Carlson slopes for a monotone cubic Hermite interpolant of the
// strictly increasing data (t, y). Matches the usual pchip construction.
std::vector<double> pchip_slopes(const std::vector<double>& t,
                                 const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> h(n - 1), delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = t[i + 1] - t[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] <= 0.0 || delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // One-sided three-point endpoint formula, clamped for monotonicity.
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

double hermite_eval(double t0, double t1, double y0, double y1, double d0,
                    double d1, double t) {
  const double h = t1 - t0;
  const double s = (t - t0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
}

}  // namespace

Tw1Table::Tw1Table(std::vector<Tw1Knot> knots, std::string source_tag)
    : knots_(std::move(knots)), source_tag_(std::move(source_tag)) {
  if (knots_.size() < 4) {
    throw input_error("Tw1Table: need at least 4 knots");
  }
  std::vector<double> xs(knots_.size()), fs(knots_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    xs[i] = knots_[i].x;
    fs[i] = knots_[i].f;
    if (fs[i] < 0.0 || fs[i] > 1.0) {
      throw input_error("Tw1Table: F values must lie in [0, 1]");
    }
    if (i > 0 && (xs[i] <= xs[i - 1] || fs[i] <= fs[i - 1])) {
      throw input_error("Tw1Table: knots must be strictly increasing in x and F");
    }
  }
  slope_fx_ = pchip_slopes(xs, fs);
  slope_xf_ = pchip_slopes(fs, xs);
}

Tw1Table Tw1Table::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("Tw1Table: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.find("source_tag=") == std::string::npos) {
    throw input_error("Tw1Table: missing source_tag header in '" + path + "'");
  }
  const std::string tag = line;
  std::vector<Tw1Knot> knots;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    const double x = std::strtod(s, &end);
    if (end == s || *end != ',') {
      throw input_error("Tw1Table: parse error at " + path + ":" +
                        std::to_string(lineno));
    }
    const char* s2 = end + 1;
    const double f = std::strtod(s2, &end);
    if (end == s2) {
      throw input_error("Tw1Table: parse error at " + path + ":" +
                        std::to_string(lineno));
    }
    knots.push_back({x, f});
  }
  return Tw1Table(std::move(knots), tag);
}

const Tw1Table& Tw1Table::builtin() {
  static const Tw1Table table = [] {
    static const Tw1Knot data[] = {
#include "tw1_table_data.inc"
    };
    return Tw1Table(std::vector<Tw1Knot>(std::begin(data), std::end(data)),
                    "builtin");
  }();
  return table;
}

double Tw1Table::cdf(double x) const {
  if (x <= knots_.front().x) return 0.0;
  if (x >= knots_.back().x) return 1.0;
  auto cmp = [](const Tw1Knot& k, double v) { return k.x < v; };
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x, cmp);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (i == 0) i = 1;
  const double v = hermite_eval(knots_[i - 1].x, knots_[i].x, knots_[i - 1].f,
                                knots_[i].f, slope_fx_[i - 1], slope_fx_[i], x);
  return std::clamp(v, 0.0, 1.0);
}

double Tw1Table::upper_quantile(double gamma) const {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::domain_error("tw1_upper_quantile: gamma must lie in (0, 1)");
  }
  const double target = 1.0 - gamma;
  if (target <= knots_.front().f) return knots_.front().x;
  if (target >= knots_.back().f) return knots_.back().x;
  auto cmp = [](const Tw1Knot& k, double v) { return k.f < v; };
  auto it = std::lower_bound(knots_.begin(), knots_.end(), target, cmp);
  std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  if (i == 0) i = 1;
  return hermite_eval(knots_[i - 1].f, knots_[i].f, knots_[i - 1].x,
                      knots_[i].x, slope_xf_[i - 1], slope_xf_[i], target);
}

double tw1_cdf(double x) { return Tw1Table::builtin().cdf(x); }

double tw1_upper_quantile(double gamma) {
  return Tw1Table::builtin().upper_quantile(gamma);
}

}  // namespace spikecount
