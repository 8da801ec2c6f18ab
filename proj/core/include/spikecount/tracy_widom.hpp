#pragma once

#include <string>
#include <vector>

namespace spikecount {

struct Tw1Knot {
  double x = 0.0;
  double f = 0.0;  // F1(x)
};

/// GOE (order-1) Tracy-Widom distribution function over a precomputed
/// knot table, interpolated with a monotone piecewise cubic. The table
/// is strictly increasing in both coordinates; cdf() clamps to 0/1
/// outside the knot range. Immutable after construction.
class Tw1Table {
 public:
  Tw1Table(std::vector<Tw1Knot> knots, std::string source_tag);

  // Table shipped with the library (generated offline from Painleve II).
  static const Tw1Table& builtin();

  // Two-column CSV (x, F) with a leading source_tag header line.
  static Tw1Table from_csv(const std::string& path);

  double cdf(double x) const;

  // s with F1(s) = 1 - gamma; throws std::domain_error for gamma
  // outside (0, 1).
  double upper_quantile(double gamma) const;

  const std::vector<Tw1Knot>& knots() const { return knots_; }
  const std::string& source_tag() const { return source_tag_; }

 private:
  std::vector<Tw1Knot> knots_;
  std::string source_tag_;
  std::vector<double> slope_fx_;  // dF/dx at knots
  std::vector<double> slope_xf_;  // dx/dF at knots (inverse interpolant)
};

// Conveniences over the builtin table.
double tw1_cdf(double x);
double tw1_upper_quantile(double gamma);

}  // namespace spikecount
