#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ctrlgeo/expr.hpp"

namespace ctrlgeo::symexpr {

/// Box + sample budget + seed used by every sampled-numeric decision.
/// Per-variable intervals override the default box; `avoid` expressions
/// mark singular loci that sample points must stay away from.
struct SampleDomain {
  std::pair<double, double> default_box{0.1, 1.1};
  std::map<std::string, std::pair<double, double>> box;
  int n_samples = 7;
  std::uint64_t seed = 42;
  std::vector<Expr> avoid;
  double avoid_tol = 0.05;

  std::pair<double, double> interval(const std::string& v) const {
    auto it = box.find(v);
    return it == box.end() ? default_box : it->second;
  }
};

/// Deterministic sample points for the given variables (sorted by name
/// internally, so the result depends only on the domain and the set).
std::vector<Assignment> sample_points(const SampleDomain& d,
                                      const std::vector<std::string>& vars);

/// Fresh points from an independent stream; used when a singular
/// evaluation forces a resample.
Assignment resample_point(const SampleDomain& d,
                          const std::vector<std::string>& vars,
                          std::uint64_t salt);

/// Numeric zero oracle: simplifies first (a structural zero short
/// circuits), then requires |value| < 1e-9 * (1 + max|subterm|) at every
/// sample point.  Singular evaluations are retried on fresh points, at
/// most three times each.
bool is_zero(const Expr& e, const SampleDomain& d);

/// Zero test for an already-simplified expression on pre-drawn points.
bool is_zero_at(const Expr& e, const SampleDomain& d,
                const std::vector<Assignment>& pts);

}  // namespace ctrlgeo::symexpr
