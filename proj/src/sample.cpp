#include "ctrlgeo/sample.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ctrlgeo::symexpr {

namespace {

bool point_ok(const SampleDomain& d, const Assignment& a) {
  for (const auto& g : d.avoid) {
    try {
      if (std::fabs(eval(g, a)) < d.avoid_tol) return false;
    } catch (const EvalError&) {
      return false;
    }
  }
  return true;
}

Assignment draw(const SampleDomain& d, const std::vector<std::string>& vars,
                std::mt19937_64& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    Assignment a;
    for (const auto& v : vars) {
      auto [lo, hi] = d.interval(v);
      std::uniform_real_distribution<double> u(lo, hi);
      a[v] = u(rng);
    }
    if (point_ok(d, a)) return a;
  }
  throw EvalError("sample domain rejects every point (singular loci too tight)");
}

}  // namespace

std::vector<Assignment> sample_points(const SampleDomain& d,
                                      const std::vector<std::string>& vars) {
  std::vector<std::string> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  std::mt19937_64 rng(d.seed);
  std::vector<Assignment> pts;
  pts.reserve(d.n_samples);
  for (int i = 0; i < d.n_samples; ++i) pts.push_back(draw(d, sorted, rng));
  return pts;
}

Assignment resample_point(const SampleDomain& d,
                          const std::vector<std::string>& vars,
                          std::uint64_t salt) {
  std::vector<std::string> sorted = vars;
  std::sort(sorted.begin(), sorted.end());
  std::mt19937_64 rng(d.seed ^ (0x5851f42d4c957f2dULL * (salt + 1)));
  return draw(d, sorted, rng);
}

bool is_zero_at(const Expr& e, const SampleDomain& d,
                const std::vector<Assignment>& pts) {
  if (e.is_const()) return e.value().is_zero();
  std::vector<std::string> vars(free_vars(e).begin(), free_vars(e).end());
  std::uint64_t salt = e.hash();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Assignment a = pts[i];
    for (int attempt = 0;; ++attempt) {
      try {
        ScaledValue sv = eval_scaled(e, a);
        if (std::fabs(sv.value) >= 1e-9 * (1.0 + sv.scale)) return false;
        break;
      } catch (const EvalError&) {
        if (attempt >= 3) return false;  // persistent singularity: not provably zero
        a = resample_point(d, vars, salt + i * 31 + attempt);
      }
    }
  }
  return true;
}

bool is_zero(const Expr& e, const SampleDomain& d) {
  Expr s = simplify(e);
  if (s.is_const()) return s.value().is_zero();
  std::vector<std::string> vars(free_vars(s).begin(), free_vars(s).end());
  return is_zero_at(s, d, sample_points(d, vars));
}

}  // namespace ctrlgeo::symexpr
