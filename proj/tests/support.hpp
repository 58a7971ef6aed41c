#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

namespace testing_support {

inline double rel_diff(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Asymptotic Kolmogorov p-value of sqrt(n) D_n with the Stephens correction.
inline double ks_pvalue(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double lam = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
  return std::clamp(p, 0.0, 1.0);
}

// Chi-square goodness of fit of integer counts against a Poisson law, pooling
// the upper tail so every expected cell holds at least 5.
inline double poisson_chi2_pvalue(const std::vector<int>& counts, double mean) {
  const boost::math::poisson_distribution<> law(mean);
  const double n = static_cast<double>(counts.size());
  int top = 0;
  while (n * boost::math::cdf(boost::math::complement(law, top)) >= 5.0) ++top;
  std::vector<double> observed(static_cast<std::size_t>(top) + 1, 0.0);
  for (int c : counts) observed[static_cast<std::size_t>(std::min(c, top))] += 1.0;
  double stat = 0.0;
  for (int k = 0; k <= top; ++k) {
    const double p = k < top ? boost::math::pdf(law, k) : boost::math::cdf(boost::math::complement(law, k - 1));
    const double e = n * p;
    stat += (observed[static_cast<std::size_t>(k)] - e) * (observed[static_cast<std::size_t>(k)] - e) / e;
  }
  const boost::math::chi_squared_distribution<> chi(top);
  return boost::math::cdf(boost::math::complement(chi, stat));
}

}  // namespace testing_support
