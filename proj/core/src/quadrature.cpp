#include "pdmp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pdmp/errors.hpp"

namespace pdmp {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr std::size_t kEvalsPerSegment = 15;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment evaluate(const std::function<double(double)>& g, double a, double b) {
  double err = 0.0;
  const double v = Rule::integrate(g, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& opts,
                                    std::span<const double> breakpoints) {
  QuadratureResult out;
  if (!(b > a)) return out;

  std::vector<double> edges{a};
  for (double p : breakpoints)
    if (p > a && p < b) edges.push_back(p);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Segment s = evaluate(g, edges[i], edges[i + 1]);
    out.evaluations += kEvalsPerSegment;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  while (total_err > opts.abs_tol) {
    if (out.evaluations + 2 * kEvalsPerSegment > opts.max_evaluations) {
      std::ostringstream msg;
      msg << "error estimate " << total_err << " above tolerance " << opts.abs_tol << " after "
          << out.evaluations << " evaluations on [" << a << ", " << b << "]";
      throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Segment cannot be split further in floating point; accept its estimate.
      total_err -= worst.error;
      worst.error = 0.0;
      heap.push(worst);
      continue;
    }
    Segment left = evaluate(g, worst.a, mid);
    Segment right = evaluate(g, mid, worst.b);
    out.evaluations += 2 * kEvalsPerSegment;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to avoid drift from incremental updates.
  double sum = 0.0;
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& g, double a,
                                         const QuadratureOptions& opts) {
  auto mapped = [&](double s) {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double z = a + s / one_minus;
    const double v = g(z);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  return integrate_adaptive(mapped, 0.0, 1.0, opts);
}

}  // namespace pdmp
