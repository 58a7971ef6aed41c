#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pdmp/engine.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/model.hpp"
#include "pdmp/test_function.hpp"

namespace pdmp {

// exp(continuous) * prod (1 + jump). Throws DegenerateJump for a jump <= -1.
double stieltjes_exp(double continuous, std::span<const double> jumps);

// Pieces of M^h_t along one skeleton.
struct MartingaleParts {
  double h_ratio = 1.0;         // h(X_t) / h(X_0)
  double continuous = 0.0;      // int dL(A^c h)_s / h(X_{s-})
  std::vector<double> jumps;    // DAh(X_s^-) / h(X_{s-}) at every atom of L(Ah)
  double value = 1.0;           // h_ratio / sexp(continuous, jumps)
};

// M^h_t = h(X_t)/h(X_0) * exp(-int dL(A^c h)/h(X_-)) * prod (1 + DAh(X^-)/h(X_-))^{-1}.
// Membership of h in M*(A) is enforced along the path: DomainViolation when h
// or a jump factor is not strictly positive.
class ExpMartingale {
 public:
  ExpMartingale(const PdmpModel& model, TestFunction h);

  MartingaleParts parts(const Skeleton& sk, double t) const;
  double operator()(const Skeleton& sk, double t) const { return parts(sk, t).value; }

  // Specialized forms, each evaluated by its own route:
  // quasi-Hunt: no jump product, continuous part as L(a) with a = XAh / h.
  double hunt_form(const Skeleton& sk, double t) const;
  // quasi-Ito: exp(-int_0^t XAh(X_s)/h(X_s) ds) integrated in path time.
  double ito_form(const Skeleton& sk, double t) const;
  // quasi-step: jump product only.
  double step_form(const Skeleton& sk, double t) const;

  const TestFunction& h() const noexcept { return h_; }
  const PathFunctional& generator() const noexcept { return ah_; }

 private:
  double positive_h(const State& y) const;

  PdmpModel model_;
  TestFunction h_;
  PathFunctional ah_;
};

double exp_martingale(const PdmpModel& model, const TestFunction& h, const Skeleton& sk, double t);

struct GoodFunctionOptions {
  std::uint64_t seed = 0x5EEDu;
  std::size_t grid_points = 32;
  // Probe points whose first coordinate falls outside this window are ignored.
  std::optional<std::pair<double, double>> window;
};

// Numerical evidence for the sufficient conditions of a good function; not a proof.
struct GoodFunctionReport {
  bool positivity_ok = true;
  double H = 0.0;        // sup |h|
  double H_minus = kInfinity;  // inf h
  double B_minus = 0.0;  // inf b over atom states, b = DAh / (h - Dh)
  double B_plus = 0.0;   // sup b
  std::size_t K = 0;     // max atoms of Ah on one probe trajectory
  double a_variation = 0.0;   // max int |XAh / h| along a probe segment
  double ac_variation = 0.0;  // max int |XAh| along a probe segment
  std::size_t probe_points = 0;
  bool c1_ok = false;
  bool c2_ok = false;
  std::string note;

  bool good() const noexcept { return positivity_ok && (c1_ok || c2_ok); }
};

GoodFunctionReport check_good_function(const PdmpModel& model, const TestFunction& h,
                                       const State& x0, double horizon, std::size_t n_probe,
                                       const GoodFunctionOptions& opts = {});

// Model under dP~/dP = M^h: same flow, lambda~ = lambda Qh / h at continuity
// points, atoms delta~ = delta Qh / (h(y-) + DAh(y)) at unchanged offsets, and
// Q~(y, dz) = h(z) Q(y, dz) / Qh(y).
PdmpModel tilt_model(const PdmpModel& model, const TestFunction& h);

enum class GeneratorForm { direct, ratio, bracket };

std::string_view to_string(GeneratorForm form) noexcept;

// A~f in the selected form.
//   direct:  Df + Lambda * int (f(z) - f) h(z) Q(dz) / (h(-) + DAh)
//   ratio:   (A(fh) - f(-) Ah) / (h(-) + DAh)
//   bracket: Af + <f,h>_A / (h(-) + DAh)
PathFunctional tilted_generator(const PdmpModel& model, const TestFunction& h,
                                const TestFunction& f, GeneratorForm form);

// M~^{1/h}_t under the tilted model along the same skeleton; equals 1 / M^h_t.
double reverse_martingale(const PdmpModel& tilted, const TestFunction& h, const Skeleton& sk,
                          double t);

}  // namespace pdmp
