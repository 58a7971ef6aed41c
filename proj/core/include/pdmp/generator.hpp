#pragma once

#include <string>

#include "pdmp/engine.hpp"
#include "pdmp/model.hpp"
#include "pdmp/path_functional.hpp"
#include "pdmp/test_function.hpp"

namespace pdmp {

// Measure-valued generator Af as an additive functional of the flow:
//   density  XAf(y) = Xf(y) + lambda(y) (Qf(y) - f(y))
//   atoms    DAf(y) = Df(y) + DLambda(y) (Qf(y) - f(y))
// with atom offsets the union of the path jumps of f and the hazard atoms.
PathFunctional generator_apply(const PdmpModel& model, const TestFunction& f);

// Double integral int_(0,T] int |f(z) - f(phi_x(s))| Q(phi_x(s), dz) Lambda(x, ds).
struct DomainReport {
  double value = 0.0;
  bool finite = false;
  std::string message;
};

DomainReport check_domain(const PdmpModel& model, const TestFunction& f, const State& x,
                          double horizon);

// U^f_t = f(X_t) - L(Af)_t.
double dynkin_process(const PdmpModel& model, const TestFunction& f, const Skeleton& sk, double t);

// Reusable form of dynkin_process with Af built once.
class DynkinProcess {
 public:
  DynkinProcess(const PdmpModel& model, TestFunction f);
  double operator()(const Skeleton& sk, double t) const;

 private:
  PdmpModel model_;
  TestFunction f_;
  PathFunctional af_;
};

// sum over jumps in (0, t] of |f(X_tau) - f(X_tau^-)|; the quantity whose
// expectation must be finite for U^f to be a true martingale.
double jump_variation(const TestFunction& f, const Skeleton& sk, double t);

// <f,h>_A = A(fh) - f(-) Ah - h(-) Af - d[Af, Ah].
PathFunctional carre_du_champ(const PdmpModel& model, const TestFunction& f,
                              const TestFunction& h);

}  // namespace pdmp
