#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pdmp/flow.hpp"
#include "pdmp/hazard.hpp"
#include "pdmp/kernel.hpp"
#include "pdmp/quadrature.hpp"

namespace pdmp {

struct StateDescriptor {
  std::size_t dimension = 0;
  std::vector<int> labels;  // empty: no discrete component
};

// Characteristic triple (phi, Lambda, Q) plus simulation guards.
struct PdmpModel {
  std::string name;
  Flow flow;
  HazardLaw hazard;
  KernelPtr kernel;
  std::size_t max_jumps = 1'000'000;
  StateDescriptor descriptor;
  QuadratureOptions quadrature;
};

// Kernel entry points with the model's error contract.
State kernel_sample(const JumpKernel& q, const State& y, UniformSource& u);
double kernel_integrate(const JumpKernel& q, const State& y, const TestFunction& f);

}  // namespace pdmp
