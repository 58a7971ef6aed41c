#include "pdmp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

PathFunctional generator_apply(const PdmpModel& model, const TestFunction& f) {
  PathFunctional af;
  af.density = [flow = model.flow, rate = model.hazard.measure.density, kernel = model.kernel,
                f](const State& y) {
    double v = path_derivative(f, flow, y);
    const double lam = rate ? rate(y) : 0.0;
    if (lam != 0.0) v += lam * (kernel->integrate(y, f) - f.value(y));
    return v;
  };
  if (model.hazard.measure.atoms || f.path_jumps) {
    af.atoms = [flow = model.flow, hazard_atoms = model.hazard.measure.atoms,
                kernel = model.kernel, f](const State& x, double lo, double hi) {
      std::vector<Atom> jf = path_jumps(f, x, lo, hi);
      std::vector<Atom> jl = hazard_atoms ? hazard_atoms(x, lo, hi) : std::vector<Atom>{};
      std::vector<Atom> out;
      for (const MergedAtom& m : merge_atoms({jf, jl})) {
        double v = m.values[0];
        const double delta = m.values[1];
        if (delta != 0.0) {
          const State y = flow_eval(flow, x, m.offset);
          v += delta * (kernel->integrate(y, f) - f.value(y));
        }
        out.push_back({m.offset, v});
      }
      return out;
    };
  }
  return af;
}

DomainReport check_domain(const PdmpModel& model, const TestFunction& f, const State& x,
                          double horizon) {
  DomainReport report;
  auto spread = [&](const State& y) {
    const double fy = f.value(y);
    return model.kernel->integrate(
        y, TestFunction::plain("|f-f(y)|", [&f, fy](const State& z) { return std::abs(f.value(z) - fy); }));
  };
  try {
    const double end = std::min(horizon, model.flow.horizon(x));
    const auto& rate = model.hazard.measure.density;
    std::vector<Atom> atoms = af_atoms(model.hazard.measure, x, 0.0, end);
    std::vector<double> cuts;
    for (const Atom& a : atoms) cuts.push_back(a.offset);
    double v = 0.0;
    if (rate) {
      v += integrate_along_flow(
          [&](const State& y) {
            const double lam = rate(y);
            return lam == 0.0 ? 0.0 : lam * spread(y);
          },
          model.flow, x, end, model.quadrature, cuts);
    }
    for (const Atom& a : atoms) v += a.value * spread(flow_eval(model.flow, x, a.offset));
    report.value = v;
    report.finite = std::isfinite(v);
    if (!report.finite) report.message = "integral evaluated to a non-finite value";
  } catch (const Error& e) {
    report.value = kInfinity;
    report.finite = false;
    report.message = e.what();
  }
  return report;
}

DynkinProcess::DynkinProcess(const PdmpModel& model, TestFunction f)
    : model_(model), f_(std::move(f)), af_(generator_apply(model_, f_)) {}

double DynkinProcess::operator()(const Skeleton& sk, double t) const {
  return f_.value(path_state(sk, model_, t)) - eval_L(af_, sk, model_, t);
}

double dynkin_process(const PdmpModel& model, const TestFunction& f, const Skeleton& sk, double t) {
  return DynkinProcess(model, f)(sk, t);
}

double jump_variation(const TestFunction& f, const Skeleton& sk, double t) {
  double v = 0.0;
  for (const JumpEvent& e : sk.events) {
    if (e.time > t) break;
    if (e.post.is_cemetery()) break;
    v += std::abs(f.value(e.post) - f.value(e.pre));
  }
  return v;
}

PathFunctional carre_du_champ(const PdmpModel& model, const TestFunction& f,
                              const TestFunction& h) {
  const TestFunction fh = product(f, h, model.flow);
  const PathFunctional a_fh = generator_apply(model, fh);
  const PathFunctional a_f = generator_apply(model, f);
  const PathFunctional a_h = generator_apply(model, h);

  PathFunctional out;
  out.density = [a_fh, a_f, a_h, f, h](const State& y) {
    return a_fh.density(y) - f.value(y) * a_h.density(y) - h.value(y) * a_f.density(y);
  };
  if (a_fh.atoms || a_f.atoms || a_h.atoms) {
    out.atoms = [flow = model.flow, a_fh, a_f, a_h, f, h](const State& x, double lo, double hi) {
      const std::vector<Atom> j_fh = af_atoms(a_fh, x, lo, hi);
      const std::vector<Atom> j_f = af_atoms(a_f, x, lo, hi);
      const std::vector<Atom> j_h = af_atoms(a_h, x, lo, hi);
      const std::vector<Atom> d_f = path_jumps(f, x, lo, hi);
      const std::vector<Atom> d_h = path_jumps(h, x, lo, hi);
      std::vector<Atom> result;
      for (const MergedAtom& m : merge_atoms({j_fh, j_f, j_h, d_f, d_h})) {
        const State y = flow_eval(flow, x, m.offset);
        const double f_left = f.value(y) - m.values[3];
        const double h_left = h.value(y) - m.values[4];
        const double af = m.values[1];
        const double ah = m.values[2];
        result.push_back({m.offset, m.values[0] - f_left * ah - h_left * af - af * ah});
      }
      return result;
    };
  }
  return out;
}

}  // namespace pdmp
