#include "pdmp/path_functional.hpp"

#include <algorithm>
#include <cmath>

namespace pdmp {

PathFunctional PathFunctional::constant_rate(double c) {
  PathFunctional a;
  a.density = [c](const State&) { return c; };
  a.continuous_cumulative = [c](const State&, double t) { return c * t; };
  return a;
}

std::vector<Atom> af_atoms(const PathFunctional& a, const State& x, double lo, double hi) {
  if (!a.atoms || !(hi > lo)) return {};
  return a.atoms(x, lo, hi);
}

double integrate_along_flow(const std::function<double(const State&)>& g, const Flow& flow,
                            const State& x, double lo, double hi, const QuadratureOptions& opts,
                            std::span<const double> breakpoints) {
  if (!(hi > lo)) return 0.0;
  auto along = [&](double s) { return g(flow.raw(x, s)); };
  return integrate_adaptive(along, lo, hi, opts, breakpoints).value;
}

double integrate_along_flow(const std::function<double(const State&)>& g, const Flow& flow,
                            const State& x, double t, const QuadratureOptions& opts,
                            std::span<const double> breakpoints) {
  return integrate_along_flow(g, flow, x, 0.0, t, opts, breakpoints);
}

double af_continuous(const PathFunctional& a, const Flow& flow, const State& x, double lo,
                     double hi, const QuadratureOptions& opts) {
  if (!(hi > lo)) return 0.0;
  if (a.continuous_cumulative)
    return a.continuous_cumulative(x, hi) - (lo > 0.0 ? a.continuous_cumulative(x, lo) : 0.0);
  if (!a.density) return 0.0;
  std::vector<double> cuts;
  for (const Atom& at : af_atoms(a, x, lo, hi)) cuts.push_back(at.offset);
  return integrate_along_flow(a.density, flow, x, lo, hi, opts, cuts);
}

double af_eval(const PathFunctional& a, const Flow& flow, const State& x, double t,
               const QuadratureOptions& opts) {
  if (t == 0.0) return 0.0;
  double v = af_continuous(a, flow, x, 0.0, t, opts);
  for (const Atom& at : af_atoms(a, x, 0.0, t)) v += at.value;
  return v;
}

PathFunctional af_linear(const PathFunctional& a, const PathFunctional& b, double alpha,
                         double beta) {
  PathFunctional out;
  if (a.density || b.density) {
    out.density = [da = a.density, db = b.density, alpha, beta](const State& y) {
      double v = 0.0;
      if (da) v += alpha * da(y);
      if (db) v += beta * db(y);
      return v;
    };
  }
  const bool a_closed = a.continuous_cumulative || !a.density;
  const bool b_closed = b.continuous_cumulative || !b.density;
  if (a_closed && b_closed) {
    out.continuous_cumulative = [ca = a.continuous_cumulative, cb = b.continuous_cumulative,
                                 alpha, beta](const State& x, double t) {
      double v = 0.0;
      if (ca) v += alpha * ca(x, t);
      if (cb) v += beta * cb(x, t);
      return v;
    };
  }
  if (a.atoms || b.atoms) {
    out.atoms = [aa = a.atoms, ab = b.atoms, alpha, beta](const State& x, double lo, double hi) {
      std::vector<Atom> ja = aa ? aa(x, lo, hi) : std::vector<Atom>{};
      std::vector<Atom> jb = ab ? ab(x, lo, hi) : std::vector<Atom>{};
      std::vector<Atom> merged;
      for (const MergedAtom& m : merge_atoms({ja, jb}))
        merged.push_back({m.offset, alpha * m.values[0] + beta * m.values[1]});
      return merged;
    };
  }
  return out;
}

bool same_offset(double a, double b) noexcept {
  return std::abs(a - b) <= kOffsetMatchTol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<MergedAtom> merge_atoms(std::initializer_list<std::span<const Atom>> schedules) {
  const std::size_t k = schedules.size();
  std::vector<std::pair<Atom, std::size_t>> all;
  std::size_t idx = 0;
  for (std::span<const Atom> s : schedules) {
    for (const Atom& a : s) all.emplace_back(a, idx);
    ++idx;
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const auto& l, const auto& r) { return l.first.offset < r.first.offset; });
  std::vector<MergedAtom> out;
  for (const auto& [atom, src] : all) {
    if (out.empty() || !same_offset(out.back().offset, atom.offset)) {
      MergedAtom m{atom.offset, {}};
      m.values.assign(k, 0.0);
      out.push_back(std::move(m));
    }
    out.back().values[src] += atom.value;
  }
  return out;
}

}  // namespace pdmp
