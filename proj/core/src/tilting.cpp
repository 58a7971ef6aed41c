#include "pdmp/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pdmp/errors.hpp"

namespace pdmp {

double stieltjes_exp(double continuous, std::span<const double> jumps) {
  double v = std::exp(continuous);
  for (double j : jumps) {
    if (!(j > -1.0)) {
      std::ostringstream msg;
      msg << "jump " << j << " <= -1";
      throw Error(ErrorCode::DegenerateJump, msg.str());
    }
    v *= 1.0 + j;
  }
  return v;
}

// ------------------------------------------------------------- M^h

ExpMartingale::ExpMartingale(const PdmpModel& model, TestFunction h)
    : model_(model), h_(std::move(h)), ah_(generator_apply(model_, h_)) {}

double ExpMartingale::positive_h(const State& y) const {
  const double v = h_.value(y);
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << h_.name << " = " << v << " at " << y;
    throw Error(ErrorCode::DomainViolation, msg.str());
  }
  return v;
}

MartingaleParts ExpMartingale::parts(const Skeleton& sk, double t) const {
  MartingaleParts p;
  p.h_ratio = positive_h(path_state(sk, model_, t)) / positive_h(sk.x0);
  auto rate = [this](const State& y) { return ah_.density(y) / positive_h(y); };
  for (const PathSegment& seg : path_segments(sk, t)) {
    if (!(seg.length > 0.0)) continue;
    const State& x = *seg.start;
    const std::vector<Atom> atoms = af_atoms(ah_, x, 0.0, seg.length);
    const std::vector<Atom> dh = path_jumps(h_, x, 0.0, seg.length);
    std::vector<double> cuts;
    for (const Atom& a : atoms) cuts.push_back(a.offset);
    p.continuous += integrate_along_flow(rate, model_.flow, x, seg.length, model_.quadrature, cuts);
    for (const MergedAtom& m : merge_atoms({atoms, dh})) {
      const State y = flow_eval(model_.flow, x, m.offset);
      const double h_left = h_.value(y) - m.values[1];
      if (!(h_left > 0.0)) {
        std::ostringstream msg;
        msg << "h(X_-) = " << h_left << " at " << y;
        throw Error(ErrorCode::DomainViolation, msg.str());
      }
      const double j = m.values[0] / h_left;
      if (!(1.0 + j > 0.0)) {
        std::ostringstream msg;
        msg << "jump factor 1 + " << j << " not positive at " << y;
        throw Error(ErrorCode::DomainViolation, msg.str());
      }
      p.jumps.push_back(j);
    }
  }
  p.value = p.h_ratio / stieltjes_exp(p.continuous, p.jumps);
  return p;
}

double ExpMartingale::hunt_form(const Skeleton& sk, double t) const {
  const double ratio = positive_h(path_state(sk, model_, t)) / positive_h(sk.x0);
  PathFunctional a;
  a.density = [this](const State& y) { return ah_.density(y) / positive_h(y); };
  return ratio * std::exp(-eval_L(a, sk, model_, t));
}

double ExpMartingale::ito_form(const Skeleton& sk, double t) const {
  const double ratio = positive_h(path_state(sk, model_, t)) / positive_h(sk.x0);
  std::vector<double> cuts;
  for (const JumpEvent& e : sk.events)
    if (e.time < t) cuts.push_back(e.time);
  auto g = [&](double s) {
    const State y = path_state(sk, model_, s);
    return ah_.density(y) / positive_h(y);
  };
  const double integral = integrate_adaptive(g, 0.0, t, model_.quadrature, cuts).value;
  return ratio * std::exp(-integral);
}

double ExpMartingale::step_form(const Skeleton& sk, double t) const {
  const MartingaleParts p = parts(sk, t);
  return p.h_ratio / stieltjes_exp(0.0, p.jumps);
}

double exp_martingale(const PdmpModel& model, const TestFunction& h, const Skeleton& sk, double t) {
  return ExpMartingale(model, h)(sk, t);
}

// ------------------------------------------------------- good functions

GoodFunctionReport check_good_function(const PdmpModel& model, const TestFunction& h,
                                       const State& x0, double horizon, std::size_t n_probe,
                                       const GoodFunctionOptions& opts) {
  GoodFunctionReport r;
  const PathFunctional ah = generator_apply(model, h);
  auto inside = [&](const State& y) {
    if (!opts.window || y.coords.empty()) return true;
    return y.x() >= opts.window->first && y.x() <= opts.window->second;
  };
  bool finite_variation = true;
  bool finite_ac_variation = true;

  auto sweep = [&](const State& x, double length) {
    const double end = std::min(length, model.flow.horizon(x));
    for (std::size_t k = 0; k <= opts.grid_points; ++k) {
      const double s = end * static_cast<double>(k) / static_cast<double>(opts.grid_points);
      const State y = flow_eval(model.flow, x, s);
      if (!inside(y)) continue;
      const double v = h.value(y);
      ++r.probe_points;
      if (!(v > 0.0)) r.positivity_ok = false;
      r.H = std::max(r.H, std::abs(v));
      r.H_minus = std::min(r.H_minus, v);
    }
    if (!(end > 0.0)) return;
    const std::vector<Atom> atoms = af_atoms(ah, x, 0.0, end);
    std::size_t counted = 0;
    for (const Atom& a : atoms) {
      const State y = flow_eval(model.flow, x, a.offset);
      if (!inside(y)) continue;
      ++counted;
      const double h_left = h.value(y) - path_jump_at(h, x, a.offset);
      const double b = a.value / h_left;
      if (!std::isfinite(b)) {
        r.B_plus = kInfinity;
        continue;
      }
      r.B_minus = std::min(r.B_minus, b);
      r.B_plus = std::max(r.B_plus, b);
    }
    r.K = std::max(r.K, counted);
    std::vector<double> cuts;
    for (const Atom& a : atoms) cuts.push_back(a.offset);
    try {
      const double var = integrate_along_flow(
          [&](const State& y) {
            const double v = h.value(y);
            return inside(y) ? std::abs(ah.density(y) / v) : 0.0;
          },
          model.flow, x, end, model.quadrature, cuts);
      r.a_variation = std::max(r.a_variation, var);
      if (!std::isfinite(var)) finite_variation = false;
      const double acv = integrate_along_flow(
          [&](const State& y) { return inside(y) ? std::abs(ah.density(y)) : 0.0; }, model.flow,
          x, end, model.quadrature, cuts);
      r.ac_variation = std::max(r.ac_variation, acv);
      if (!std::isfinite(acv)) finite_ac_variation = false;
    } catch (const Error&) {
      finite_variation = false;
      finite_ac_variation = false;
    }
  };

  sweep(x0, horizon);
  for (std::size_t i = 0; i < n_probe; ++i) {
    const Skeleton sk = simulate_skeleton(model, x0, horizon, VariateStream(opts.seed, i));
    for (const PathSegment& seg : path_segments(sk, horizon)) {
      if (seg.start->is_cemetery()) continue;
      sweep(*seg.start, horizon);
    }
  }

  const bool bounded = std::isfinite(r.H) && r.probe_points > 0;
  const bool b_ok = r.B_minus > -1.0 && std::isfinite(r.B_plus);
  const bool common = r.positivity_ok && bounded && b_ok;
  r.c1_ok = common && finite_variation;
  r.c2_ok = common && finite_ac_variation && r.H_minus > 0.0;
  r.note = "numerical evidence from probe trajectories and simulated paths, not a proof";
  return r;
}

// ------------------------------------------------------------- tilting

PdmpModel tilt_model(const PdmpModel& model, const TestFunction& h) {
  PdmpModel out = model;
  out.name = model.name + "~" + h.name;
  const PathFunctional& base = model.hazard.measure;
  PathFunctional law;
  if (base.density) {
    law.density = [rate = base.density, kernel = model.kernel, h](const State& y) {
      const double lam = rate(y);
      if (lam == 0.0) return 0.0;
      return lam * kernel_mass(*kernel, y, h) / h.value(y);
    };
  }
  if (base.atoms) {
    law.atoms = [atoms = base.atoms, flow = model.flow, kernel = model.kernel, h](
                    const State& x, double lo, double hi) {
      std::vector<Atom> out_atoms = atoms(x, lo, hi);
      for (Atom& a : out_atoms) {
        const State y = flow_eval(flow, x, a.offset);
        const double dh = path_jump_at(h, x, a.offset);
        if (a.value == 1.0 && dh == 0.0) continue;  // forced jumps stay forced
        const double hy = h.value(y);
        const double qh = kernel_mass(*kernel, y, h);
        const double dah = dh + a.value * (qh - hy);
        const double denom = (hy - dh) + dah;
        if (!(denom > 0.0)) {
          std::ostringstream msg;
          msg << "h(y-) + DAh(y) = " << denom << " at " << y;
          throw Error(ErrorCode::DomainViolation, msg.str());
        }
        a.value = std::min(1.0, a.value * qh / denom);
      }
      return out_atoms;
    };
  }
  out.hazard = HazardLaw{std::move(law)};
  out.kernel = model.kernel->tilted(h);
  return out;
}

std::string_view to_string(GeneratorForm form) noexcept {
  switch (form) {
    case GeneratorForm::direct: return "direct";
    case GeneratorForm::ratio: return "ratio";
    case GeneratorForm::bracket: return "bracket";
  }
  return "unknown";
}

namespace {

PathFunctional direct_form(const PdmpModel& model, const TestFunction& h, const TestFunction& f) {
  const TestFunction fh = product(f, h, model.flow);
  PathFunctional out;
  out.density = [flow = model.flow, rate = model.hazard.measure.density, kernel = model.kernel, f,
                 h, fh](const State& y) {
    double v = path_derivative(f, flow, y);
    const double lam = rate ? rate(y) : 0.0;
    if (lam != 0.0)
      v += lam * (kernel->integrate(y, fh) - f.value(y) * kernel->integrate(y, h)) / h.value(y);
    return v;
  };
  if (model.hazard.measure.atoms || f.path_jumps) {
    out.atoms = [flow = model.flow, hazard_atoms = model.hazard.measure.atoms,
                 kernel = model.kernel, f, h, fh](const State& x, double lo, double hi) {
      const std::vector<Atom> df = path_jumps(f, x, lo, hi);
      const std::vector<Atom> dl =
          hazard_atoms ? hazard_atoms(x, lo, hi) : std::vector<Atom>{};
      const std::vector<Atom> dh = path_jumps(h, x, lo, hi);
      std::vector<Atom> res;
      for (const MergedAtom& m : merge_atoms({df, dl, dh})) {
        double v = m.values[0];
        const double delta = m.values[1];
        if (delta != 0.0) {
          const State y = flow_eval(flow, x, m.offset);
          const double hy = h.value(y);
          const double qh = kernel->integrate(y, h);
          const double dah = m.values[2] + delta * (qh - hy);
          const double denom = hy - m.values[2] + dah;
          v += delta * (kernel->integrate(y, fh) - f.value(y) * qh) / denom;
        }
        res.push_back({m.offset, v});
      }
      return res;
    };
  }
  return out;
}

PathFunctional ratio_form(const PdmpModel& model, const TestFunction& h, const TestFunction& f) {
  const TestFunction fh = product(f, h, model.flow);
  const PathFunctional a_fh = generator_apply(model, fh);
  const PathFunctional a_h = generator_apply(model, h);
  PathFunctional out;
  out.density = [a_fh, a_h, f, h](const State& y) {
    return (a_fh.density(y) - f.value(y) * a_h.density(y)) / h.value(y);
  };
  if (a_fh.atoms || a_h.atoms) {
    out.atoms = [flow = model.flow, a_fh, a_h, f, h](const State& x, double lo, double hi) {
      const std::vector<Atom> j_fh = af_atoms(a_fh, x, lo, hi);
      const std::vector<Atom> j_h = af_atoms(a_h, x, lo, hi);
      const std::vector<Atom> df = path_jumps(f, x, lo, hi);
      const std::vector<Atom> dh = path_jumps(h, x, lo, hi);
      std::vector<Atom> res;
      for (const MergedAtom& m : merge_atoms({j_fh, j_h, df, dh})) {
        const State y = flow_eval(flow, x, m.offset);
        const double f_left = f.value(y) - m.values[2];
        const double h_left = h.value(y) - m.values[3];
        res.push_back({m.offset, (m.values[0] - f_left * m.values[1]) / (h_left + m.values[1])});
      }
      return res;
    };
  }
  return out;
}

PathFunctional bracket_form(const PdmpModel& model, const TestFunction& h, const TestFunction& f) {
  const PathFunctional a_f = generator_apply(model, f);
  const PathFunctional a_h = generator_apply(model, h);
  const PathFunctional cdc = carre_du_champ(model, f, h);
  PathFunctional out;
  out.density = [a_f, cdc, h](const State& y) { return a_f.density(y) + cdc.density(y) / h.value(y); };
  if (a_f.atoms || a_h.atoms || cdc.atoms) {
    out.atoms = [flow = model.flow, a_f, a_h, cdc, h](const State& x, double lo, double hi) {
      const std::vector<Atom> j_f = af_atoms(a_f, x, lo, hi);
      const std::vector<Atom> j_c = af_atoms(cdc, x, lo, hi);
      const std::vector<Atom> j_h = af_atoms(a_h, x, lo, hi);
      const std::vector<Atom> dh = path_jumps(h, x, lo, hi);
      std::vector<Atom> res;
      for (const MergedAtom& m : merge_atoms({j_f, j_c, j_h, dh})) {
        const State y = flow_eval(flow, x, m.offset);
        const double h_left = h.value(y) - m.values[3];
        res.push_back({m.offset, m.values[0] + m.values[1] / (h_left + m.values[2])});
      }
      return res;
    };
  }
  return out;
}

}  // namespace

PathFunctional tilted_generator(const PdmpModel& model, const TestFunction& h,
                                const TestFunction& f, GeneratorForm form) {
  switch (form) {
    case GeneratorForm::direct: return direct_form(model, h, f);
    case GeneratorForm::ratio: return ratio_form(model, h, f);
    case GeneratorForm::bracket: return bracket_form(model, h, f);
  }
  throw Error(ErrorCode::BadParameters, "unknown generator form");
}

double reverse_martingale(const PdmpModel& tilted, const TestFunction& h, const Skeleton& sk,
                          double t) {
  return ExpMartingale(tilted, reciprocal(h, tilted.flow))(sk, t);
}

}  // namespace pdmp
