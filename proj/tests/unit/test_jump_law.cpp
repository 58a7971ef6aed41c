#include <doctest.h>

#include <cmath>
#include <random>

#include "../support.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/hazard.hpp"
#include "pdmp/kernel.hpp"
#include "pdmp/models.hpp"

using namespace pdmp;
using testing_support::ks_pvalue;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::BadConfig;
}

// Unit drift with a partial atom of size delta at offset `at` from every start.
HazardLaw partial_atom_law(double rate, double at, double delta) {
  HazardLaw law = HazardLaw::constant(rate);
  law.measure.atoms = [at, delta](const State&, double lo, double hi) {
    return (at > lo && at <= hi) ? std::vector<Atom>{{at, delta}} : std::vector<Atom>{};
  };
  return law;
}

}  // namespace

TEST_CASE("constant rate inverse transform is exact") {
  const Flow flow = Flow::translation({1.0});
  const HazardLaw law = HazardLaw::constant(2.0);
  const State x = State::interior({0.0});
  for (double u : {0.9, 0.5, 0.01, 1e-12})
    CHECK(sample_jump_time(law, flow, x, u) == doctest::Approx(-std::log(u) / 2.0).epsilon(1e-11));
  CHECK(survival(law, flow, x, 0.7) == doctest::Approx(std::exp(-1.4)));
  CHECK(std::isinf(sample_jump_time(HazardLaw::constant(0.0), flow, x, 0.5)));
  CHECK(code_of([&] { sample_jump_time(law, flow, x, 0.0); }) == ErrorCode::BadParameters);
  CHECK(code_of([&] { sample_jump_time(law, flow, x, 1.0); }) == ErrorCode::BadParameters);
}

TEST_CASE("rate integrated by quadrature inverts to the same time") {
  const Flow flow = Flow::translation({1.0});
  HazardLaw law;
  law.measure.density = [](const State& y) { return 1.0 + y.x() * y.x(); };
  const State x = State::interior({0.5});
  for (double u : {0.8, 0.3, 0.05}) {
    const double t = sample_jump_time(law, flow, x, u);
    const double big = t + (std::pow(0.5 + t, 3) - 0.125) / 3.0;
    CHECK(big == doctest::Approx(-std::log(u)).epsilon(1e-10));
  }
}

TEST_CASE("forced atom at the horizon") {
  const ModelBundle b = make_boundary_reset(0.5, 0.0);
  const State x = State::interior({0.3});
  const auto& law = b.model.hazard;
  CHECK(terminal_forced(law, b.model.flow, x));
  CHECK(survival(law, b.model.flow, x, 0.7) == 0.0);
  CHECK(survival(law, b.model.flow, x, 0.6999) > 0.0);
  // A uniform beyond the continuous survival lands exactly on the horizon.
  CHECK(sample_jump_time(law, b.model.flow, x, 0.9) == doctest::Approx(-std::log(0.9) / 0.5));
  CHECK(sample_jump_time(law, b.model.flow, x, 0.1) == doctest::Approx(0.7).epsilon(1e-15));
  const ModelBundle det = make_boundary_reset(0.0, 0.0);
  CHECK(sample_jump_time(det.model.hazard, det.model.flow, x, 0.5) == doctest::Approx(0.7));
  // With a simulation limit before the horizon the path survives.
  CHECK(std::isinf(sample_jump_time(law, b.model.flow, x, 0.1, {}, 0.5)));
}

TEST_CASE("partial atoms absorb a band of uniforms") {
  const Flow flow = Flow::translation({1.0});
  const HazardLaw law = partial_atom_law(1.0, 0.2, 0.5);
  const State x = State::interior({0.0});
  const double before = std::exp(-0.2);
  CHECK(sample_jump_time(law, flow, x, before * 0.9) == doctest::Approx(0.2));
  CHECK(sample_jump_time(law, flow, x, before * 0.51) == doctest::Approx(0.2));
  CHECK(sample_jump_time(law, flow, x, before * 1.01) < 0.2);
  const double after = sample_jump_time(law, flow, x, before * 0.4);
  CHECK(after == doctest::Approx(0.2 + std::log(0.5 / 0.4)).epsilon(1e-10));
  CHECK(survival(law, flow, x, 0.3) == doctest::Approx(std::exp(-0.3) * 0.5));
}

TEST_CASE("survival multiplicativity with atoms") {
  // Partial atom of size 0.3 where the drifting state crosses 0.6.
  const Flow flow = Flow::translation({1.0});
  HazardLaw law = HazardLaw::constant(0.7);
  law.measure.atoms = [](const State& x, double lo, double hi) {
    const double at = 0.6 - x.x();
    return (at > lo && at <= hi) ? std::vector<Atom>{{at, 0.3}} : std::vector<Atom>{};
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const State x = State::interior({u(rng)});
    const double s = u(rng);
    const double t = u(rng);
    const double lhs = survival(law, flow, x, s + t);
    const double rhs = survival(law, flow, x, s) * survival(law, flow, flow_eval(flow, x, s), t);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("hazard errors") {
  const Flow bare([](const State& y, double t) { return State::interior({y.x() + t}); },
                  [](const State& y) { return 1.0 - y.x(); },
                  [](const State&) { return State::boundary({1.0}); });
  const State x = State::interior({0.3});
  // No forced atom at a finite horizon: the path would leave E.
  CHECK(code_of([&] { sample_jump_time(HazardLaw::constant(0.1), bare, x, 0.5); }) ==
        ErrorCode::HorizonExceeded);
  CHECK(code_of([&] { sample_jump_time(partial_atom_law(0.0, 0.2, 1.5), bare, x, 0.5); }) ==
        ErrorCode::BadParameters);
  CHECK(code_of([&] { survival(HazardLaw::constant(1.0), bare, State::cemetery(), 0.1); }) ==
        ErrorCode::CemeteryInput);
  CHECK(code_of([&] { survival(HazardLaw::constant(1.0), bare, x, 0.9); }) ==
        ErrorCode::HorizonExceeded);
}

TEST_CASE("sampled jump times follow the survival law (KS)") {
  const ModelBundle b = make_aimd(1.0, 0.5, 0.5, 0.8, 1.0);
  const State x = b.x0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> sample;
  for (int i = 0; i < 2000; ++i) sample.push_back(sample_jump_time(b.model.hazard, b.model.flow, x, u(rng)));
  // Independent closed form: Lambda(t) = 0.5 t + 0.8 (t + t^2 / 2).
  const double p = ks_pvalue(sample, [](double t) { return 1.0 - std::exp(-(1.3 * t + 0.4 * t * t)); });
  CHECK(p > 0.01);
}

TEST_CASE("discrete kernel sampling, integration and tilting") {
  const DiscreteKernel q([](const State&) {
    return std::vector<WeightedState>{{State::labelled(1), 0.2}, {State::labelled(2), 0.8}};
  });
  const State y = State::labelled(0);
  FixedUniforms a({0.1});
  CHECK(q.sample(y, a).label == 1);
  FixedUniforms b({0.2});
  CHECK(q.sample(y, b).label == 2);
  FixedUniforms c({0.9999999});
  CHECK(q.sample(y, c).label == 2);
  const TestFunction h = table_function("h", {1, 2}, {4.0, 1.0});
  CHECK(q.integrate(y, h) == doctest::Approx(0.2 * 4.0 + 0.8));
  const KernelPtr qt = q.tilted(h);
  const auto m = static_cast<const DiscreteKernel&>(*qt).masses(y);
  CHECK(m[0].mass == doctest::Approx(0.8 / 1.6));
  CHECK(m[1].mass == doctest::Approx(0.8 / 1.6));
  const TestFunction zero = table_function("z", {1, 2}, {0.0, 0.0});
  CHECK(code_of([&] { qt->integrate(y, zero); (void)q.tilted(zero)->integrate(y, h); }) ==
        ErrorCode::ZeroQh);
  CHECK(code_of([&] { kernel_mass(q, y, zero); }) == ErrorCode::ZeroQh);
  CHECK(code_of([&] { q.integrate(State::cemetery(), h); }) == ErrorCode::UnsupportedState);
  FixedUniforms none({});
  CHECK_THROWS_AS(none.next(), Error);
}

TEST_CASE("density kernel and its rejection-sampled tilt") {
  // Uniform reset on [0, 1) independent of y.
  DensitySpec spec;
  spec.support = [](const State&) { return std::pair{0.0, 1.0}; };
  spec.density = [](const State&, double) { return 1.0; };
  spec.inverse_cdf = [](const State&, double u) { return u; };
  spec.place = [](const State&, double z) { return State::interior({z}); };
  spec.tilt_envelope = [](const State&) { return 2.0; };
  const DensityKernel q(spec);
  const State y = State::interior({0.5});
  const TestFunction x = TestFunction::plain("x", [](const State& s) { return s.x(); });
  const TestFunction h = TestFunction::plain("h", [](const State& s) { return 1.0 + s.x(); });
  CHECK(q.integrate(y, x) == doctest::Approx(0.5).epsilon(1e-12));
  const KernelPtr qt = q.tilted(h);
  // Tilted density (1 + z) / 1.5: mean (1/2 + 1/3) / 1.5 = 5/9.
  CHECK(qt->integrate(y, x) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Source : UniformSource {
    std::mt19937_64* g;
    std::uniform_real_distribution<double>* d;
    double next() override { return (*d)(*g); }
  } src;
  src.g = &rng;
  src.d = &u;
  std::vector<double> sample;
  for (int i = 0; i < 3000; ++i) sample.push_back(qt->sample(y, src).x());
  CHECK(ks_pvalue(sample, [](double z) { return (z + 0.5 * z * z) / 1.5; }) > 0.01);
  CHECK(code_of([&] { qt->tilted(h); }) == ErrorCode::MissingEnvelope);
  spec.tilt_envelope = nullptr;
  CHECK(code_of([&] { DensityKernel(spec).tilted(h); }) == ErrorCode::MissingEnvelope);
  spec.tilt_envelope = [](const State&) { return 1.2; };
  const KernelPtr low = DensityKernel(spec).tilted(h);
  CHECK(code_of([&] {
          for (int i = 0; i < 100; ++i) low->sample(y, src);
        }) == ErrorCode::MissingEnvelope);
}

TEST_CASE("exponential claim kernel") {
  const ExponentialClaimKernel q(2.0);
  const State y = State::interior({3.0});
  CHECK(q.moment(0.5) == doctest::Approx(0.8));
  CHECK(code_of([&] { q.moment(-2.0); }) == ErrorCode::MissingOracle);
  const TestFunction e = TestFunction::exponential("e", ExponentialSum{{{1.0, -0.5}}}, 1.0);
  CHECK(q.integrate(y, e) == doctest::Approx(std::exp(-1.5) * 2.0 / 1.5));
  // Quadrature fallback for a non-exponential function: E(y - Z) = y - 1/2.
  const TestFunction x = TestFunction::plain("x", [](const State& s) { return s.x(); });
  CHECK(q.integrate(y, x) == doctest::Approx(2.5).epsilon(1e-10));
  const KernelPtr qt = q.tilted(e);
  CHECK(static_cast<const ExponentialClaimKernel&>(*qt).rate() == doctest::Approx(1.5));
  CHECK(code_of([&] { q.tilted(x); }) == ErrorCode::MissingEnvelope);
  CHECK(code_of([] { ExponentialClaimKernel bad(0.0); }) == ErrorCode::BadParameters);
  FixedUniforms u({std::exp(-1.0)});
  CHECK(q.sample(y, u).x() == doctest::Approx(3.0 - 0.5));
}
