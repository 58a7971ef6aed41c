#include <doctest.h>

#include <cmath>
#include <random>

#include "pdmp/engine.hpp"
#include "pdmp/errors.hpp"
#include "pdmp/generator.hpp"
#include "pdmp/models.hpp"

using namespace pdmp;

TEST_CASE("constant functions are annihilated") {
  for (const std::string name : {"ctmc3", "cramer-lundberg", "boundary-reset", "aimd"}) {
    const ModelBundle b = make_bundle(name, {});
    const PathFunctional a = generator_apply(b.model, TestFunction::constant(1.0));
    const Skeleton sk = simulate_skeleton(b.model, b.x0, 2.0, VariateStream(3, 0));
    CHECK(eval_L(a, sk, b.model, 2.0) == 0.0);
  }
}

TEST_CASE("exponential function under the risk model") {
  // A e^{-theta x} = kappa(theta) e^{-theta x} with kappa = -theta c + lambda (mu / (mu - theta) - 1).
  const double c = 1.0, lambda = 1.0, mu = 2.0, theta = 0.5;
  const ModelBundle b = make_cramer_lundberg(c, lambda, mu, 1.0, theta);
  const PathFunctional a = generator_apply(b.model, b.function("exp"));
  const double kappa = -0.5 + (2.0 / 1.5 - 1.0);
  CHECK(kappa == doctest::Approx(-1.0 / 6.0));
  CHECK(cl_kappa(c, lambda, mu, theta) == doctest::Approx(kappa));
  for (double x : {-2.0, 0.0, 0.7, 4.0})
    CHECK(a.density(State::interior({x})) == doctest::Approx(kappa * std::exp(-theta * x)).epsilon(1e-13));
  CHECK_FALSE(a.atoms);
  // A x = c - lambda / mu, via the quadrature fallback of the kernel.
  const PathFunctional ax = generator_apply(b.model, b.function("x"));
  CHECK(ax.density(State::interior({3.0})) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("boundary model generator has an atom at the forced jump") {
  const ModelBundle b = make_boundary_reset(0.5, 0.0);
  const PathFunctional a = generator_apply(b.model, b.function("x"));
  const State x = State::interior({0.3});
  // Density 1 + 0.5 (0 - y), atom 1 * (0 - 1) at the horizon.
  CHECK(a.density(State::interior({0.4})) == doctest::Approx(1.0 - 0.2));
  const auto atoms = af_atoms(a, x, 0.0, 0.7);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].offset == doctest::Approx(0.7));
  CHECK(atoms[0].value == doctest::Approx(-1.0));
  // The path step of h = step adds an atom where x crosses 1/2.
  const PathFunctional as = generator_apply(b.model, b.function("step"));
  const auto step_atoms = af_atoms(as, x, 0.0, 0.7);
  REQUIRE(step_atoms.size() == 2);
  CHECK(step_atoms[0].offset == doctest::Approx(0.2));
  CHECK(step_atoms[0].value == 1.0);
  CHECK(step_atoms[1].value == doctest::Approx(1.0 - 2.0));
}

TEST_CASE("chain generator equals the generator matrix") {
  const ModelBundle b = make_ctmc3();
  const auto& g = b.ctmc->generator;
  const std::vector<double> f = b.ctmc->tabulate(b.function("f"));
  const PathFunctional a = generator_apply(b.model, b.function("f"));
  for (std::size_t i = 0; i < 3; ++i) {
    double gf = 0.0;
    for (std::size_t j = 0; j < 3; ++j) gf += g[i][j] * f[j];
    CHECK(a.density(State::labelled(static_cast<int>(i))) == doctest::Approx(gf).epsilon(1e-14));
  }
}

TEST_CASE("carre du champ on a chain") {
  const ModelBundle b = make_ctmc3();
  const auto& g = b.ctmc->generator;
  const std::vector<double> f = b.ctmc->tabulate(b.function("f"));
  const std::vector<double> h = b.ctmc->tabulate(b.function("h"));
  const PathFunctional cdc = carre_du_champ(b.model, b.function("f"), b.function("h"));
  for (std::size_t i = 0; i < 3; ++i) {
    double want = 0.0;
    for (std::size_t j = 0; j < 3; ++j) want += g[i][j] * (f[j] - f[i]) * (h[j] - h[i]);
    CHECK(cdc.density(State::labelled(static_cast<int>(i))) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("Dynkin process is pathwise exact without randomness") {
  const ModelBundle b = make_boundary_reset(0.0, 0.0, 0.3);
  const DynkinProcess u(b.model, b.function("x2"));
  const Skeleton sk = simulate_skeleton(b.model, b.x0, 3.0, VariateStream(5, 0));
  for (double t : {0.0, 0.5, 0.7, 1.2, 2.99, 3.0}) CHECK(u(sk, t) == doctest::Approx(0.09).epsilon(1e-9));
}

TEST_CASE("domain check and jump variation") {
  const ModelBundle b = make_cramer_lundberg(1.0, 1.0, 2.0, 1.0);
  const DomainReport ok = check_domain(b.model, b.function("x"), b.x0, 1.0);
  CHECK(ok.finite);
  // E|Z| = 1/2 per unit hazard.
  CHECK(ok.value == doctest::Approx(0.5).epsilon(1e-8));
  const TestFunction heavy = TestFunction::exponential("heavy", ExponentialSum{{{1.0, -3.0}}}, 1.0);
  const DomainReport bad = check_domain(b.model, heavy, b.x0, 1.0);
  CHECK_FALSE(bad.finite);
  CHECK_FALSE(bad.message.empty());
  const ModelBundle det = make_boundary_reset(0.0, 0.0, 0.3);
  const Skeleton sk = simulate_skeleton(det.model, det.x0, 2.0, VariateStream(1, 0));
  CHECK(jump_variation(det.function("x"), sk, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("finite difference path derivative error is small and measurable") {
  const ModelBundle b = make_boundary_reset(0.5, 0.0);
  TestFunction fd = b.function("cos");
  const TestFunction& exact = b.function("cos");
  fd.path_derivative = nullptr;
  double worst = 0.0;
  for (double x : {0.05, 0.25, 0.5, 0.8}) {
    const State y = State::interior({x});
    worst = std::max(worst, std::abs(path_derivative(fd, b.model.flow, y) - path_derivative(exact, b.model.flow, y)));
  }
  CHECK(worst < 1e-4);
  CHECK(worst > 0.0);
}
