#include <doctest.h>

#include <cmath>
#include <random>

#include "lhvforge/state_families.hpp"

using namespace lhv;

namespace {
constexpr double kPi4 = 0.78539816339744830961;
std::mt19937_64 rng(777);

BlochVector random_unit() {
  std::normal_distribution<double> g;
  BlochVector v{g(rng), g(rng), g(rng)};
  return v.normalized();
}

HermitianBlock random_psd2() {
  std::normal_distribution<double> g;
  HMat m(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(g(rng), g(rng));
  return HermitianBlock(HMat(m * m.adjoint()));
}
}  // namespace

TEST_CASE("pure states") {
  auto p0 = pure_state(0.0);
  CHECK(p0.mat()(0, 0).real() == doctest::Approx(1.0));
  CHECK(p0.trace() == doctest::Approx(1.0));

  auto bell = pure_state(kPi4);
  auto ma = partial_trace(bell, Subsystem::B);
  auto mb = partial_trace(bell, Subsystem::A);
  CHECK((ma.mat() - 0.5 * HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((mb.mat() - 0.5 * HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  auto phi = pure_state(0.6);
  auto marg = partial_trace(phi, Subsystem::A);
  CHECK(marg.mat()(0, 0).real() == doctest::Approx(0.68130).epsilon(1e-4));
  CHECK(marg.mat()(1, 1).real() == doctest::Approx(0.31870).epsilon(1e-4));

  CHECK_THROWS(pure_state(-0.1));
  CHECK_THROWS(pure_state(1.0));
}

TEST_CASE("rho family") {
  // eta=1 is the pure state; eta=0 the product with I/2
  auto phi = pure_state(0.4);
  CHECK((rho_family(0.4, 1.0).mat() - phi.mat()).cwiseAbs().maxCoeff() < 1e-14);
  auto prod = rho_family(0.4, 0.0);
  auto rb = partial_trace(phi, Subsystem::A);
  auto expect = tensor(HermitianBlock::identity(2) * 0.5, rb);
  CHECK((prod.mat() - expect.mat()).cwiseAbs().maxCoeff() < 1e-14);

  // marginal on B is independent of eta
  std::uniform_real_distribution<double> uth(0.0, kPi4), ueta(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    double th = uth(rng);
    auto m1 = partial_trace(rho_family(th, ueta(rng)), Subsystem::A);
    auto m2 = partial_trace(rho_family(th, ueta(rng)), Subsystem::A);
    CHECK((m1.mat() - m2.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("map identity") {
  CHECK(map_identity_check(kPi4, 0.5, {0, 0, 1}, HermitianBlock::identity(2) * 0.5) < 1e-12);
  CHECK(map_identity_check(0.0, 1.0, {1, 0, 0}, random_psd2()) < 1e-12);

  std::uniform_real_distribution<double> uth(0.0, kPi4), ueta(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k)
    worst = std::max(worst,
                     map_identity_check(uth(rng), ueta(rng), random_unit(), random_psd2()));
  CHECK(worst < 1e-10);
}

TEST_CASE("alpha condition root") {
  CHECK(alpha_from_theta(kPi4) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(alpha_from_theta(0.0) == doctest::Approx(1.0).epsilon(1e-10));

  double a = alpha_from_theta(0.02);
  CHECK(a == doctest::Approx(0.911643).epsilon(1e-4));
  // residual of the defining relation at the root
  double lhs = std::cos(0.04) * std::cos(0.04);
  double rhs = (2 * a - 1) / ((2 - a) * a * a * a);
  CHECK(std::abs(lhs - rhs) < 1e-11);
  // the Appendix-B operating point beta=0.911 sits just inside the inequality
  CHECK(alpha_condition_holds(0.02, 0.911));
  CHECK_FALSE(alpha_condition_holds(0.02, 0.92));

  // monotone non-increasing over a grid
  double prev = 2.0;
  for (int i = 0; i <= 100; ++i) {
    double th = kPi4 * i / 100.0;
    double cur = alpha_from_theta(th);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("auxiliary state classes") {
  // class 1 gate
  CHECK_THROWS(class1_state(0.3, 0.6));
  auto c1 = class1_state(kPi4, 0.68);
  CHECK(c1.state.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(min_eigenvalue(c1.state) > -1e-10);
  auto c1b = class1_state(0.65, 0.69);
  auto c1c = class1_state(0.6, 0.69);
  CHECK(min_eigenvalue(c1b.state) > -1e-10);
  CHECK(min_eigenvalue(c1c.state) > -1e-10);
  CHECK_NOTHROW(class1_state(0.3, 0.6, {{0.3, 0.6}}));  // user-extended allowlist

  // class 2: gamma_theta built from xi_theta at alpha(theta)
  auto c2 = class2_state(0.4);
  CHECK(c2.state.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(min_eigenvalue(c2.state) > -1e-10);
  auto xi = rho_family(0.4, c2.alpha);
  auto xi_a = partial_trace(xi, Subsystem::B);
  auto ga = partial_trace(c2.state, Subsystem::B);
  CHECK((ga.mat() - xi_a.mat()).cwiseAbs().maxCoeff() < 1e-12);

  auto c2_0 = class2_state(0.0);
  CHECK(c2_0.alpha == doctest::Approx(1.0).epsilon(1e-9));

  // class 3
  auto c3 = class3_state(0.3);
  CHECK(c3.state.trace() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(min_eigenvalue(c3.state) > -1e-10);
  auto c3_0 = class3_state(0.0);
  CHECK((c3_0.state.mat() - pure_state(0.0).mat()).cwiseAbs().maxCoeff() < 1e-9);
  // at pi/4 both marginals are maximally mixed, so classes 2's base matches class 3
  auto c3_w = class3_state(kPi4);
  auto w = rho_family(kPi4, 0.5);
  CHECK((c3_w.state.mat() - w.mat()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("auxiliary state json") {
  auto c2 = class2_state(0.25);
  nlohmann::json j = c2;
  auto back = j.get<AuxiliaryState>();
  CHECK(back.label == AuxLabel::Class2);
  CHECK(back.provenance.theta == doctest::Approx(0.25));
  CHECK((back.state.mat() - c2.state.mat()).cwiseAbs().maxCoeff() < 1e-15);
}
