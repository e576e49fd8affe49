#include <doctest.h>

#include <random>

#include "lhvforge/operator_core.hpp"
#include "lhvforge/state_families.hpp"

using namespace lhv;

namespace {

std::mt19937_64 rng(12345);

HermitianBlock random_block(int dim) {
  std::normal_distribution<double> g;
  HMat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return HermitianBlock(HMat(0.5 * (m + m.adjoint().eval())));
}

HermitianBlock random_psd(int dim) {
  std::normal_distribution<double> g;
  HMat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
  return HermitianBlock(HMat(m * m.adjoint()));
}

}  // namespace

TEST_CASE("pauli_expand basis cases") {
  auto p0 = pauli_expand({0, 0, 1}, 0.5, 0.5);
  CHECK(std::abs(p0.mat()(0, 0).real() - 1.0) < 1e-15);
  CHECK(std::abs(p0.mat()(1, 1).real()) < 1e-15);
  CHECK(std::abs(p0.mat()(0, 1)) < 1e-15);

  auto mixed = pauli_expand({0.3, -0.2, 0.9}, 0.5, 0.0);
  CHECK(std::abs(mixed.mat()(0, 0).real() - 0.5) < 1e-15);
  CHECK(std::abs(mixed.mat()(1, 1).real() - 0.5) < 1e-15);
  CHECK(std::abs(mixed.mat()(0, 1)) < 1e-15);

  // (1/2)(I + sigma_x): every entry 1/2
  auto px = pauli_expand({1, 0, 0}, 0.5, 0.5);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(px.mat()(i, j) - Complex(0.5, 0)) < 1e-15);
}

TEST_CASE("tensor conventions") {
  auto id2 = HermitianBlock::identity(2);
  auto id4 = tensor(id2, id2);
  CHECK((id4.mat() - HMat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

  HMat d(2, 2);
  d << 1, 0, 0, 0;
  auto p = tensor(HermitianBlock(d), HermitianBlock(d));
  CHECK(std::abs(p.mat()(0, 0).real() - 1.0) < 1e-15);
  CHECK(p.mat().cwiseAbs().sum() == doctest::Approx(1.0));

  auto rho_b = random_psd(2);
  auto blk = tensor(id2 * 0.5, rho_b);
  CHECK((blk.mat().block(0, 0, 2, 2) - 0.5 * rho_b.mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((blk.mat().block(2, 2, 2, 2) - 0.5 * rho_b.mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(blk.mat().block(0, 2, 2, 2).cwiseAbs().maxCoeff() < 1e-15);

  CHECK_THROWS(tensor(HermitianBlock::identity(2), HermitianBlock::identity(4)));
}

TEST_CASE("partial trace") {
  auto bell = pure_state(0.78539816339744830961);
  auto mb = partial_trace(bell, Subsystem::A);
  CHECK((mb.mat() - 0.5 * HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  auto phi = pure_state(0.6);
  auto ma = partial_trace(phi, Subsystem::A);
  CHECK(ma.mat()(0, 0).real() == doctest::Approx(std::cos(0.6) * std::cos(0.6)).epsilon(1e-12));
  CHECK(ma.mat()(1, 1).real() == doctest::Approx(std::sin(0.6) * std::sin(0.6)).epsilon(1e-12));

  // product rule: tr_B(X (x) Y) = Tr(Y) X, over random blocks
  for (int k = 0; k < 50; ++k) {
    auto x = random_block(2), y = random_block(2);
    auto t = tensor(x, y);
    auto red = partial_trace(t, Subsystem::B);
    CHECK((red.mat() - y.trace() * x.mat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(partial_trace(t, Subsystem::A).trace() == doctest::Approx(t.trace()).epsilon(1e-12));
  }
}

TEST_CASE("partial transpose") {
  for (int k = 0; k < 50; ++k) {
    auto x = random_block(2), y = random_block(2);
    auto t = tensor(x, y);
    auto pt = partial_transpose(t);
    HMat yt = y.mat().transpose();
    CHECK((pt.mat() - tensor(x, HermitianBlock(yt)).mat()).cwiseAbs().maxCoeff() < 1e-13);
  }
  for (int k = 0; k < 50; ++k) {
    auto op = random_block(4);
    auto twice = partial_transpose(partial_transpose(op));
    CHECK((twice.mat() - op.mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(partial_transpose(op).trace() == doctest::Approx(op.trace()).epsilon(1e-12));
  }
  // maximally entangled state has PT eigenvalue -1/2
  auto bell = pure_state(0.78539816339744830961);
  CHECK(min_eigenvalue(partial_transpose(bell)) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("min_eigenvalue") {
  CHECK(min_eigenvalue(HermitianBlock::identity(4)) == doctest::Approx(1.0));
  HMat d = HMat::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -2;
  CHECK(min_eigenvalue(HermitianBlock(d)) == doctest::Approx(-2.0));
  CHECK(min_eigenvalue(pauli_expand({1, 0, 0}, 0.5, 0.5)) == doctest::Approx(0.0).epsilon(1e-12));

  // unitary conjugation of a known diagonal
  std::normal_distribution<double> g;
  for (int k = 0; k < 50; ++k) {
    HMat a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<HMat> qr(a);
    HMat q = qr.householderQ() * HMat::Identity(4, 4);
    Eigen::Vector4d evs;
    for (int i = 0; i < 4; ++i) evs(i) = g(rng);
    HMat conj = q * evs.asDiagonal().toDenseMatrix().cast<Complex>() * q.adjoint();
    CHECK(min_eigenvalue(HermitianBlock(HMat(0.5 * (conj + conj.adjoint().eval())))) ==
          doctest::Approx(evs.minCoeff()).epsilon(1e-10));
  }
}

TEST_CASE("ppt separability") {
  CHECK(is_ppt_separable(HermitianBlock::identity(4) * 0.25, 1e-9));
  CHECK_FALSE(is_ppt_separable(pure_state(0.78539816339744830961), 1e-9));
  // Werner state: PPT iff eta <= 1/3
  CHECK(is_ppt_separable(rho_family(0.78539816339744830961, 0.3), 1e-9));
  CHECK_FALSE(is_ppt_separable(rho_family(0.78539816339744830961, 0.4), 1e-9));
  CHECK_THROWS(is_ppt_separable(HermitianBlock::identity(4), 1e-9));  // trace 4, not a state
}

TEST_CASE("hermiticity validation and json round trip") {
  HMat bad(2, 2);
  bad << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS(HermitianBlock(bad));

  auto blk = random_block(4);
  nlohmann::json j = blk;
  auto back = j.get<HermitianBlock>();
  CHECK((back.mat() - blk.mat()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(j.at("dim") == 4);
}
