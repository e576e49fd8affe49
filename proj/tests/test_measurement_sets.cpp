#include <doctest.h>

#include <cmath>
#include <random>

#include "lhvforge/measurement_sets.hpp"

using namespace lhv;

namespace {
std::mt19937_64 rng(4242);

Eigen::Matrix3d random_rotation() {
  std::normal_distribution<double> g;
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

std::vector<BlochVector> rotate(const std::vector<BlochVector>& dirs, const Eigen::Matrix3d& r) {
  std::vector<BlochVector> out;
  for (const auto& d : dirs) {
    Eigen::Vector3d v = r * Eigen::Vector3d(d.x, d.y, d.z);
    out.push_back({v(0), v(1), v(2)});
  }
  return out;
}
}  // namespace

TEST_CASE("noisy projective POVMs") {
  auto sharp = noisy_projective({0, 0, 1}, 1.0);
  CHECK(min_eigenvalue(sharp.elements[0]) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sharp.elements[0].trace() == doctest::Approx(1.0));

  auto flat = noisy_projective({1, 0, 0}, 0.0);
  CHECK((flat.elements[0].mat() - 0.5 * HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  auto mid = noisy_projective({0, 0, 1}, 0.525);
  CHECK(mid.elements[0].mat()(0, 0).real() == doctest::Approx(0.7625));
  CHECK(mid.elements[0].mat()(1, 1).real() == doctest::Approx(0.2375));
  CHECK(mid.elements[1].mat()(0, 0).real() == doctest::Approx(0.2375));

  CHECK_THROWS(noisy_projective({0, 0, 2}, 0.5));
  CHECK(povm_valid(mid));
}

TEST_CASE("polyhedron construction") {
  auto l1 = build_polyhedron(1);
  auto l2 = build_polyhedron(2);
  auto l3 = build_polyhedron(3);
  CHECK(l1.size() == 12);
  CHECK(l2.size() == 32);
  CHECK(l3.size() == 92);
  for (const auto& pts : {l1, l2, l3}) {
    for (const auto& p : pts) CHECK(p.is_unit(1e-12));
    for (const auto& p : pts) {
      bool has_anti = false;
      for (const auto& q : pts)
        if ((p + q).norm() < 1e-9) has_anti = true;
      CHECK(has_anti);
    }
  }
}

TEST_CASE("projective shrinking factors") {
  // known closed forms: icosahedron inradius and octahedron 1/sqrt(3)
  CHECK(projective_shrink(build_polyhedron(1)) == doctest::Approx(0.7946544723).epsilon(1e-9));
  std::vector<BlochVector> oct = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                  {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  CHECK(projective_shrink(oct) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));

  double n1 = projective_shrink(build_polyhedron(1));
  double n2 = projective_shrink(build_polyhedron(2));
  double n3 = projective_shrink(build_polyhedron(3));
  CHECK(n1 < n2);
  CHECK(n2 < n3);
  CHECK(n3 == doctest::Approx(0.971).epsilon(2e-3));

  // rotation invariance
  auto l2 = build_polyhedron(2);
  for (int k = 0; k < 5; ++k) {
    auto rot = rotate(l2, random_rotation());
    CHECK(projective_shrink(rot) == doctest::Approx(n2).epsilon(1e-10));
  }

  CHECK_THROWS(projective_shrink({{1, 0, 0}, {-1, 0, 0}}));  // degenerate
}

TEST_CASE("relabeled POVM set") {
  auto net = relabeled_povm_set(build_polyhedron(1));
  CHECK(net.size() == 76);
  for (const auto& p : net) CHECK(povm_valid(p));
  // the trivial POVM appears with the identity in each of the 4 slots
  int trivial = 0;
  for (const auto& p : net)
    for (int b = 0; b < 4; ++b)
      if ((p.elements[b].mat() - HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12) ++trivial;
  CHECK(trivial == 4);
}

TEST_CASE("shrunk POVMs") {
  auto n = noisy_projective({0, 0, 1}, 1.0);
  auto id_half = HermitianBlock::identity(2) * 0.5;
  auto same = shrunk_povm(n, 1.0, id_half);
  CHECK((same.elements[0].mat() - n.elements[0].mat()).cwiseAbs().maxCoeff() < 1e-14);

  auto flat = shrunk_povm(n, 0.0, id_half);
  CHECK((flat.elements[0].mat() - 0.5 * HMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  double mu = std::sqrt(2.0 / 3.0);
  auto s = shrunk_povm(n, mu, id_half);
  CHECK(s.elements[0].mat()(0, 0).real() == doctest::Approx(0.5 * (1 + mu)));
  CHECK(s.elements[1].mat()(0, 0).real() == doctest::Approx(0.5 * (1 - mu)));
  CHECK(povm_valid(s));
}

TEST_CASE("hull membership") {
  auto net = relabeled_povm_set(build_polyhedron(1));
  // a net element is trivially inside
  auto r = hull_membership(net[3], net);
  CHECK(r.feasible);

  // a shrunk net element stays inside
  auto id_half = HermitianBlock::identity(2) * 0.5;
  auto s = shrunk_povm(net[3], 0.8, id_half);
  CHECK(hull_membership(s, net).feasible);

  // an unshrunk off-net tetrahedron POVM is outside
  auto tetra = sample_extremal_povms(1, 99)[0];
  CHECK_FALSE(hull_membership(tetra, net).feasible);

  // membership weights reproduce the target
  REQUIRE(r.weights.size() == net.size());
  HMat acc = HMat::Zero(2, 2);
  double wsum = 0;
  for (size_t i = 0; i < net.size(); ++i) {
    acc += r.weights[i] * net[i].elements[0].mat();
    wsum += r.weights[i];
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((acc - net[3].elements[0].mat()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("extremal POVM sampler") {
  auto samples = sample_extremal_povms(200, 7);
  for (const auto& p : samples) {
    CHECK(povm_valid(p, 1e-8));
    for (const auto& e : p.elements) {
      // rank-1: trace equals operator norm bound within roundoff
      double tr = e.trace();
      if (tr > 1e-9) {
        Eigen::SelfAdjointEigenSolver<HMat> es(e.mat(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(tr).epsilon(1e-9));
      }
    }
  }
  // determinism
  auto again = sample_extremal_povms(200, 7);
  CHECK((again[13].elements[0].mat() - samples[13].elements[0].mat()).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("max feasible shrink and sampled bound" * doctest::timeout(300)) {
  auto dirs = build_polyhedron(1);
  auto net = relabeled_povm_set(dirs);
  auto id_half = HermitianBlock::identity(2) * 0.5;

  // an off-net projective pair has a nontrivial shrink ceiling
  auto proj = noisy_projective({0.26726124, 0.53452248, 0.80178373}, 1.0);
  double mu_proj = max_feasible_shrink(proj, net, id_half);
  CHECK(mu_proj > 0.5);
  CHECK(mu_proj < 1.0 - 1e-6);

  ShrinkBoundOptions opts;
  opts.seed = 11;
  double bound = povm_shrink_lower_bound(dirs, id_half, 1000, opts);
  // the Werner-point bound: the reference value is ~0.6737 for the optimal
  // 6-measurement net; the plain icosahedron with sampling lands nearby
  CHECK(bound > 0.60);
  CHECK(bound < 0.70);
  CHECK(bound <= projective_shrink(dirs));  // projective targets are POVM targets too

  // monotonicity under direction removal (same sample stream)
  std::vector<BlochVector> fewer(dirs.begin(), dirs.end() - 4);
  double bound_fewer = povm_shrink_lower_bound(fewer, id_half, 1000, opts);
  CHECK(bound_fewer <= bound + 1e-9);

  CHECK_THROWS(povm_shrink_lower_bound(dirs, id_half, 500, opts));

  // falsification: shrunk extremal POVMs at the reported bound stay inside
  auto probes = sample_extremal_povms(300, 555);
  for (const auto& n : probes) {
    auto s = shrunk_povm(n, bound, id_half);
    CHECK(hull_membership(s, net).feasible);
  }
}

TEST_CASE("net json round trip") {
  auto net = alice_net(1);
  nlohmann::json j = net;
  auto back = j.get<MeasurementNet>();
  CHECK(back.directions.size() == 12);
  CHECK(back.nu_projective == doctest::Approx(net.nu_projective));
  CHECK(back.povm_list.size() == 76);
}
