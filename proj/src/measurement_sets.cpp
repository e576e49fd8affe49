#include "lhvforge/measurement_sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "lhvforge/conic_solver.hpp"

namespace lhv {
namespace {

constexpr double kGold = 1.61803398874989484820;

std::vector<BlochVector> icosahedron_vertices() {
  std::vector<BlochVector> v;
  const double n = std::sqrt(1.0 + kGold * kGold);
  for (double s1 : {1.0, -1.0})
    for (double s2 : {1.0, -1.0}) {
      v.push_back({0.0, s1 / n, s2 * kGold / n});
      v.push_back({s1 / n, s2 * kGold / n, 0.0});
      v.push_back({s1 * kGold / n, 0.0, s2 / n});
    }
  return v;
}

struct Facet {
  BlochVector normal;  // outward unit normal
  double offset;       // distance from the origin
  std::vector<int> verts;
};

// Brute-force facet enumeration for small vertex sets on the sphere.
// Coplanar faces (pentagons etc.) are merged by plane deduplication.
std::vector<Facet> hull_facets(const std::vector<BlochVector>& pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 4) throw std::invalid_argument("hull_facets: need at least 4 points");
  std::vector<Facet> facets;
  const double tol = 1e-9;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        BlochVector nrm = (pts[j] + pts[i] * -1.0).cross(pts[k] + pts[i] * -1.0);
        double nn = nrm.norm();
        if (nn < 1e-12) continue;
        nrm = nrm * (1.0 / nn);
        double d = nrm.dot(pts[i]);
        if (d < 0) {
          nrm = -nrm;
          d = -d;
        }
        if (d < 1e-12) continue;  // plane through the origin cannot be a facet here
        bool outside = false;
        for (int t = 0; t < n && !outside; ++t)
          if (nrm.dot(pts[t]) > d + tol) outside = true;
        if (outside) continue;
        bool known = false;
        for (const auto& f : facets)
          if (std::abs(f.offset - d) < 1e-8 && f.normal.dot(nrm) > 1.0 - 1e-8) {
            known = true;
            break;
          }
        if (known) continue;
        Facet f{nrm, d, {}};
        for (int t = 0; t < n; ++t)
          if (std::abs(nrm.dot(pts[t]) - d) < tol) f.verts.push_back(t);
        facets.push_back(std::move(f));
      }
  if (facets.size() < 4) throw std::invalid_argument("hull_facets: degenerate hull");
  return facets;
}

void check_antipodal(const std::vector<BlochVector>& dirs) {
  for (const auto& d : dirs) {
    if (!d.is_unit(1e-9)) throw std::invalid_argument("direction is not unit length");
    bool found = false;
    for (const auto& e : dirs)
      if ((d + e).norm() < 1e-9) {
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("direction set is not antipodally closed");
  }
}

std::vector<BlochVector> canonical_representatives(const std::vector<BlochVector>& dirs) {
  std::vector<BlochVector> reps;
  for (const auto& d : dirs) {
    BlochVector c = d;
    if (c.z < -1e-12 || (std::abs(c.z) <= 1e-12 && (c.x < -1e-12 ||
        (std::abs(c.x) <= 1e-12 && c.y < 0))))
      c = -c;
    bool dup = false;
    for (const auto& r : reps)
      if ((c + r * -1.0).norm() < 1e-9) {
        dup = true;
        break;
      }
    if (!dup) reps.push_back(c);
  }
  return reps;
}

// parameters (diag00, diag11, re01, im01) of a Hermitian 2x2 matrix
std::array<double, 4> herm2_params(const HMat& m) {
  return {m(0, 0).real(), m(1, 1).real(), m(0, 1).real(), m(0, 1).imag()};
}

Povm pad_to_four(const Povm& p) {
  Povm out = p;
  while (out.elements.size() < 4) out.elements.push_back(HermitianBlock::zero(2));
  if (out.elements.size() > 4) throw std::invalid_argument("POVM has more than 4 outcomes");
  return out;
}

std::uint32_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return static_cast<std::uint32_t>((z ^ (z >> 31)) >> 16);
}

}  // namespace

Povm make_povm(std::vector<HermitianBlock> elements, double tol) {
  if (elements.empty() || elements.size() > 4)
    throw std::invalid_argument("POVM must have 1..4 outcomes");
  HMat sum = HMat::Zero(2, 2);
  for (const auto& e : elements) {
    if (e.dim() != 2) throw std::invalid_argument("POVM elements must be dim 2");
    if (min_eigenvalue(e) < -tol) throw std::invalid_argument("POVM element is not PSD");
    sum += e.mat();
  }
  if ((sum - HMat::Identity(2, 2)).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument("POVM elements do not sum to the identity");
  return Povm{std::move(elements)};
}

bool povm_valid(const Povm& p, double tol) {
  if (p.elements.empty() || p.elements.size() > 4) return false;
  HMat sum = HMat::Zero(2, 2);
  for (const auto& e : p.elements) {
    if (e.dim() != 2 || min_eigenvalue(e) < -tol) return false;
    sum += e.mat();
  }
  return (sum - HMat::Identity(2, 2)).cwiseAbs().maxCoeff() <= tol;
}

Povm noisy_projective(const BlochVector& x_hat, double eta) {
  if (!x_hat.is_unit(1e-9)) throw std::invalid_argument("measurement direction must be unit");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta out of [0,1]");
  return Povm{{pauli_expand(x_hat, 0.5, 0.5 * eta), pauli_expand(x_hat, 0.5, -0.5 * eta)}};
}

std::vector<BlochVector> MeasurementNet::representatives() const {
  return canonical_representatives(directions);
}

std::vector<BlochVector> build_polyhedron(int level) {
  if (level < 1 || level > 3) throw std::invalid_argument("polyhedron level must be 1, 2 or 3");
  std::vector<BlochVector> pts = icosahedron_vertices();
  for (int iter = 1; iter < level; ++iter) {
    auto facets = hull_facets(pts);
    std::vector<BlochVector> next = pts;
    for (const auto& f : facets) {
      BlochVector c{0, 0, 0};
      for (int idx : f.verts) c = c + pts[idx];
      next.push_back(c.normalized());
    }
    pts = std::move(next);
  }
  return pts;
}

double projective_shrink(const std::vector<BlochVector>& directions) {
  if (directions.size() < 4)
    throw std::invalid_argument("projective_shrink: need at least 4 directions");
  check_antipodal(directions);
  auto facets = hull_facets(directions);
  double r = 2.0;
  for (const auto& f : facets) r = std::min(r, f.offset);
  return r;
}

std::vector<Povm> relabeled_povm_set(const std::vector<BlochVector>& directions) {
  check_antipodal(directions);
  auto reps = canonical_representatives(directions);
  std::vector<Povm> out;
  for (const auto& d : reps) {
    HermitianBlock plus = pauli_expand(d, 0.5, 0.5);
    HermitianBlock minus = pauli_expand(d, 0.5, -0.5);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        std::vector<HermitianBlock> el(4, HermitianBlock::zero(2));
        el[i] = plus;
        el[j] = minus;
        out.push_back(Povm{std::move(el)});
      }
  }
  for (int i = 0; i < 4; ++i) {
    std::vector<HermitianBlock> el(4, HermitianBlock::zero(2));
    el[i] = HermitianBlock::identity(2);
    out.push_back(Povm{std::move(el)});
  }
  return out;
}

Povm shrunk_povm(const Povm& n, double mu, const HermitianBlock& xi) {
  if (mu < 0.0 || mu > 1.0) throw std::invalid_argument("mu out of [0,1]");
  if (xi.dim() != 2 || std::abs(xi.trace() - 1.0) > 1e-9 || min_eigenvalue(xi) < -1e-9)
    throw std::invalid_argument("xi must be a qubit state");
  Povm out;
  for (const auto& e : n.elements) {
    double t = (xi.mat() * e.mat()).trace().real();
    out.elements.push_back(e * mu + HermitianBlock::identity(2) * ((1.0 - mu) * t));
  }
  return out;
}

namespace {

// phase-1 LP: min total deviation of sum_x p_x M^x from the target elements
ConicSolution solve_membership_lp(const Povm& target4, const std::vector<Povm>& net,
                                  std::vector<int>* p_index_out) {
  ConicProblem lp;
  std::vector<int> rows;
  for (int b = 0; b < 4; ++b) {
    auto pars = herm2_params(target4.elements[b].mat());
    for (double v : pars) rows.push_back(lp.add_row(v));
  }
  std::vector<int> pvars;
  for (const auto& n : net) {
    int p = lp.add_nonneg(0.0);
    pvars.push_back(p);
    Povm n4 = pad_to_four(n);
    for (int b = 0; b < 4; ++b) {
      auto pars = herm2_params(n4.elements[b].mat());
      for (int k = 0; k < 4; ++k)
        if (pars[k] != 0.0) lp.add_nonneg_coeff(rows[4 * b + k], p, pars[k]);
    }
  }
  for (int r : rows) {
    int up = lp.add_nonneg(-1.0);
    int un = lp.add_nonneg(-1.0);
    lp.add_nonneg_coeff(r, up, 1.0);
    lp.add_nonneg_coeff(r, un, -1.0);
  }
  if (p_index_out) *p_index_out = pvars;
  return solve(lp);
}

}  // namespace

HullMembership hull_membership(const Povm& target, const std::vector<Povm>& net_povms) {
  Povm t4 = pad_to_four(target);
  std::vector<int> pvars;
  auto sol = solve_membership_lp(t4, net_povms, &pvars);
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("hull_membership: LP solver failed: " + sol.message +
                             " (primal residual " + std::to_string(sol.primal_residual) + ")");
  HullMembership out;
  out.residual = -sol.objective;  // total absolute deviation
  out.feasible = out.residual < 1e-8;
  if (out.feasible)
    for (int p : pvars) out.weights.push_back(sol.nonneg_values[p]);
  return out;
}

double max_feasible_shrink(const Povm& target, const std::vector<Povm>& net_povms,
                           const HermitianBlock& xi) {
  Povm t4 = pad_to_four(target);
  ConicProblem lp;
  int mu = lp.add_nonneg(1.0);
  int cap = lp.add_nonneg(0.0);
  int caprow = lp.add_row(1.0);
  lp.add_nonneg_coeff(caprow, mu, 1.0);
  lp.add_nonneg_coeff(caprow, cap, 1.0);
  std::vector<int> rows;
  for (int b = 0; b < 4; ++b) {
    double t = (xi.mat() * t4.elements[b].mat()).trace().real();
    HMat base = t * HMat::Identity(2, 2);
    HMat dir = t4.elements[b].mat() - base;  // coefficient of mu
    auto pars_base = herm2_params(base);
    auto pars_dir = herm2_params(dir);
    for (int k = 0; k < 4; ++k) {
      // summing each parameter's rows over b reproduces POVM completeness, so
      // the last outcome's k=1,2,3 rows are implied; keep the system full rank
      if (b == 3 && k >= 1) {
        rows.push_back(-1);
        continue;
      }
      int r = lp.add_row(pars_base[k]);
      rows.push_back(r);
      if (pars_dir[k] != 0.0) lp.add_nonneg_coeff(r, mu, -pars_dir[k]);
    }
  }
  for (const auto& n : net_povms) {
    int p = lp.add_nonneg(0.0);
    Povm n4 = pad_to_four(n);
    for (int b = 0; b < 4; ++b) {
      auto pars = herm2_params(n4.elements[b].mat());
      for (int k = 0; k < 4; ++k)
        if (pars[k] != 0.0 && rows[4 * b + k] >= 0)
          lp.add_nonneg_coeff(rows[4 * b + k], p, pars[k]);
    }
  }
  auto sol = solve(lp);
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("max_feasible_shrink: LP failed: " + sol.message);
  return std::clamp(sol.objective, 0.0, 1.0);
}

std::vector<Povm> sample_extremal_povms(int count, std::uint64_t seed) {
  std::vector<Povm> out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  auto rand_unit = [&]() {
    while (true) {
      BlochVector v{g(rng), g(rng), g(rng)};
      if (v.norm() > 1e-6) return v.normalized();
    }
  };
  auto rank1 = [](const BlochVector& v, double t) { return pauli_expand(v, 0.5 * t, 0.5 * t); };

  // golden-spiral axis sequence for good coverage of projective pairs
  int spiral_idx = 0;
  auto spiral = [&]() {
    int k = spiral_idx++;
    double z = 1.0 - 2.0 * ((k % 512) + 0.5) / 512.0;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double a = 2.0 * M_PI * k * (kGold - 1.0);
    return BlochVector{r * std::cos(a), r * std::sin(a), z};
  };

  auto random_rotation = [&]() {
    // uniform rotation via a random unit quaternion
    double q0, q1, q2, q3, n;
    do {
      q0 = g(rng);
      q1 = g(rng);
      q2 = g(rng);
      q3 = g(rng);
      n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    } while (n < 1e-6);
    q0 /= n;
    q1 /= n;
    q2 /= n;
    q3 /= n;
    Eigen::Matrix3d r;
    r << 1 - 2 * (q2 * q2 + q3 * q3), 2 * (q1 * q2 - q0 * q3), 2 * (q1 * q3 + q0 * q2),
        2 * (q1 * q2 + q0 * q3), 1 - 2 * (q1 * q1 + q3 * q3), 2 * (q2 * q3 - q0 * q1),
        2 * (q1 * q3 - q0 * q2), 2 * (q2 * q3 + q0 * q1), 1 - 2 * (q1 * q1 + q2 * q2);
    return r;
  };

  const Eigen::Matrix3d tetra = (Eigen::Matrix3d() << 1, 1, -1, 1, -1, 1, -1, 1, 1).finished();

  while (static_cast<int>(out.size()) < count) {
    int kind = static_cast<int>(out.size()) % 10;
    if (kind < 4) {
      // rotated regular tetrahedron, weights 1/2 each
      Eigen::Matrix3d rot = random_rotation();
      std::vector<HermitianBlock> el;
      Eigen::Vector3d base[4] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      for (auto& v : base) {
        Eigen::Vector3d w = rot * (v / std::sqrt(3.0));
        el.push_back(rank1({w(0), w(1), w(2)}, 0.5));
      }
      out.push_back(Povm{std::move(el)});
    } else if (kind < 7) {
      // generic 4-outcome extremal: directions random, weights solved
      BlochVector v[4] = {rand_unit(), rand_unit(), rand_unit(), rand_unit()};
      Eigen::Matrix4d a;
      for (int c = 0; c < 4; ++c) {
        a(0, c) = v[c].x;
        a(1, c) = v[c].y;
        a(2, c) = v[c].z;
        a(3, c) = 1.0;
      }
      Eigen::Vector4d rhs(0, 0, 0, 2);
      Eigen::Vector4d t = a.fullPivLu().solve(rhs);
      if ((a * t - rhs).cwiseAbs().maxCoeff() > 1e-9 || t.minCoeff() < 1e-4) continue;
      std::vector<HermitianBlock> el;
      for (int c = 0; c < 4; ++c) el.push_back(rank1(v[c], t(c)));
      out.push_back(Povm{std::move(el)});
    } else if (kind < 9) {
      // planar 3-outcome extremal (trine-like)
      Eigen::Matrix3d rot = random_rotation();
      std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
      double a1 = u(rng), a2 = a1 + 1.0 + 0.8 * std::abs(g(rng)), a3 = a2 + 1.0 + 0.8 * std::abs(g(rng));
      if (a3 - a1 > 2.0 * M_PI - 0.5) continue;
      Eigen::Vector3d dirs2d[3];
      // two in-plane moment equations + weight normalization
      Eigen::Matrix3d sys;
      for (int c = 0; c < 3; ++c) {
        double ang = (c == 0 ? a1 : c == 1 ? a2 : a3);
        dirs2d[c] = rot * Eigen::Vector3d(std::cos(ang), std::sin(ang), 0.0);
        sys(0, c) = std::cos(ang);
        sys(1, c) = std::sin(ang);
        sys(2, c) = 1.0;
      }
      Eigen::Vector3d t = sys.fullPivLu().solve(Eigen::Vector3d(0, 0, 2));
      if ((sys * t - Eigen::Vector3d(0, 0, 2)).cwiseAbs().maxCoeff() > 1e-9 ||
          t.minCoeff() < 1e-4)
        continue;
      std::vector<HermitianBlock> el;
      for (int c = 0; c < 3; ++c)
        el.push_back(rank1({dirs2d[c](0), dirs2d[c](1), dirs2d[c](2)}, t(c)));
      out.push_back(Povm{std::move(el)});
    } else {
      // projective pair along a spiral axis
      BlochVector d = spiral();
      out.push_back(Povm{{pauli_expand(d, 0.5, 0.5), pauli_expand(d, 0.5, -0.5)}});
    }
  }
  return out;
}

double povm_shrink_lower_bound(const std::vector<BlochVector>& directions,
                               const HermitianBlock& xi_b, int sample_count,
                               const ShrinkBoundOptions& opts) {
  if (sample_count < 1000)
    throw std::invalid_argument("povm_shrink_lower_bound: need at least 1000 samples");
  check_antipodal(directions);
  auto net = relabeled_povm_set(directions);
  auto samples = sample_extremal_povms(sample_count, opts.seed);
  int nthreads = opts.threads > 0 ? opts.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<int>(nthreads, 64);
  std::vector<double> mins(nthreads, 1.0);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&, t]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= static_cast<int>(samples.size())) break;
        mins[t] = std::min(mins[t], max_feasible_shrink(samples[i], net, xi_b));
      }
    });
  for (auto& th : pool) th.join();
  double m = 1.0;
  for (double v : mins) m = std::min(m, v);
  return (1.0 - opts.safety_margin) * m;
}

namespace {

std::vector<BlochVector> expand_pairs(const std::vector<BlochVector>& reps) {
  std::vector<BlochVector> dirs;
  for (const auto& r : reps) {
    dirs.push_back(r);
    dirs.push_back(-r);
  }
  return dirs;
}

HermitianBlock rho_b_state(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  HMat m = HMat::Zero(2, 2);
  m(0, 0) = c * c;
  m(1, 1) = s * s;
  return HermitianBlock(m);
}

// Nelder-Mead on R^n, minimizing f.
Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x0, double step, int max_evals,
                            double* best_out) {
  const int n = static_cast<int>(x0.size());
  std::vector<std::pair<double, Eigen::VectorXd>> simplex;
  simplex.reserve(n + 1);
  simplex.emplace_back(f(x0), x0);
  int evals = 1;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = x0;
    xi(i) += step;
    simplex.emplace_back(f(xi), xi);
    ++evals;
  }
  auto order = [&]() {
    std::sort(simplex.begin(), simplex.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  };
  order();
  while (evals < max_evals) {
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i].second;
    centroid /= n;
    const auto& worst = simplex[n];
    Eigen::VectorXd xr = centroid + (centroid - worst.second);
    double fr = f(xr);
    ++evals;
    if (fr < simplex[0].first) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - worst.second);
      double fe = f(xe);
      ++evals;
      simplex[n] = fe < fr ? std::make_pair(fe, xe) : std::make_pair(fr, xr);
    } else if (fr < simplex[n - 1].first) {
      simplex[n] = {fr, xr};
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (worst.second - centroid);
      double fc = f(xc);
      ++evals;
      if (fc < worst.first) {
        simplex[n] = {fc, xc};
      } else {
        for (int i = 1; i <= n; ++i) {
          simplex[i].second = simplex[0].second + 0.5 * (simplex[i].second - simplex[0].second);
          simplex[i].first = f(simplex[i].second);
          ++evals;
        }
      }
    }
    order();
    if (simplex[n].first - simplex[0].first < 1e-6) break;
  }
  if (best_out) *best_out = simplex[0].first;
  return simplex[0].second;
}

std::vector<BlochVector> angles_to_reps(const Eigen::VectorXd& x) {
  std::vector<BlochVector> reps;
  for (int k = 0; k + 1 < x.size(); k += 2) {
    double th = x(k), ph = x(k + 1);
    reps.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
  }
  return reps;
}

}  // namespace

MeasurementNet icosahedron_bob_net(double theta, int final_samples,
                                   const ShrinkBoundOptions& opts) {
  MeasurementNet net;
  net.directions = build_polyhedron(1);
  net.xi = rho_b_state(theta);
  net.theta = theta;
  net.provenance = "icosahedron";
  net.nu_projective = projective_shrink(net.directions);
  net.mu_povm = povm_shrink_lower_bound(net.directions, net.xi, final_samples, opts);
  net.povm_list = relabeled_povm_set(net.directions);
  return net;
}

MeasurementNet optimize_bob_net(double theta, const BobNetOptions& opts) {
  HermitianBlock xi = rho_b_state(theta);
  auto net_from_reps = [](const std::vector<BlochVector>& reps) {
    return expand_pairs(reps);
  };

  // fixed sample set across evaluations: the search objective is deterministic
  auto search_samples = sample_extremal_povms(opts.search_samples, opts.seed + 17);
  auto objective = [&](const Eigen::VectorXd& x) {
    auto reps = angles_to_reps(x);
    auto dirs = net_from_reps(reps);
    std::vector<Povm> net_povms;
    try {
      net_povms = relabeled_povm_set(dirs);
    } catch (const std::exception&) {
      return 1.0;  // degenerate geometry
    }
    int nthreads = opts.threads > 0 ? opts.threads
                                    : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<int>(nthreads, 16);
    std::vector<double> mins(nthreads, 1.0);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t]() {
        while (true) {
          int i = next.fetch_add(1);
          if (i >= static_cast<int>(search_samples.size())) break;
          try {
            mins[t] = std::min(mins[t], max_feasible_shrink(search_samples[i], net_povms, xi));
          } catch (const std::exception&) {
            mins[t] = 0.0;
          }
        }
      });
    for (auto& th : pool) th.join();
    double m = 1.0;
    for (double v : mins) m = std::min(m, v);
    return -m;  // minimize the negative shrink bound
  };

  auto reps_to_angles = [](const std::vector<BlochVector>& reps) {
    Eigen::VectorXd x(2 * reps.size());
    for (size_t k = 0; k < reps.size(); ++k) {
      x(2 * k) = std::acos(std::clamp(reps[k].z, -1.0, 1.0));
      x(2 * k + 1) = std::atan2(reps[k].y, reps[k].x);
    }
    return x;
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(reps_to_angles(canonical_representatives(build_polyhedron(1))));
  if (opts.warm_start) starts.push_back(reps_to_angles(*opts.warm_start));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> g;
  while (static_cast<int>(starts.size()) < opts.restarts) {
    Eigen::VectorXd x = starts[0];
    for (int i = 0; i < x.size(); ++i) x(i) += 0.35 * g(rng);
    starts.push_back(x);
  }

  double best_val = 1.0;
  Eigen::VectorXd best_x = starts[0];
  for (const auto& s0 : starts) {
    double val = 0.0;
    Eigen::VectorXd x = nelder_mead(objective, s0, 0.12, opts.max_evals_per_restart, &val);
    if (val < best_val) {
      best_val = val;
      best_x = x;
    }
  }

  MeasurementNet net;
  net.directions = net_from_reps(angles_to_reps(best_x));
  net.xi = xi;
  net.theta = theta;
  net.provenance = "optimized";
  net.nu_projective = projective_shrink(net.directions);
  ShrinkBoundOptions bopts;
  bopts.seed = opts.seed;
  bopts.threads = opts.threads;
  net.mu_povm = povm_shrink_lower_bound(net.directions, xi, opts.final_samples, bopts);
  net.povm_list = relabeled_povm_set(net.directions);
  return net;
}

MeasurementNet alice_net(int level) {
  MeasurementNet net;
  net.directions = build_polyhedron(level);
  net.xi = HermitianBlock::identity(2) * 0.5;
  net.provenance = "polyhedron-level-" + std::to_string(level);
  net.nu_projective = projective_shrink(net.directions);
  net.mu_povm = 0.0;
  return net;
}

void to_json(nlohmann::json& j, const MeasurementNet& n) {
  j = nlohmann::json{{"directions", n.directions},
                     {"xi", n.xi},
                     {"nu_projective", n.nu_projective},
                     {"mu_povm", n.mu_povm},
                     {"provenance", n.provenance},
                     {"theta", n.theta}};
}

void from_json(const nlohmann::json& j, MeasurementNet& n) {
  n.directions = j.at("directions").get<std::vector<BlochVector>>();
  n.xi = j.at("xi").get<HermitianBlock>();
  n.nu_projective = j.at("nu_projective").get<double>();
  n.mu_povm = j.at("mu_povm").get<double>();
  n.provenance = j.value("provenance", std::string());
  n.theta = j.value("theta", -1.0);
  if (!n.directions.empty()) n.povm_list = relabeled_povm_set(n.directions);
}

}  // namespace lhv
