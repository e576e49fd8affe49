#include "lhvforge/strategy_enum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

namespace lhv {
namespace {

std::vector<BlochVector> canonical_reps(const std::vector<BlochVector>& dirs) {
  std::vector<BlochVector> reps;
  for (const auto& d : dirs) {
    if (!d.is_unit(1e-9)) throw std::invalid_argument("directions must be unit vectors");
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

std::vector<std::int8_t> pattern_at(const BlochVector& lambda,
                                    const std::vector<BlochVector>& reps, double min_abs) {
  std::vector<std::int8_t> pat(reps.size());
  for (size_t i = 0; i < reps.size(); ++i) {
    double d = lambda.dot(reps[i]);
    if (std::abs(d) <= min_abs) return {};
    pat[i] = d > 0 ? 1 : -1;
  }
  return pat;
}

struct ArrangementPoints {
  std::vector<BlochVector> points;                 // deduplicated vertices
  std::vector<std::vector<int>> circles_through;   // per point: rep indices
};

ArrangementPoints arrangement_vertices(const std::vector<BlochVector>& reps) {
  ArrangementPoints out;
  const int m = static_cast<int>(reps.size());
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      BlochVector c = reps[i].cross(reps[j]);
      double n = c.norm();
      if (n < 1e-12) continue;
      for (double s : {1.0, -1.0}) {
        BlochVector p = c * (s / n);
        bool dup = false;
        for (const auto& q : out.points)
          if ((p + q * -1.0).norm() < 1e-9) {
            dup = true;
            break;
          }
        if (!dup) out.points.push_back(p);
      }
    }
  for (const auto& p : out.points) {
    std::vector<int> thru;
    for (int i = 0; i < m; ++i)
      if (std::abs(reps[i].dot(p)) < 1e-9) thru.push_back(i);
    out.circles_through.push_back(std::move(thru));
  }
  return out;
}

}  // namespace

std::vector<DeterministicStrategy> enumerate_full(int m) {
  if (m < 1) throw std::invalid_argument("enumerate_full: need m >= 1");
  if (m > 20)
    throw std::invalid_argument(
        "enumerate_full: m > 20 is intractable; use the sign-restricted enumeration");
  std::vector<DeterministicStrategy> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    DeterministicStrategy s;
    s.assignments.resize(m);
    for (int x = 0; x < m; ++x) s.assignments[x] = (mask >> x) & 1 ? 1 : -1;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DeterministicStrategy> enumerate_sign_restricted(
    const std::vector<BlochVector>& directions, int audit_samples, std::uint64_t audit_seed) {
  auto reps = canonical_reps(directions);
  const int m = static_cast<int>(reps.size());
  if (m == 0) throw std::invalid_argument("empty direction set");

  std::map<std::vector<std::int8_t>, BlochVector> found;
  if (m == 1) {
    found[{1}] = reps[0];
    found[{-1}] = -reps[0];
  } else {
    auto arr = arrangement_vertices(reps);
    for (size_t pi = 0; pi < arr.points.size(); ++pi) {
      const BlochVector& p = arr.points[pi];
      const auto& thru = arr.circles_through[pi];
      // tangent frame at p
      BlochVector e1 = reps[thru[0]].cross(p).normalized();
      BlochVector e2 = p.cross(e1);
      std::vector<double> angles;
      for (int ci : thru) {
        BlochVector t = reps[ci].cross(p);
        double a = std::atan2(t.dot(e2), t.dot(e1));
        angles.push_back(a < 0 ? a + 2 * M_PI : a);
        double b = a + M_PI;
        if (b >= 2 * M_PI) b -= 2 * M_PI;
        angles.push_back(b);
      }
      std::sort(angles.begin(), angles.end());
      const int k = static_cast<int>(angles.size());
      for (int s = 0; s < k; ++s) {
        double a0 = angles[s];
        double a1 = (s + 1 < k) ? angles[s + 1] : angles[0] + 2 * M_PI;
        if (a1 - a0 < 1e-12) continue;  // coincident tangents from a degeneracy
        double mid = 0.5 * (a0 + a1);
        BlochVector step = e1 * std::cos(mid) + e2 * std::sin(mid);
        for (double delta : {3e-6, 3e-5, 3e-4}) {
          BlochVector lambda = (p + step * delta).normalized();
          auto pat = pattern_at(lambda, reps, 1e-9);
          if (pat.empty()) continue;
          found.emplace(std::move(pat), lambda);
          break;
        }
      }
    }
  }

  // completeness audit: dense random sampling must hit no new pattern
  std::mt19937_64 rng(audit_seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < audit_samples; ++i) {
    BlochVector v{g(rng), g(rng), g(rng)};
    double n = v.norm();
    if (n < 1e-9) continue;
    auto pat = pattern_at(v * (1.0 / n), reps, 1e-9);
    if (pat.empty()) continue;
    if (!found.count(pat))
      throw std::runtime_error(
          "sign-restricted enumeration incomplete: sampling audit found an extra pattern");
  }

  std::vector<DeterministicStrategy> out;
  out.reserve(found.size());
  for (auto& [pat, wit] : found) {
    DeterministicStrategy s;
    s.assignments = pat;
    s.witness = wit;
    out.push_back(std::move(s));
  }
  return out;  // std::map iteration = lexicographic pattern order
}

int arrangement_cell_count(const std::vector<BlochVector>& directions) {
  auto reps = canonical_reps(directions);
  const int m = static_cast<int>(reps.size());
  if (m == 1) return 2;
  auto arr = arrangement_vertices(reps);
  int v = static_cast<int>(arr.points.size());
  int e = 0;
  for (int ci = 0; ci < m; ++ci) {
    int on_circle = 0;
    for (size_t pi = 0; pi < arr.points.size(); ++pi)
      if (std::abs(reps[ci].dot(arr.points[pi])) < 1e-9) ++on_circle;
    e += on_circle;  // a circle with k vertices carries k arcs
  }
  return 2 - v + e;
}

BehaviorTable joint_behavior(const DeterministicStrategy& alice,
                             const DeterministicStrategy& bob) {
  return BehaviorTable{alice.assignments, bob.assignments};
}

std::uint64_t directions_hash(const std::vector<BlochVector>& directions) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::int64_t v) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 1099511628211ull;
  };
  for (const auto& d : directions) {
    mix(std::llround(d.x * 1e12));
    mix(std::llround(d.y * 1e12));
    mix(std::llround(d.z * 1e12));
  }
  return h;
}

void write_strategies(const std::string& bin_path, const std::string& meta_path,
                      const std::vector<DeterministicStrategy>& strategies,
                      const std::vector<BlochVector>& directions) {
  std::ofstream f(bin_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + bin_path);
  const char magic[4] = {'L', 'H', 'V', 'S'};
  f.write(magic, 4);
  std::uint32_t version = 1;
  std::uint32_t m = strategies.empty() ? 0 : static_cast<std::uint32_t>(strategies[0].size());
  std::uint64_t count = strategies.size();
  f.write(reinterpret_cast<const char*>(&version), 4);
  f.write(reinterpret_cast<const char*>(&m), 4);
  f.write(reinterpret_cast<const char*>(&count), 8);
  const std::uint32_t bytes = (m + 7) / 8;
  std::vector<char> buf(bytes);
  for (const auto& s : strategies) {
    std::fill(buf.begin(), buf.end(), 0);
    for (std::uint32_t x = 0; x < m; ++x)
      if (s.assignments[x] > 0) buf[x / 8] |= static_cast<char>(1 << (x % 8));
    f.write(buf.data(), bytes);
  }
  nlohmann::json meta{{"count", count},
                      {"measurements", m},
                      {"directions_hash", directions_hash(directions)}};
  std::ofstream mf(meta_path);
  if (!mf) throw std::runtime_error("cannot open " + meta_path);
  mf << meta.dump(2) << "\n";
}

std::vector<DeterministicStrategy> read_strategies(const std::string& bin_path) {
  std::ifstream f(bin_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + bin_path);
  char magic[4];
  f.read(magic, 4);
  if (std::string(magic, 4) != "LHVS") throw std::runtime_error("bad strategy file magic");
  std::uint32_t version = 0, m = 0;
  std::uint64_t count = 0;
  f.read(reinterpret_cast<char*>(&version), 4);
  f.read(reinterpret_cast<char*>(&m), 4);
  f.read(reinterpret_cast<char*>(&count), 8);
  if (version != 1) throw std::runtime_error("unsupported strategy file version");
  const std::uint32_t bytes = (m + 7) / 8;
  std::vector<char> buf(bytes);
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    f.read(buf.data(), bytes);
    if (!f) throw std::runtime_error("truncated strategy file");
    DeterministicStrategy s;
    s.assignments.resize(m);
    for (std::uint32_t x = 0; x < m; ++x)
      s.assignments[x] = (buf[x / 8] >> (x % 8)) & 1 ? 1 : -1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace lhv
