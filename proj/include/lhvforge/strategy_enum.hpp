#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lhvforge/operator_core.hpp"

namespace lhv {

/// Deterministic dichotomic response: one +-1 outcome per measurement index.
/// Sign-restricted strategies carry the hidden direction that realizes them.
struct DeterministicStrategy {
  std::vector<std::int8_t> assignments;  // +-1 per measurement
  std::optional<BlochVector> witness;

  int outcome(int x) const { return assignments.at(x); }
  int size() const { return static_cast<int>(assignments.size()); }
};

/// D(ab|xy) in {0,1} for a pair of local strategies.
struct BehaviorTable {
  std::vector<std::int8_t> alice, bob;
  double value(int a, int b, int x, int y) const {
    return (a == alice.at(x) && b == bob.at(y)) ? 1.0 : 0.0;
  }
  int settings_a() const { return static_cast<int>(alice.size()); }
  int settings_b() const { return static_cast<int>(bob.size()); }
};

/// All 2^m dichotomic assignments; m <= 20.
std::vector<DeterministicStrategy> enumerate_full(int m);

/// All sign patterns a(x) = sign(lambda . x_hat) realizable by a hidden Bloch
/// direction, one witness each, enumerated from the great-circle arrangement
/// of the direction set. Patterns are indexed by the canonical antipodal-pair
/// representatives of `directions`, in the order that `representatives()`
/// returns them. A random-sampling audit must find no additional pattern;
/// if it does, the enumeration is incomplete and this throws.
std::vector<DeterministicStrategy> enumerate_sign_restricted(
    const std::vector<BlochVector>& directions, int audit_samples = 1'000'000,
    std::uint64_t audit_seed = 2024);

/// Cell count of the great-circle arrangement via the Euler formula
/// F = 2 - V + E; an independent check of the pattern enumeration.
int arrangement_cell_count(const std::vector<BlochVector>& directions);

BehaviorTable joint_behavior(const DeterministicStrategy& alice,
                             const DeterministicStrategy& bob);

/// Compact bitset-per-strategy binary file plus JSON metadata sidecar.
void write_strategies(const std::string& bin_path, const std::string& meta_path,
                      const std::vector<DeterministicStrategy>& strategies,
                      const std::vector<BlochVector>& directions);
std::vector<DeterministicStrategy> read_strategies(const std::string& bin_path);

std::uint64_t directions_hash(const std::vector<BlochVector>& directions);

}  // namespace lhv
