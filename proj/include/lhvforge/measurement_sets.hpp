#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lhvforge/operator_core.hpp"

namespace lhv {

/// Qubit measurement: PSD elements summing to the identity, at most 4 outcomes.
struct Povm {
  std::vector<HermitianBlock> elements;
  int outcomes() const { return static_cast<int>(elements.size()); }
};

/// Validates the POVM invariants (elementwise PSD, completeness) at tol 1e-10.
Povm make_povm(std::vector<HermitianBlock> elements, double tol = 1e-10);
bool povm_valid(const Povm& p, double tol = 1e-10);

/// Elements (I +- eta x.sigma)/2.
Povm noisy_projective(const BlochVector& x_hat, double eta);

/// Finite measurement set on the Bloch sphere with certified shrinking
/// factors relative to a reference state xi.
struct MeasurementNet {
  std::vector<BlochVector> directions;  // unit, antipodally closed
  HermitianBlock xi;                    // reference state (dim 2)
  double nu_projective = 0.0;
  double mu_povm = 0.0;
  std::vector<Povm> povm_list;          // relabelings + trivial, for POVM targets
  std::string provenance;
  double theta = -1.0;                  // the grid point this net was built for, if any

  /// One representative per antipodal pair (canonical sign).
  std::vector<BlochVector> representatives() const;
};

/// Vertex sets of the nested polyhedra: icosahedron (12), union with its
/// normalized dual (32), one more dual iteration (92).
std::vector<BlochVector> build_polyhedron(int level);

/// Inradius of the convex hull of the directions: the largest nu such that
/// every Bloch vector of norm nu lies inside. Requires an antipodally closed,
/// full-dimensional set.
double projective_shrink(const std::vector<BlochVector>& directions);

/// All 4-outcome relabelings of {P+, P-, 0, 0} over the direction pairs, plus
/// the four relabelings of {I, 0, 0, 0}.
std::vector<Povm> relabeled_povm_set(const std::vector<BlochVector>& directions);

/// Elements mu N_b + (1-mu) tr(xi N_b) I.
Povm shrunk_povm(const Povm& n, double mu, const HermitianBlock& xi);

struct HullMembership {
  bool feasible = false;
  std::vector<double> weights;  // over net POVMs, when feasible
  double residual = 0.0;
};

/// LP feasibility: nonnegative weights over net POVMs reproducing every
/// element of the target simultaneously.
HullMembership hull_membership(const Povm& target, const std::vector<Povm>& net_povms);

/// Largest mu in [0,1] with shrunk_povm(target, mu, xi) inside the net hull.
double max_feasible_shrink(const Povm& target, const std::vector<Povm>& net_povms,
                           const HermitianBlock& xi);

/// Deterministic stream of extremal qubit POVMs (rank-1 elements; includes
/// rotated tetrahedra, trines, and projective pairs).
std::vector<Povm> sample_extremal_povms(int count, std::uint64_t seed);

struct ShrinkBoundOptions {
  std::uint64_t seed = 1;
  double safety_margin = 0.01;  // subtracted fraction: bound = (1-margin) * sampled min
  int threads = 0;              // 0 = hardware concurrency
};

/// Sampled lower-bound estimate of the POVM shrinking factor of the net
/// against the relabeled set. Requires sample_count >= 1000.
double povm_shrink_lower_bound(const std::vector<BlochVector>& directions,
                               const HermitianBlock& xi_b, int sample_count,
                               const ShrinkBoundOptions& opts = {});

struct BobNetOptions {
  int search_samples = 150;   // per objective evaluation during the search
  int final_samples = 2000;   // for the reported bound
  int restarts = 20;
  int max_evals_per_restart = 400;
  std::uint64_t seed = 1;
  int threads = 0;
  std::optional<std::vector<BlochVector>> warm_start;  // 6 representatives
};

/// xi_B = rho_B(theta); derivative-free search over 6 direction pairs
/// maximizing the sampled POVM shrinking factor. Deterministic given a seed.
MeasurementNet optimize_bob_net(double theta, const BobNetOptions& opts = {});

/// Bob net on the plain icosahedron axes (no search), xi_B = rho_B(theta).
MeasurementNet icosahedron_bob_net(double theta, int final_samples = 2000,
                                   const ShrinkBoundOptions& opts = {});

/// Alice net at a polyhedron level: xi_A = I/2, nu from the hull inradius.
MeasurementNet alice_net(int level);

void to_json(nlohmann::json& j, const MeasurementNet& n);
void from_json(const nlohmann::json& j, MeasurementNet& n);

}  // namespace lhv
