#pragma once

#include <string>
#include <vector>

#include "lhvforge/operator_core.hpp"

namespace lhv {

/// A point of the noisy two-qubit family: theta in [0, pi/4], eta in [0, 1].
struct StatePoint {
  double theta = 0.0;
  double eta = 0.0;
};

enum class AuxLabel { Class1, Class2, Class3, NetPoint };

std::string to_string(AuxLabel label);
AuxLabel aux_label_from_string(const std::string& s);

/// A state known to admit a local model for projective measurements on
/// Alice's side and POVMs on Bob's side, together with how it was built.
struct AuxiliaryState {
  AuxLabel label;
  HermitianBlock state;
  StatePoint provenance;
  double alpha = 0.0;  // mixing parameter used by classes 2 and 3
};

/// |phi_theta><phi_theta| with |phi_theta> = cos(theta)|00> + sin(theta)|11>.
HermitianBlock pure_state(double theta);

/// eta |phi><phi| + (1-eta) I/2 (x) rho_B with rho_B the pure-state B marginal.
HermitianBlock rho_family(const StatePoint& p);
inline HermitianBlock rho_family(double theta, double eta) { return rho_family({theta, eta}); }

/// max over a=+-1 of |tr(|phi><phi| M^eta_{a|x} (x) N) - tr(rho_theta^eta Pi_{a|x} (x) N)|.
/// This is an algebraic identity; the returned value is a numerical residual.
double map_identity_check(double theta, double eta, const BlochVector& x_hat,
                          const HermitianBlock& n_element);

/// Unique root alpha in [1/2, 1] of cos^2(2 theta) = (2a-1)/((2-a)a^3),
/// found by bisection to 1e-12.
double alpha_from_theta(double theta);

/// Inequality form of the alpha condition: cos^2(2 theta) >= (2b-1)/((2-b)b^3).
bool alpha_condition_holds(double theta, double beta);

/// Bases (theta, eta) with an established projective-measurement local model.
const std::vector<StatePoint>& class1_allowed_bases();

/// sqrt(2/3) rho_theta^eta + (1-sqrt(2/3)) xi_A (x) I/2. The base (theta, eta)
/// must be in the allowlist (or in `extra_bases`).
AuxiliaryState class1_state(double theta, double eta,
                            const std::vector<StatePoint>& extra_bases = {});

/// gamma_theta = (xi_theta + xi_A (x) |0><0|)/2 with xi_theta = rho_family(theta, alpha).
AuxiliaryState class2_state(double theta);

/// beta_theta = alpha |phi><phi| + (1-alpha) rho_A (x) I/2.
AuxiliaryState class3_state(double theta);

void to_json(nlohmann::json& j, const AuxiliaryState& s);
void from_json(const nlohmann::json& j, AuxiliaryState& s);

}  // namespace lhv
