#include "lhvforge/state_families.hpp"

#include <cmath>

namespace lhv {
namespace {

constexpr double kPi4 = 0.78539816339744830961;

void check_theta(double theta) {
  if (theta < 0.0 || theta > kPi4 + 1e-12)
    throw std::invalid_argument("theta out of range [0, pi/4]: " + std::to_string(theta));
}

HermitianBlock rho_b_marginal(double theta) {
  double c = std::cos(theta), s = std::sin(theta);
  HMat m = HMat::Zero(2, 2);
  m(0, 0) = c * c;
  m(1, 1) = s * s;
  return HermitianBlock(m);
}

double alpha_condition_rhs(double a) { return (2.0 * a - 1.0) / ((2.0 - a) * a * a * a); }

}  // namespace

std::string to_string(AuxLabel label) {
  switch (label) {
    case AuxLabel::Class1: return "class1";
    case AuxLabel::Class2: return "class2";
    case AuxLabel::Class3: return "class3";
    case AuxLabel::NetPoint: return "netpoint";
  }
  throw std::logic_error("bad AuxLabel");
}

AuxLabel aux_label_from_string(const std::string& s) {
  if (s == "class1") return AuxLabel::Class1;
  if (s == "class2") return AuxLabel::Class2;
  if (s == "class3") return AuxLabel::Class3;
  if (s == "netpoint") return AuxLabel::NetPoint;
  throw std::invalid_argument("unknown auxiliary-state label: " + s);
}

HermitianBlock pure_state(double theta) {
  check_theta(theta);
  double c = std::cos(theta), s = std::sin(theta);
  // |phi> = (c, 0, 0, s) in the |00>,|01>,|10>,|11> basis
  HMat m = HMat::Zero(4, 4);
  m(0, 0) = c * c;
  m(0, 3) = c * s;
  m(3, 0) = c * s;
  m(3, 3) = s * s;
  return HermitianBlock(m);
}

HermitianBlock rho_family(const StatePoint& p) {
  check_theta(p.theta);
  if (p.eta < -1e-12 || p.eta > 1.0 + 1e-12)
    throw std::invalid_argument("eta out of range [0, 1]");
  HermitianBlock noise = tensor(HermitianBlock::identity(2) * 0.5, rho_b_marginal(p.theta));
  return pure_state(p.theta) * p.eta + noise * (1.0 - p.eta);
}

double map_identity_check(double theta, double eta, const BlochVector& x_hat,
                          const HermitianBlock& n_element) {
  HermitianBlock phi = pure_state(theta);
  HermitianBlock rho = rho_family(theta, eta);
  double worst = 0.0;
  for (int a : {+1, -1}) {
    HermitianBlock noisy = pauli_expand(x_hat, 0.5, 0.5 * a * eta);
    HermitianBlock sharp = pauli_expand(x_hat, 0.5, 0.5 * a);
    double lhs = (phi.mat() * tensor(noisy, n_element).mat()).trace().real();
    double rhs = (rho.mat() * tensor(sharp, n_element).mat()).trace().real();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double alpha_from_theta(double theta) {
  check_theta(theta);
  // The condition is cube-root flat at alpha=1, so the theta=0 endpoint is
  // not resolvable by comparisons in double precision; its root is exactly 1.
  if (theta < 1e-8) return 1.0;
  double target = std::cos(2.0 * theta);
  target *= target;
  // RHS is 0 at alpha=1/2 and 1 at alpha=1, so the root is bracketed.
  double lo = 0.5, hi = 1.0;
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    if (alpha_condition_rhs(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

bool alpha_condition_holds(double theta, double beta) {
  double c = std::cos(2.0 * theta);
  return c * c >= alpha_condition_rhs(beta);
}

const std::vector<StatePoint>& class1_allowed_bases() {
  static const std::vector<StatePoint> bases = {
      {kPi4, 0.68}, {0.65, 0.69}, {0.6, 0.69}};
  return bases;
}

AuxiliaryState class1_state(double theta, double eta,
                            const std::vector<StatePoint>& extra_bases) {
  auto match = [&](const std::vector<StatePoint>& list) {
    for (const auto& b : list)
      if (std::abs(b.theta - theta) < 1e-9 && std::abs(b.eta - eta) < 1e-9) return true;
    return false;
  };
  if (!match(class1_allowed_bases()) && !match(extra_bases))
    throw std::invalid_argument(
        "class1_state: no established projective-measurement local model for theta=" +
        std::to_string(theta) + ", eta=" + std::to_string(eta));
  const double w = std::sqrt(2.0 / 3.0);
  HermitianBlock rho = rho_family(theta, eta);
  HermitianBlock xi_a = partial_trace(rho, Subsystem::B);
  HermitianBlock state =
      rho * w + tensor(xi_a, HermitianBlock::identity(2) * 0.5) * (1.0 - w);
  return {AuxLabel::Class1, state, {theta, eta}, 0.0};
}

AuxiliaryState class2_state(double theta) {
  double alpha = alpha_from_theta(theta);
  HermitianBlock xi = rho_family(theta, alpha);
  HermitianBlock xi_a = partial_trace(xi, Subsystem::B);
  HMat ket0 = HMat::Zero(2, 2);
  ket0(0, 0) = 1.0;
  HermitianBlock state = (xi + tensor(xi_a, HermitianBlock(ket0))) * 0.5;
  return {AuxLabel::Class2, state, {theta, alpha}, alpha};
}

AuxiliaryState class3_state(double theta) {
  check_theta(theta);
  double alpha = alpha_from_theta(theta);
  HermitianBlock phi = pure_state(theta);
  HermitianBlock rho_a = partial_trace(phi, Subsystem::B);
  HermitianBlock state =
      phi * alpha + tensor(rho_a, HermitianBlock::identity(2) * 0.5) * (1.0 - alpha);
  return {AuxLabel::Class3, state, {theta, alpha}, alpha};
}

void to_json(nlohmann::json& j, const AuxiliaryState& s) {
  j = nlohmann::json{{"label", to_string(s.label)},
                     {"provenance", {{"theta", s.provenance.theta}, {"eta", s.provenance.eta}}},
                     {"alpha", s.alpha},
                     {"state", s.state}};
}

void from_json(const nlohmann::json& j, AuxiliaryState& s) {
  s.label = aux_label_from_string(j.at("label").get<std::string>());
  s.provenance.theta = j.at("provenance").at("theta").get<double>();
  s.provenance.eta = j.at("provenance").at("eta").get<double>();
  s.alpha = j.value("alpha", 0.0);
  s.state = j.at("state").get<HermitianBlock>();
}

}  // namespace lhv
