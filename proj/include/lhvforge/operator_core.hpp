#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace lhv {

using Complex = std::complex<double>;

// Dense complex matrix with stack storage, dim <= 4.
using HMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

/// A point in (or on) the Bloch ball.
struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const;
  BlochVector normalized() const;
  bool is_unit(double tol = 1e-9) const;
  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  BlochVector cross(const BlochVector& o) const;
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
};

/// Hermitian matrix of dimension 2 or 4: the carrier for states, POVM
/// elements, and slack blocks. Construction validates hermiticity to 1e-12
/// elementwise and stores the exactly hermitized matrix.
class HermitianBlock {
 public:
  HermitianBlock() : m_(HMat::Zero(2, 2)) {}
  explicit HermitianBlock(const HMat& m);

  static HermitianBlock zero(int dim);
  static HermitianBlock identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const HMat& mat() const { return m_; }
  double trace() const { return m_.trace().real(); }
  double operator_norm_bound() const;  // cheap upper bound on ||.||

  HermitianBlock operator+(const HermitianBlock& o) const;
  HermitianBlock operator-(const HermitianBlock& o) const;
  HermitianBlock operator*(double s) const;

 private:
  HMat m_;
};

inline HermitianBlock operator*(double s, const HermitianBlock& b) { return b * s; }

/// s*I + t*(v . sigma) as a 2x2 block.
HermitianBlock pauli_expand(const BlochVector& v, double s, double t);

/// Kronecker product, Alice = left factor, (A(x)B)[2i+k][2j+l] = A[i][j]*B[k][l].
HermitianBlock tensor(const HermitianBlock& a, const HermitianBlock& b);

enum class Subsystem { A, B };

/// Trace over the named factor of a dim-4 block; preserves the total trace.
HermitianBlock partial_trace(const HermitianBlock& op, Subsystem traced_out);

/// Transpose on Bob's factor; involutive.
HermitianBlock partial_transpose(const HermitianBlock& op);

/// Smallest eigenvalue via a self-adjoint eigensolver.
double min_eigenvalue(const HermitianBlock& op);

/// PSD acceptance: min eigenvalue >= -tol_scale*(1+||op||).
bool is_psd(const HermitianBlock& op, double tol_scale = 1e-9);

/// True iff the two-qubit state has a PSD partial transpose, which for
/// dim 2x2 certifies separability. Throws on non-state input.
bool is_ppt_separable(const HermitianBlock& state, double tol);

// JSON form: {"dim": d, "re": [[..]], "im": [[..]]}
void to_json(nlohmann::json& j, const HermitianBlock& b);
void from_json(const nlohmann::json& j, HermitianBlock& b);
void to_json(nlohmann::json& j, const BlochVector& v);
void from_json(const nlohmann::json& j, BlochVector& v);

}  // namespace lhv
