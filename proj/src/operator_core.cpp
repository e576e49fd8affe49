#include "lhvforge/operator_core.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace lhv {

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector BlochVector::normalized() const {
  double n = norm();
  if (n < 1e-300) throw std::invalid_argument("cannot normalize zero Bloch vector");
  return {x / n, y / n, z / n};
}

bool BlochVector::is_unit(double tol) const { return std::abs(norm() - 1.0) <= tol; }

BlochVector BlochVector::cross(const BlochVector& o) const {
  return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
}

HermitianBlock::HermitianBlock(const HMat& m) {
  const auto rows = m.rows();
  if (rows != m.cols() || (rows != 2 && rows != 4))
    throw std::invalid_argument("HermitianBlock: dim must be 2 or 4");
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("HermitianBlock: matrix not Hermitian (deviation " +
                                std::to_string(dev) + ")");
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianBlock HermitianBlock::zero(int dim) { return HermitianBlock(HMat::Zero(dim, dim)); }

HermitianBlock HermitianBlock::identity(int dim) {
  return HermitianBlock(HMat::Identity(dim, dim));
}

double HermitianBlock::operator_norm_bound() const {
  return m_.cwiseAbs().rowwise().sum().maxCoeff();
}

HermitianBlock HermitianBlock::operator+(const HermitianBlock& o) const {
  return HermitianBlock(m_ + o.m_);
}

HermitianBlock HermitianBlock::operator-(const HermitianBlock& o) const {
  return HermitianBlock(m_ - o.m_);
}

HermitianBlock HermitianBlock::operator*(double s) const { return HermitianBlock(m_ * s); }

HermitianBlock pauli_expand(const BlochVector& v, double s, double t) {
  HMat m(2, 2);
  m(0, 0) = Complex(s + t * v.z, 0);
  m(0, 1) = Complex(t * v.x, -t * v.y);
  m(1, 0) = Complex(t * v.x, t * v.y);
  m(1, 1) = Complex(s - t * v.z, 0);
  return HermitianBlock(m);
}

HermitianBlock tensor(const HermitianBlock& a, const HermitianBlock& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw std::invalid_argument("tensor: both factors must have dim 2");
  HMat m(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.block(2 * i, 2 * j, 2, 2) = a.mat()(i, j) * b.mat();
  return HermitianBlock(m);
}

HermitianBlock partial_trace(const HermitianBlock& op, Subsystem traced_out) {
  if (op.dim() != 4) throw std::invalid_argument("partial_trace: dim must be 4");
  HMat r = HMat::Zero(2, 2);
  const HMat& m = op.mat();
  if (traced_out == Subsystem::A) {
    // result[k][l] = sum_i m[2i+k][2i+l]
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) r(k, l) = m(k, l) + m(2 + k, 2 + l);
  } else {
    // result[i][j] = sum_k m[2i+k][2j+k]
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = m(2 * i, 2 * j) + m(2 * i + 1, 2 * j + 1);
  }
  return HermitianBlock(r);
}

HermitianBlock partial_transpose(const HermitianBlock& op) {
  if (op.dim() != 4) throw std::invalid_argument("partial_transpose: dim must be 4");
  HMat r(4, 4);
  const HMat& m = op.mat();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.block(2 * i, 2 * j, 2, 2) = m.block(2 * i, 2 * j, 2, 2).transpose();
  return HermitianBlock(r);
}

double min_eigenvalue(const HermitianBlock& op) {
  Eigen::SelfAdjointEigenSolver<HMat> es(op.mat(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const HermitianBlock& op, double tol_scale) {
  return min_eigenvalue(op) >= -tol_scale * (1.0 + op.operator_norm_bound());
}

bool is_ppt_separable(const HermitianBlock& state, double tol) {
  if (state.dim() != 4) throw std::invalid_argument("is_ppt_separable: dim must be 4");
  if (std::abs(state.trace() - 1.0) > tol)
    throw std::invalid_argument("is_ppt_separable: input is not unit trace");
  if (min_eigenvalue(state) < -tol)
    throw std::invalid_argument("is_ppt_separable: input is not PSD");
  return min_eigenvalue(partial_transpose(state)) >= -tol;
}

void to_json(nlohmann::json& j, const HermitianBlock& b) {
  int d = b.dim();
  std::vector<std::vector<double>> re(d, std::vector<double>(d));
  std::vector<std::vector<double>> im(d, std::vector<double>(d));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      re[r][c] = b.mat()(r, c).real();
      im[r][c] = b.mat()(r, c).imag();
    }
  j = nlohmann::json{{"dim", d}, {"re", re}, {"im", im}};
}

void from_json(const nlohmann::json& j, HermitianBlock& b) {
  int d = j.at("dim").get<int>();
  HMat m(d, d);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      m(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
  b = HermitianBlock(m);
}

void to_json(nlohmann::json& j, const BlochVector& v) {
  j = nlohmann::json{{"x", v.x}, {"y", v.y}, {"z", v.z}};
}

void from_json(const nlohmann::json& j, BlochVector& v) {
  v.x = j.at("x").get<double>();
  v.y = j.at("y").get<double>();
  v.z = j.at("z").get<double>();
}

}  // namespace lhv
