#include "lhvforge/conic_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace lhv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int ConicProblem::add_row(double rhs_value) {
  rhs_.push_back(rhs_value);
  return static_cast<int>(rhs_.size()) - 1;
}

int ConicProblem::add_free(double obj) {
  free_obj_.push_back(obj);
  free_cols_.emplace_back();
  return static_cast<int>(free_obj_.size()) - 1;
}

int ConicProblem::add_nonneg(double obj) {
  nonneg_obj_.push_back(obj);
  nonneg_cols_.emplace_back();
  return static_cast<int>(nonneg_obj_.size()) - 1;
}

void ConicProblem::add_free_coeff(int row, int idx, double value) {
  free_cols_.at(idx).emplace_back(row, value);
}

void ConicProblem::add_nonneg_coeff(int row, int idx, double value) {
  nonneg_cols_.at(idx).emplace_back(row, value);
}

int ConicProblem::add_psd(int dim) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("psd block dim must be in [1,4]");
  PsdVar v;
  v.dim = dim;
  v.obj = HMat::Zero(dim, dim);
  psd_.push_back(std::move(v));
  return static_cast<int>(psd_.size()) - 1;
}

void ConicProblem::add_psd_coeff(int row, int idx, const HMat& coeff) {
  auto& blk = psd_.at(idx);
  if (coeff.rows() != blk.dim || coeff.cols() != blk.dim)
    throw std::invalid_argument("psd coefficient dim mismatch");
  blk.coeffs.emplace_back(row, 0.5 * (coeff + coeff.adjoint().eval()));
}

void ConicProblem::set_psd_obj(int idx, const HMat& c) {
  auto& blk = psd_.at(idx);
  if (c.rows() != blk.dim || c.cols() != blk.dim)
    throw std::invalid_argument("psd objective dim mismatch");
  blk.obj = 0.5 * (c + c.adjoint().eval());
}

int ConicProblem::add_product_group(ProductGroup g) {
  if (g.rows.rows() != g.U.cols() || g.rows.cols() != g.V.cols())
    throw std::invalid_argument("product group row grid shape mismatch");
  if (g.obj.size() != 0 && g.obj.size() != g.count())
    throw std::invalid_argument("product group objective size mismatch");
  products_.push_back(std::move(g));
  return static_cast<int>(products_.size()) - 1;
}

FreeHermitianVar FreeHermitianVar::add_to(ConicProblem& p, int dim) {
  FreeHermitianVar v{dim, p.free_count()};
  for (int k = 0; k < dim * dim; ++k) p.add_free(0.0);
  return v;
}

namespace {

// Real parameters of Re tr(F X) for Hermitian F against the (diag, re, im)
// parametrization of a free Hermitian X.
void hermitian_functional(const HMat& f, std::vector<double>& out) {
  int d = static_cast<int>(f.rows());
  out.clear();
  for (int k = 0; k < d; ++k) out.push_back(f(k, k).real());
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      out.push_back(2.0 * f(k, l).real());
      out.push_back(2.0 * f(k, l).imag());
    }
}

}  // namespace

void FreeHermitianVar::add_inner_product(ConicProblem& p, int row, const HMat& coeff,
                                         double scale) const {
  std::vector<double> fun;
  hermitian_functional(coeff, fun);
  for (int k = 0; k < static_cast<int>(fun.size()); ++k)
    if (fun[k] != 0.0) p.add_free_coeff(row, first + k, scale * fun[k]);
}

HMat FreeHermitianVar::value(const std::vector<double>& free_values) const {
  HMat x = HMat::Zero(dim, dim);
  int idx = first;
  for (int k = 0; k < dim; ++k) x(k, k) = free_values.at(idx++);
  for (int k = 0; k < dim; ++k)
    for (int l = k + 1; l < dim; ++l) {
      double re = free_values.at(idx++);
      double im = free_values.at(idx++);
      x(k, l) = Complex(re, im);
      x(l, k) = Complex(re, -im);
    }
  return x;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

struct PsdScaling {
  HMat r, r_half, r_half_inv;  // NT scaling R with R S R = X, and R^{+-1/2}
  HMat lambda;                 // scaled point, Hermitian PD
};

HMat herm_sqrt(const HMat& a) {
  Eigen::SelfAdjointEigenSolver<HMat> es(a);
  Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * d.asDiagonal().toDenseMatrix().cast<Complex>() *
         es.eigenvectors().adjoint();
}

// Solves lambda o u = g (Jordan product), i.e. lambda u + u lambda = 2 g.
HMat lyapunov_solve(const HMat& lambda, const HMat& g) {
  Eigen::SelfAdjointEigenSolver<HMat> es(lambda);
  const auto& q = es.eigenvectors();
  const auto& d = es.eigenvalues();
  HMat gh = q.adjoint() * g * q;
  for (int i = 0; i < gh.rows(); ++i)
    for (int j = 0; j < gh.cols(); ++j) gh(i, j) *= 2.0 / (d(i) + d(j));
  return q * gh * q.adjoint();
}

// Largest alpha in (0, cap] with X + alpha dX >= 0.
double psd_max_step(const HMat& x, const HMat& dx, double cap) {
  Eigen::LLT<HMat> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  HMat l = llt.matrixL();
  HMat w = l.triangularView<Eigen::Lower>().solve(dx);
  w = l.triangularView<Eigen::Lower>().solve(w.adjoint().eval()).adjoint();
  Eigen::SelfAdjointEigenSolver<HMat> es(w, Eigen::EigenvaluesOnly);
  double lam = es.eigenvalues().minCoeff();
  if (lam >= 0.0) return cap;
  return std::min(cap, -1.0 / lam);
}

struct Direction {
  VectorXd dy, dxf, dxl, dsl;
  std::vector<VectorXd> dxp, dsp;
  std::vector<HMat> dX, dS;
};

class Ipm {
 public:
  Ipm(const ConicProblem& p, const SolverOptions& o) : p_(p), opts_(o) { setup(); }

  ConicSolution run();

 private:
  const ConicProblem& p_;
  SolverOptions opts_;

  int m_ = 0, nf_ = 0, nl_ = 0;
  int barrier_degree_ = 0;
  MatrixXd af_;                       // m x nf dense free-column matrix
  VectorXd cf_, cl_;                  // internal (minimize) objective parts
  std::vector<VectorXd> cp_;          // per product group
  std::vector<HMat> cpsd_;
  VectorXd b_;
  double bnorm_ = 1.0, cnorm_ = 1.0;
  std::vector<MatrixXd> vv_;          // per group: kB x rB^2 "V row products"
  std::vector<MatrixXd> upairs_;      // per group: kA x (rA*(rA+1)/2)

  // iterates
  VectorXd xf_, xl_, sl_, y_;
  std::vector<VectorXd> xp_, sp_;
  std::vector<HMat> X_, S_;

  // per-iteration scaling state
  VectorXd wl2_;                      // x/s for explicit nonneg
  std::vector<VectorXd> wp2_;
  std::vector<PsdScaling> psc_;
  Eigen::LLT<MatrixXd> kkt_;
  MatrixXd minv_af_;
  Eigen::LDLT<MatrixXd> sf_;

  void setup();
  VectorXd apply_a(const VectorXd& xf, const VectorXd& xl, const std::vector<VectorXd>& xp,
                   const std::vector<HMat>& xs) const;
  void apply_at(const VectorXd& y, VectorXd& out_f, VectorXd& out_l,
                std::vector<VectorXd>& out_p, std::vector<HMat>& out_s) const;
  void compute_scalings();
  bool factor_schur();
  Direction solve_newton(const VectorXd& rp, const VectorXd& rdf, const VectorXd& rdl,
                         const std::vector<VectorXd>& rdp, const std::vector<HMat>& rds,
                         const VectorXd& gl, const std::vector<VectorXd>& gp,
                         const std::vector<HMat>& gpsd) const;
  ConicSolution package(SolveStatus st, int iters, const std::string& msg, double rp_rel,
                        double rd_rel, double relgap) const;
};

void Ipm::setup() {
  m_ = p_.rows();
  nf_ = p_.free_count();
  nl_ = p_.nonneg_count();
  b_ = Eigen::Map<const VectorXd>(p_.rhs().data(), m_);
  bnorm_ = 1.0 + b_.lpNorm<Eigen::Infinity>();

  af_ = MatrixXd::Zero(m_, nf_);
  for (int j = 0; j < nf_; ++j)
    for (auto& [r, v] : p_.free_columns()[j]) af_(r, j) += v;

  // internal sense: minimize -c
  cf_ = -Eigen::Map<const VectorXd>(p_.free_objectives().data(), nf_);
  cl_ = -Eigen::Map<const VectorXd>(p_.nonneg_objectives().data(), nl_);
  double cmax = 0.0;
  for (double v : p_.free_objectives()) cmax = std::max(cmax, std::abs(v));
  for (double v : p_.nonneg_objectives()) cmax = std::max(cmax, std::abs(v));
  for (const auto& g : p_.product_groups()) {
    if (g.obj.size())
      cp_.push_back(-g.obj);
    else
      cp_.push_back(VectorXd::Zero(g.count()));
    cmax = std::max(cmax, cp_.back().lpNorm<Eigen::Infinity>());
  }
  for (const auto& blk : p_.psd_vars()) {
    cpsd_.push_back(-blk.obj);
    cmax = std::max(cmax, blk.obj.cwiseAbs().maxCoeff());
  }
  cnorm_ = 1.0 + cmax;

  barrier_degree_ = nl_;
  for (const auto& g : p_.product_groups()) barrier_degree_ += g.count();
  for (const auto& blk : p_.psd_vars()) barrier_degree_ += blk.dim;

  // constant pieces of the product-group Schur assembly
  for (const auto& g : p_.product_groups()) {
    int kb = static_cast<int>(g.V.rows()), rb = static_cast<int>(g.V.cols());
    int ka = static_cast<int>(g.U.rows()), ra = static_cast<int>(g.U.cols());
    MatrixXd vv(kb, rb * rb);
    for (int j = 0; j < kb; ++j)
      for (int b = 0; b < rb; ++b)
        for (int b2 = 0; b2 < rb; ++b2) vv(j, b * rb + b2) = g.V(j, b) * g.V(j, b2);
    vv_.push_back(std::move(vv));
    MatrixXd up(ka, ra * (ra + 1) / 2);
    int t = 0;
    for (int a = 0; a < ra; ++a)
      for (int a2 = a; a2 < ra; ++a2, ++t)
        up.col(t) = g.U.col(a).cwiseProduct(g.U.col(a2));
    upairs_.push_back(std::move(up));
  }

  // cold start on the central ray
  double tau_p = std::max(1.0, std::sqrt(bnorm_));
  double tau_d = std::max(1.0, std::sqrt(cnorm_));
  xf_ = VectorXd::Zero(nf_);
  xl_ = VectorXd::Constant(nl_, tau_p);
  sl_ = VectorXd::Constant(nl_, tau_d);
  y_ = VectorXd::Zero(m_);
  for (const auto& g : p_.product_groups()) {
    xp_.push_back(VectorXd::Constant(g.count(), tau_p));
    sp_.push_back(VectorXd::Constant(g.count(), tau_d));
  }
  for (const auto& blk : p_.psd_vars()) {
    X_.push_back(HMat::Identity(blk.dim, blk.dim) * tau_p);
    S_.push_back(HMat::Identity(blk.dim, blk.dim) * tau_d);
  }
}

VectorXd Ipm::apply_a(const VectorXd& xf, const VectorXd& xl, const std::vector<VectorXd>& xp,
                      const std::vector<HMat>& xs) const {
  VectorXd out = af_ * xf;
  for (int j = 0; j < nl_; ++j)
    for (auto& [r, v] : p_.nonneg_columns()[j]) out(r) += v * xl(j);
  for (size_t gi = 0; gi < p_.product_groups().size(); ++gi) {
    const auto& g = p_.product_groups()[gi];
    int ka = static_cast<int>(g.U.rows()), kb = static_cast<int>(g.V.rows());
    Eigen::Map<const MatrixXd> z(xp[gi].data(), kb, ka);  // column-major: (j,i)
    MatrixXd grid = g.U.transpose() * z.transpose() * g.V;  // ra x rb
    for (int a = 0; a < grid.rows(); ++a)
      for (int b = 0; b < grid.cols(); ++b) out(g.rows(a, b)) += grid(a, b);
  }
  for (size_t bi = 0; bi < p_.psd_vars().size(); ++bi)
    for (auto& [r, f] : p_.psd_vars()[bi].coeffs) out(r) += (f * xs[bi]).trace().real();
  return out;
}

void Ipm::apply_at(const VectorXd& y, VectorXd& out_f, VectorXd& out_l,
                   std::vector<VectorXd>& out_p, std::vector<HMat>& out_s) const {
  out_f = af_.transpose() * y;
  out_l = VectorXd::Zero(nl_);
  for (int j = 0; j < nl_; ++j)
    for (auto& [r, v] : p_.nonneg_columns()[j]) out_l(j) += v * y(r);
  out_p.clear();
  for (const auto& g : p_.product_groups()) {
    int ka = static_cast<int>(g.U.rows()), kb = static_cast<int>(g.V.rows());
    MatrixXd ygrid(g.rows.rows(), g.rows.cols());
    for (int a = 0; a < ygrid.rows(); ++a)
      for (int b = 0; b < ygrid.cols(); ++b) ygrid(a, b) = y(g.rows(a, b));
    MatrixXd t = g.V * ygrid.transpose() * g.U.transpose();  // kb x ka
    out_p.push_back(Eigen::Map<const VectorXd>(t.data(), ka * kb));
  }
  out_s.clear();
  for (const auto& blk : p_.psd_vars()) {
    HMat acc = HMat::Zero(blk.dim, blk.dim);
    for (auto& [r, f] : blk.coeffs) acc += y(r) * f;
    out_s.push_back(std::move(acc));
  }
}

void Ipm::compute_scalings() {
  wl2_ = xl_.cwiseQuotient(sl_);
  wp2_.clear();
  for (size_t gi = 0; gi < xp_.size(); ++gi) wp2_.push_back(xp_[gi].cwiseQuotient(sp_[gi]));
  psc_.clear();
  for (size_t bi = 0; bi < X_.size(); ++bi) {
    PsdScaling sc;
    HMat xh = herm_sqrt(X_[bi]);
    HMat mid = xh * S_[bi] * xh;
    Eigen::SelfAdjointEigenSolver<HMat> es(mid);
    VectorXd d = es.eigenvalues().cwiseMax(1e-300);
    HMat mid_isqrt = es.eigenvectors() *
                     d.cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                     es.eigenvectors().adjoint();
    sc.r = xh * mid_isqrt * xh;
    sc.r = 0.5 * (sc.r + sc.r.adjoint().eval());
    sc.r_half = herm_sqrt(sc.r);
    Eigen::SelfAdjointEigenSolver<HMat> esr(sc.r_half);
    VectorXd dr = esr.eigenvalues().cwiseMax(1e-300);
    sc.r_half_inv = esr.eigenvectors() *
                    dr.cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                    esr.eigenvectors().adjoint();
    sc.lambda = sc.r_half_inv * X_[bi] * sc.r_half_inv;
    sc.lambda = 0.5 * (sc.lambda + sc.lambda.adjoint().eval());
    psc_.push_back(std::move(sc));
  }
}

bool Ipm::factor_schur() {
  MatrixXd mm = MatrixXd::Zero(m_, m_);
  for (int j = 0; j < nl_; ++j) {
    const auto& col = p_.nonneg_columns()[j];
    for (size_t a = 0; a < col.size(); ++a)
      for (size_t c = 0; c < col.size(); ++c)
        mm(col[a].first, col[c].first) += wl2_(j) * col[a].second * col[c].second;
  }
  for (size_t gi = 0; gi < p_.product_groups().size(); ++gi) {
    const auto& g = p_.product_groups()[gi];
    int ka = static_cast<int>(g.U.rows()), kb = static_cast<int>(g.V.rows());
    int ra = static_cast<int>(g.U.cols()), rb = static_cast<int>(g.V.cols());
    Eigen::Map<const MatrixXd> w2(wp2_[gi].data(), kb, ka);
    MatrixXd kmat = w2.transpose() * vv_[gi];              // ka x rb^2
    MatrixXd contrib = kmat.transpose() * upairs_[gi];     // rb^2 x npairs
    int t = 0;
    for (int a = 0; a < ra; ++a)
      for (int a2 = a; a2 < ra; ++a2, ++t)
        for (int b = 0; b < rb; ++b)
          for (int b2 = 0; b2 < rb; ++b2) {
            double v = contrib(b * rb + b2, t);
            mm(g.rows(a, b), g.rows(a2, b2)) += v;
            if (a2 != a) mm(g.rows(a2, b2), g.rows(a, b)) += v;
          }
  }
  for (size_t bi = 0; bi < p_.psd_vars().size(); ++bi) {
    const auto& coeffs = p_.psd_vars()[bi].coeffs;
    std::vector<HMat> rfr(coeffs.size());
    for (size_t i = 0; i < coeffs.size(); ++i)
      rfr[i] = psc_[bi].r * coeffs[i].second * psc_[bi].r;
    for (size_t i = 0; i < coeffs.size(); ++i)
      for (size_t k = i; k < coeffs.size(); ++k) {
        double v = (coeffs[i].second * rfr[k]).trace().real();
        mm(coeffs[i].first, coeffs[k].first) += v;
        if (coeffs[k].first != coeffs[i].first) mm(coeffs[k].first, coeffs[i].first) += v;
      }
  }
  // factor unregularized if possible; a diagonal shift is a last resort only,
  // since it pollutes the direction once the scalings become extreme
  kkt_.compute(mm);
  double reg = 1e-14 * (1.0 + mm.diagonal().maxCoeff());
  int tries = 0;
  while (kkt_.info() != Eigen::Success && tries < 6) {
    mm.diagonal().array() += reg;
    reg *= 100.0;
    ++tries;
    kkt_.compute(mm);
  }
  if (kkt_.info() != Eigen::Success) return false;
  if (nf_ > 0) {
    minv_af_ = kkt_.solve(af_);
    MatrixXd sf = af_.transpose() * minv_af_;
    sf_.compute(sf);
    if (sf_.info() != Eigen::Success) return false;
  }
  return true;
}

Direction Ipm::solve_newton(const VectorXd& rp, const VectorXd& rdf, const VectorXd& rdl,
                            const std::vector<VectorXd>& rdp, const std::vector<HMat>& rds,
                            const VectorXd& gl, const std::vector<VectorXd>& gp,
                            const std::vector<HMat>& gpsd) const {
  // g-vector per cone block: g = R^{1/2} (lambda o)^{-1} G R^{1/2}
  VectorXd lam_l = (xl_.cwiseProduct(sl_)).cwiseSqrt();
  VectorXd gvec_l =
      nl_ ? (wl2_.cwiseSqrt().cwiseProduct(gl.cwiseQuotient(lam_l.cwiseMax(1e-300)))).eval()
          : VectorXd();
  std::vector<VectorXd> gvec_p;
  for (size_t gi = 0; gi < xp_.size(); ++gi) {
    VectorXd lam = (xp_[gi].cwiseProduct(sp_[gi])).cwiseSqrt().cwiseMax(1e-300);
    gvec_p.push_back(wp2_[gi].cwiseSqrt().cwiseProduct(gp[gi].cwiseQuotient(lam)));
  }
  std::vector<HMat> gvec_s;
  for (size_t bi = 0; bi < X_.size(); ++bi) {
    HMat u = lyapunov_solve(psc_[bi].lambda, gpsd[bi]);
    gvec_s.push_back(psc_[bi].r_half * u * psc_[bi].r_half);
  }

  // rhs = rp - A g + A P_R r_d  (cone parts only)
  VectorXd ag = apply_a(VectorXd::Zero(nf_), nl_ ? gvec_l : VectorXd::Zero(0), gvec_p, gvec_s);
  VectorXd prd_l = nl_ ? wl2_.cwiseProduct(rdl).eval() : VectorXd();
  std::vector<VectorXd> prd_p;
  for (size_t gi = 0; gi < xp_.size(); ++gi) prd_p.push_back(wp2_[gi].cwiseProduct(rdp[gi]));
  std::vector<HMat> prd_s;
  for (size_t bi = 0; bi < X_.size(); ++bi)
    prd_s.push_back((psc_[bi].r * rds[bi] * psc_[bi].r).eval());
  VectorXd aprd = apply_a(VectorXd::Zero(nf_), nl_ ? prd_l : VectorXd::Zero(0), prd_p, prd_s);
  VectorXd rhs = rp - ag + aprd;

  Direction dir;
  if (nf_ > 0) {
    VectorXd t = kkt_.solve(rhs);
    dir.dxf = sf_.solve(af_.transpose() * t - rdf);
    dir.dy = t - minv_af_ * dir.dxf;
  } else {
    dir.dxf = VectorXd::Zero(0);
    dir.dy = kkt_.solve(rhs);
  }

  VectorXd atf, atl;
  std::vector<VectorXd> atp;
  std::vector<HMat> ats;
  apply_at(dir.dy, atf, atl, atp, ats);

  dir.dsl = rdl - atl;
  dir.dxl = nl_ ? (gvec_l - wl2_.cwiseProduct(dir.dsl)).eval() : VectorXd();
  for (size_t gi = 0; gi < xp_.size(); ++gi) {
    dir.dsp.push_back(rdp[gi] - atp[gi]);
    dir.dxp.push_back(gvec_p[gi] - wp2_[gi].cwiseProduct(dir.dsp[gi]));
  }
  for (size_t bi = 0; bi < X_.size(); ++bi) {
    dir.dS.push_back((rds[bi] - ats[bi]).eval());
    dir.dX.push_back((gvec_s[bi] - psc_[bi].r * dir.dS[bi] * psc_[bi].r).eval());
  }
  return dir;
}

ConicSolution Ipm::package(SolveStatus st, int iters, const std::string& msg, double rp_rel,
                           double rd_rel, double relgap) const {
  ConicSolution sol;
  sol.status = st;
  sol.iterations = iters;
  sol.message = msg;
  sol.primal_residual = rp_rel;
  sol.dual_residual = rd_rel;
  sol.gap = relgap;
  double pobj = cf_.dot(xf_) + (nl_ ? cl_.dot(xl_) : 0.0);
  for (size_t gi = 0; gi < xp_.size(); ++gi) pobj += cp_[gi].dot(xp_[gi]);
  for (size_t bi = 0; bi < X_.size(); ++bi)
    pobj += (cpsd_[bi] * X_[bi]).trace().real();
  sol.objective = -pobj;               // back to maximize sense
  sol.dual_objective = -b_.dot(y_);
  sol.free_values.assign(xf_.data(), xf_.data() + nf_);
  sol.nonneg_values.assign(xl_.data(), xl_.data() + nl_);
  for (const auto& v : xp_) sol.product_values.push_back(v);
  for (const auto& x : X_) sol.psd_values.push_back(x);
  VectorXd ymax = -y_;
  sol.y.assign(ymax.data(), ymax.data() + m_);
  sol.nonneg_duals.assign(sl_.data(), sl_.data() + nl_);
  for (const auto& s : S_) sol.psd_duals.push_back(s);
  return sol;
}

ConicSolution Ipm::run() {
  int stall_count = 0;
  struct Snapshot {
    VectorXd xf, xl, sl, y;
    std::vector<VectorXd> xp, sp;
    std::vector<HMat> X, S;
    double rp_rel, rd_rel, relgap;
  };
  Snapshot best;
  double best_score = 1e300;
  int best_iter = -1;
  for (int iter = 0; iter < opts_.max_iterations; ++iter) {
    // residuals
    VectorXd rp = b_ - apply_a(xf_, xl_, xp_, X_);
    VectorXd atf, atl;
    std::vector<VectorXd> atp;
    std::vector<HMat> ats;
    apply_at(y_, atf, atl, atp, ats);
    VectorXd rdf = cf_ - atf;
    VectorXd rdl = cl_ - atl - sl_;
    std::vector<VectorXd> rdp;
    for (size_t gi = 0; gi < xp_.size(); ++gi) rdp.push_back(cp_[gi] - atp[gi] - sp_[gi]);
    std::vector<HMat> rds;
    for (size_t bi = 0; bi < X_.size(); ++bi) rds.push_back(cpsd_[bi] - ats[bi] - S_[bi]);

    double mu = nl_ ? xl_.dot(sl_) : 0.0;
    for (size_t gi = 0; gi < xp_.size(); ++gi) mu += xp_[gi].dot(sp_[gi]);
    for (size_t bi = 0; bi < X_.size(); ++bi) mu += (X_[bi] * S_[bi]).trace().real();
    mu /= std::max(1, barrier_degree_);

    double rp_rel = rp.lpNorm<Eigen::Infinity>() / bnorm_;
    double rd_inf = rdf.size() ? rdf.lpNorm<Eigen::Infinity>() : 0.0;
    if (nl_) rd_inf = std::max(rd_inf, rdl.lpNorm<Eigen::Infinity>());
    for (const auto& v : rdp) rd_inf = std::max(rd_inf, v.lpNorm<Eigen::Infinity>());
    for (const auto& v : rds) rd_inf = std::max(rd_inf, v.cwiseAbs().maxCoeff());
    double rd_rel = rd_inf / cnorm_;

    double pobj = cf_.dot(xf_) + (nl_ ? cl_.dot(xl_) : 0.0);
    for (size_t gi = 0; gi < xp_.size(); ++gi) pobj += cp_[gi].dot(xp_[gi]);
    for (size_t bi = 0; bi < X_.size(); ++bi) pobj += (cpsd_[bi] * X_[bi]).trace().real();
    double dobj = b_.dot(y_);
    double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));

    if (opts_.verbose) {
      std::ostringstream os;
      os << "iter " << iter << " mu " << mu << " rp " << rp_rel << " rd " << rd_rel << " gap "
         << relgap;
      fprintf(stderr, "%s\n", os.str().c_str());
    }

    if (rp_rel <= opts_.feasibility_tol && rd_rel <= opts_.feasibility_tol &&
        relgap <= opts_.gap_tol)
      return package(SolveStatus::Optimal, iter, "converged", rp_rel, rd_rel, relgap);

    // primal infeasibility: dual ray with A^T y + s ~ 0 and b.y -> +inf (min sense:
    // certificate has b.y < 0 since internal dual maximizes b.y ... we track growth)
    double ray_obj = dobj;  // internal sense: dual maximizes b.y; unbounded growth => infeasible
    if (ray_obj > 1e5) {
      double ynorm = y_.lpNorm<Eigen::Infinity>();
      double at_norm = rd_inf;  // ||c - A^T y - s|| ~ ||A^T y + s|| up to bounded c
      if (at_norm / ray_obj < 1e-8 && ynorm > 1e4) {
        ConicSolution sol = package(SolveStatus::Infeasible, iter,
                                    "primal infeasibility certificate found", rp_rel, rd_rel,
                                    relgap);
        VectorXd fy = -y_ / ray_obj;  // maximize-sense Farkas direction
        sol.farkas_y.assign(fy.data(), fy.data() + m_);
        return sol;
      }
    }

    compute_scalings();
    if (!factor_schur())
      return package(SolveStatus::NumericalFailure, iter, "Schur factorization failed", rp_rel,
                     rd_rel, relgap);

    // predictor: G = -lambda o lambda
    VectorXd gl = nl_ ? (-xl_.cwiseProduct(sl_)).eval() : VectorXd();
    std::vector<VectorXd> gp;
    for (size_t gi = 0; gi < xp_.size(); ++gi) gp.push_back(-xp_[gi].cwiseProduct(sp_[gi]));
    std::vector<HMat> gpsd;
    for (size_t bi = 0; bi < X_.size(); ++bi)
      gpsd.push_back((-psc_[bi].lambda * psc_[bi].lambda).eval());
    Direction aff = solve_newton(rp, rdf, rdl, rdp, rds, gl, gp, gpsd);

    auto max_step = [&](const Direction& d) {
      double ap = 1.0, ad = 1.0;
      for (int i = 0; i < nl_; ++i) {
        if (d.dxl(i) < 0) ap = std::min(ap, -xl_(i) / d.dxl(i));
        if (d.dsl(i) < 0) ad = std::min(ad, -sl_(i) / d.dsl(i));
      }
      for (size_t gi = 0; gi < xp_.size(); ++gi)
        for (int i = 0; i < xp_[gi].size(); ++i) {
          if (d.dxp[gi](i) < 0) ap = std::min(ap, -xp_[gi](i) / d.dxp[gi](i));
          if (d.dsp[gi](i) < 0) ad = std::min(ad, -sp_[gi](i) / d.dsp[gi](i));
        }
      for (size_t bi = 0; bi < X_.size(); ++bi) {
        ap = std::min(ap, psd_max_step(X_[bi], d.dX[bi], 1.0));
        ad = std::min(ad, psd_max_step(S_[bi], d.dS[bi], 1.0));
      }
      return std::pair<double, double>(ap, ad);
    };

    auto [ap_aff, ad_aff] = max_step(aff);
    double mu_aff = 0.0;
    if (nl_) mu_aff += (xl_ + ap_aff * aff.dxl).dot(sl_ + ad_aff * aff.dsl);
    for (size_t gi = 0; gi < xp_.size(); ++gi)
      mu_aff += (xp_[gi] + ap_aff * aff.dxp[gi]).dot(sp_[gi] + ad_aff * aff.dsp[gi]);
    for (size_t bi = 0; bi < X_.size(); ++bi)
      mu_aff += ((X_[bi] + ap_aff * aff.dX[bi]) * (S_[bi] + ad_aff * aff.dS[bi])).trace().real();
    mu_aff /= std::max(1, barrier_degree_);
    double sigma = std::pow(std::clamp(mu_aff / std::max(mu, 1e-300), 0.0, 1.0), 3);
    // hold the barrier up while the iterate is still infeasible, so
    // complementarity cannot race ahead of the residuals and pin the step
    if (std::max(rp_rel, rd_rel) > 10.0 * mu) sigma = std::max(sigma, 0.1);

    // corrector: G = sigma mu e - lambda o lambda - symm(dxhat dshat)
    if (nl_) {
      gl = (VectorXd::Constant(nl_, sigma * mu) - xl_.cwiseProduct(sl_) -
            aff.dxl.cwiseProduct(aff.dsl));
    }
    for (size_t gi = 0; gi < xp_.size(); ++gi)
      gp[gi] = VectorXd::Constant(xp_[gi].size(), sigma * mu) - xp_[gi].cwiseProduct(sp_[gi]) -
               aff.dxp[gi].cwiseProduct(aff.dsp[gi]);
    for (size_t bi = 0; bi < X_.size(); ++bi) {
      HMat dxh = psc_[bi].r_half_inv * aff.dX[bi] * psc_[bi].r_half_inv;
      HMat dsh = psc_[bi].r_half * aff.dS[bi] * psc_[bi].r_half;
      HMat corr = 0.5 * (dxh * dsh + dsh * dxh);
      gpsd[bi] = sigma * mu * HMat::Identity(X_[bi].rows(), X_[bi].cols()) -
                 psc_[bi].lambda * psc_[bi].lambda - corr;
      gpsd[bi] = 0.5 * (gpsd[bi] + gpsd[bi].adjoint().eval());
    }
    Direction dir = solve_newton(rp, rdf, rdl, rdp, rds, gl, gp, gpsd);

    auto [ap, ad] = max_step(dir);
    ap = std::min(1.0, 0.99 * ap);
    ad = std::min(1.0, 0.99 * ad);
    if (std::min(ap, ad) < 1e-4) {
      if (++stall_count >= 5)
        return package(SolveStatus::NumericalFailure, iter, "step length collapsed", rp_rel,
                       rd_rel, relgap);
    } else {
      stall_count = 0;
    }

    xf_ += ap * dir.dxf;
    if (nl_) {
      xl_ += ap * dir.dxl;
      sl_ += ad * dir.dsl;
    }
    for (size_t gi = 0; gi < xp_.size(); ++gi) {
      xp_[gi] += ap * dir.dxp[gi];
      sp_[gi] += ad * dir.dsp[gi];
    }
    for (size_t bi = 0; bi < X_.size(); ++bi) {
      X_[bi] += ap * dir.dX[bi];
      X_[bi] = 0.5 * (X_[bi] + X_[bi].adjoint().eval());
      S_[bi] += ad * dir.dS[bi];
      S_[bi] = 0.5 * (S_[bi] + S_[bi].adjoint().eval());
    }
    y_ += ad * dir.dy;
  }

  // accept a weaker exit if the contract thresholds are met
  VectorXd rp = b_ - apply_a(xf_, xl_, xp_, X_);
  double rp_rel = rp.lpNorm<Eigen::Infinity>() / bnorm_;
  VectorXd atf, atl;
  std::vector<VectorXd> atp;
  std::vector<HMat> ats;
  apply_at(y_, atf, atl, atp, ats);
  double rd_inf = (cf_ - atf).size() ? (cf_ - atf).lpNorm<Eigen::Infinity>() : 0.0;
  if (nl_) rd_inf = std::max(rd_inf, (cl_ - atl - sl_).lpNorm<Eigen::Infinity>());
  double rd_rel = rd_inf / cnorm_;
  double pobj = cf_.dot(xf_) + (nl_ ? cl_.dot(xl_) : 0.0);
  for (size_t gi = 0; gi < xp_.size(); ++gi) pobj += cp_[gi].dot(xp_[gi]);
  for (size_t bi = 0; bi < X_.size(); ++bi) pobj += (cpsd_[bi] * X_[bi]).trace().real();
  double dobj = b_.dot(y_);
  double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
  if (rp_rel <= opts_.accept_feasibility && rd_rel <= opts_.accept_feasibility &&
      relgap <= opts_.accept_gap)
    return package(SolveStatus::Optimal, opts_.max_iterations, "converged at accept thresholds",
                   rp_rel, rd_rel, relgap);
  return package(SolveStatus::NumericalFailure, opts_.max_iterations,
                 "max iterations without convergence", rp_rel, rd_rel, relgap);
}

}  // namespace

ConicSolution solve(const ConicProblem& p, const SolverOptions& opts) {
  if (p.rows() == 0) throw std::invalid_argument("conic problem has no constraints");
  Ipm ipm(p, opts);
  return ipm.run();
}

VerifyReport verify_solution(const ConicProblem& p, const ConicSolution& sol, double tol) {
  VerifyReport rep;
  int m = p.rows();
  VectorXd ax = VectorXd::Zero(m);
  for (int j = 0; j < p.free_count(); ++j)
    for (auto& [r, v] : p.free_columns()[j]) ax(r) += v * sol.free_values.at(j);
  for (int j = 0; j < p.nonneg_count(); ++j)
    for (auto& [r, v] : p.nonneg_columns()[j]) ax(r) += v * sol.nonneg_values.at(j);
  for (size_t gi = 0; gi < p.product_groups().size(); ++gi) {
    const auto& g = p.product_groups()[gi];
    int kb = static_cast<int>(g.V.rows());
    const auto& vals = sol.product_values.at(gi);
    for (int a = 0; a < g.rows.rows(); ++a)
      for (int b = 0; b < g.rows.cols(); ++b) {
        double acc = 0.0;
        for (int i = 0; i < g.U.rows(); ++i)
          for (int j = 0; j < kb; ++j) acc += g.U(i, a) * g.V(j, b) * vals(i * kb + j);
        ax(g.rows(a, b)) += acc;
      }
  }
  for (size_t bi = 0; bi < p.psd_vars().size(); ++bi)
    for (auto& [r, f] : p.psd_vars()[bi].coeffs)
      ax(r) += (f * sol.psd_values.at(bi)).trace().real();

  double scale = 1.0;
  for (double v : p.rhs()) scale = std::max(scale, std::abs(v));
  for (int r = 0; r < m; ++r) {
    double viol = std::abs(ax(r) - p.rhs()[r]);
    rep.max_equality_violation = std::max(rep.max_equality_violation, viol);
    if (viol > tol * scale) rep.violations.emplace_back(r, viol);
  }

  rep.min_cone_eigenvalue = 0.0;
  for (double v : sol.nonneg_values) rep.min_cone_eigenvalue = std::min(rep.min_cone_eigenvalue, v);
  for (const auto& vals : sol.product_values)
    if (vals.size()) rep.min_cone_eigenvalue = std::min(rep.min_cone_eigenvalue, vals.minCoeff());
  for (const auto& x : sol.psd_values) {
    Eigen::SelfAdjointEigenSolver<HMat> es(x, Eigen::EigenvaluesOnly);
    rep.min_cone_eigenvalue = std::min(rep.min_cone_eigenvalue, es.eigenvalues().minCoeff());
  }

  rep.rel_gap = std::abs(sol.objective - sol.dual_objective) /
                (1.0 + std::abs(sol.objective) + std::abs(sol.dual_objective));
  rep.pass = rep.violations.empty() && rep.min_cone_eigenvalue >= -tol &&
             (sol.status != SolveStatus::Optimal || rep.rel_gap <= 100 * tol);
  return rep;
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " max_eq_violation=" << max_equality_violation
     << " min_cone_eig=" << min_cone_eigenvalue << " rel_gap=" << rel_gap << " bad_rows=["
     << violations.size() << "]";
  return os.str();
}

}  // namespace lhv
