#pragma once

#include <string>
#include <vector>

#include "lhvforge/operator_core.hpp"

namespace lhv {

/// Standard-form conic problem: maximize c.x subject to A x = b over a
/// product of free scalars, nonnegative scalars, and small Hermitian PSD
/// blocks (dim <= 4). Nonnegative scalars come in two flavours: explicit
/// sparse columns, and "product groups" whose columns are u_i (x) v_j over a
/// rectangular grid of rows -- the shape of local-hidden-variable weight
/// blocks, where storing ~10^5 dense columns would be wasteful.
class ConicProblem {
 public:
  struct ProductGroup {
    Eigen::MatrixXd U;       // kA x rA
    Eigen::MatrixXd V;       // kB x rB
    Eigen::MatrixXi rows;    // rA x rB -> row index, all distinct
    Eigen::VectorXd obj;     // size kA*kB or empty
    int count() const { return static_cast<int>(U.rows() * V.rows()); }
  };
  struct PsdVar {
    int dim = 0;
    std::vector<std::pair<int, HMat>> coeffs;  // (row, F): row gains Re tr(F X)
    HMat obj;                                  // C: objective gains Re tr(C X)
  };

  int add_row(double rhs_value);
  int rows() const { return static_cast<int>(rhs_.size()); }

  int add_free(double obj = 0.0);
  int add_nonneg(double obj = 0.0);
  void add_free_coeff(int row, int idx, double value);
  void add_nonneg_coeff(int row, int idx, double value);

  int add_psd(int dim);
  void add_psd_coeff(int row, int idx, const HMat& coeff);
  void set_psd_obj(int idx, const HMat& c);

  int add_product_group(ProductGroup g);

  int free_count() const { return static_cast<int>(free_obj_.size()); }
  int nonneg_count() const { return static_cast<int>(nonneg_obj_.size()); }

  using SparseCol = std::vector<std::pair<int, double>>;

  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<PsdVar>& psd_vars() const { return psd_; }
  const std::vector<ProductGroup>& product_groups() const { return products_; }
  const std::vector<double>& free_objectives() const { return free_obj_; }
  const std::vector<double>& nonneg_objectives() const { return nonneg_obj_; }
  const std::vector<SparseCol>& free_columns() const { return free_cols_; }
  const std::vector<SparseCol>& nonneg_columns() const { return nonneg_cols_; }

 private:
  std::vector<double> rhs_;
  std::vector<double> free_obj_, nonneg_obj_;
  std::vector<std::vector<std::pair<int, double>>> free_cols_, nonneg_cols_;
  std::vector<PsdVar> psd_;
  std::vector<ProductGroup> products_;
};

/// Parametrizes a free Hermitian matrix as dim^2 free real scalars:
/// diagonal first, then (re, im) per upper off-diagonal entry.
struct FreeHermitianVar {
  int dim = 0;
  int first = 0;  // index of the first free scalar

  static FreeHermitianVar add_to(ConicProblem& p, int dim);
  /// Adds scale * Re tr(F X) to the row's coefficients on this variable.
  void add_inner_product(ConicProblem& p, int row, const HMat& coeff,
                         double scale = 1.0) const;
  HMat value(const std::vector<double>& free_values) const;
};

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

std::string to_string(SolveStatus s);

struct ConicSolution {
  SolveStatus status = SolveStatus::NumericalFailure;
  double objective = 0.0;       // c.x (maximization sense)
  double dual_objective = 0.0;  // b.y
  std::vector<double> free_values;
  std::vector<double> nonneg_values;
  std::vector<Eigen::VectorXd> product_values;
  std::vector<HMat> psd_values;
  std::vector<double> y;  // equality multipliers
  std::vector<double> nonneg_duals;
  std::vector<HMat> psd_duals;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;  // relative duality gap
  int iterations = 0;
  std::vector<double> farkas_y;  // certificate direction when infeasible
  std::string message;
};

struct SolverOptions {
  int max_iterations = 200;
  double feasibility_tol = 1e-9;
  double gap_tol = 1e-9;
  // accepted (weaker) exit thresholds of the solution contract
  double accept_feasibility = 1e-8;
  double accept_gap = 1e-7;
  bool verbose = false;
};

ConicSolution solve(const ConicProblem& p, const SolverOptions& opts = {});

struct VerifyReport {
  bool pass = false;
  double max_equality_violation = 0.0;
  double min_cone_eigenvalue = 0.0;  // over nonneg scalars and PSD blocks
  double rel_gap = 0.0;
  std::vector<std::pair<int, double>> violations;  // rows above tolerance
  std::string summary() const;
};

/// Recomputes every constraint violation from problem data, independent of
/// solver internals.
VerifyReport verify_solution(const ConicProblem& p, const ConicSolution& sol,
                             double tol = 1e-8);

}  // namespace lhv
