#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "rscale/function_param.hpp"

namespace rscale {

/// Admissible pair of quadratic forms on a shared finite basis. gram1 must
/// dominate gram0; construction rescales gram1 by a constant when needed so
/// that every generalized eigenvalue of (gram1, gram0) is >= 1, pinning the
/// generating spectrum at or above 1.
class HilbertPair {
 public:
  HilbertPair(Eigen::MatrixXd gram0, Eigen::MatrixXd gram1);

  static HilbertPair diagonal(const Eigen::VectorXd& w0, const Eigen::VectorXd& w1);

  int dim() const { return static_cast<int>(gram0_.rows()); }
  const Eigen::MatrixXd& gram0() const { return gram0_; }
  const Eigen::MatrixXd& gram1() const { return gram1_; }

  /// Constant applied to gram1 by the normalization step (1 when untouched).
  double applied_scale() const { return applied_scale_; }

  double norm0(const Eigen::VectorXd& u) const;
  double norm1(const Eigen::VectorXd& u) const;

 private:
  Eigen::MatrixXd gram0_, gram1_;
  double applied_scale_ = 1.0;
};

/// Spectral decomposition of the generating operator J of an admissible pair:
/// gram1 v = lambda^2 gram0 v with gram0-orthonormal eigenvectors. J is then
/// V diag(lambda) V^T gram0, self-adjoint positive definite in the gram0
/// geometry and an isometry between the two forms.
class GeneratingOperator {
 public:
  explicit GeneratingOperator(const HilbertPair& pair);

  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }
  const Eigen::MatrixXd& gram0() const { return gram0_; }

  /// Matrix of J acting on coefficients.
  Eigen::MatrixXd matrix() const;

  /// Gram matrix of the graph norm |u|_0^2 + |psi(J)u|_0^2 assembled in the
  /// original basis: gram0 V diag(1 + psi(lambda)^2) V^T gram0.
  Eigen::MatrixXd interpolation_form(const FunctionParameter& psi) const;

  /// Relative residual of gram1 against the reconstructed J-form.
  double reconstruction_residual() const { return residual_; }

 private:
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd vectors_;  // columns gram0-orthonormal
  Eigen::MatrixXd gram0_;
  double residual_ = 0;
};

GeneratingOperator generating_operator(const HilbertPair& pair);

/// X_psi form of the pair via the generating operator's spectral calculus.
Eigen::MatrixXd interp_form(const HilbertPair& pair, const FunctionParameter& psi);

/// Largest generalized singular value of T : (X, gx) -> (Y, gy).
double form_operator_norm(const Eigen::MatrixXd& T, const Eigen::MatrixXd& gx,
                          const Eigen::MatrixXd& gy);

struct OperatorBounds {
  double norm0 = 0;
  double norm1 = 0;
  double norm_psi = 0;
  /// norm_psi / max(norm0, norm1); the interpolation certificate constant.
  double certificate = 0;
};

/// Operator norms of T under the endpoint forms and the X_psi forms. psi must
/// be regularly varying of order theta in (0,1) and positive.
OperatorBounds interp_operator_bound(const HilbertPair& X, const HilbertPair& Y,
                                     const Eigen::MatrixXd& T, const FunctionParameter& psi);

/// Block-diagonal pair of the factors; interpolation of the product equals
/// the direct sum of the factor interpolations exactly.
HilbertPair product_pair(std::span<const HilbertPair> factors);

struct ReiterationReport {
  /// Extreme generalized eigenvalues of ([X_zeta, X_eta]_chi form, X_psi form)
  /// with psi = reiterate(zeta, eta, chi); the squared equivalence constants.
  double ratio_min = 0;
  double ratio_max = 0;
};

ReiterationReport reiteration_check(const HilbertPair& pair, const FunctionParameter& zeta,
                                    const FunctionParameter& eta, const FunctionParameter& chi);

struct FredholmReport {
  int kernel_dim0 = 0, kernel_dim1 = 0, kernel_dim_psi = 0;
  int codim0 = 0, codim1 = 0, codim_psi = 0;
  int index0 = 0, index1 = 0, index_psi = 0;
  bool consistent = false;  // dims, codims and index agree across the forms
};

/// Numerical rank bookkeeping of T under the three form geometries. Singular
/// values below rel_zero * sigma_max count as zero; values inside
/// [rel_ambiguous, rel_zero] * sigma_max abort with an error instead of
/// guessing the rank.
FredholmReport fredholm_interp_check(const HilbertPair& X, const HilbertPair& Y,
                                     const Eigen::MatrixXd& T, const FunctionParameter& psi,
                                     double rel_zero = 1e-8, double rel_ambiguous = 1e-10);

}  // namespace rscale
