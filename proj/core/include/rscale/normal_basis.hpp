#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rscale {

/// Gauss-Legendre nodes and weights on [0, 1] (Golub-Welsch).
struct Quadrature {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
Quadrature gauss_legendre_01(int n);

/// Polynomial collocation basis on [0, 1]: Chebyshev-Lobatto nodes with both
/// endpoints, cardinal (Lagrange) representation by nodal values, barycentric
/// differentiation matrices exact on P_{M-1}, and the exact L2 mass matrix.
class NormalBasis {
 public:
  explicit NormalBasis(int size, int max_derivative = 8);

  int size() const { return static_cast<int>(nodes_.size()); }
  int max_derivative() const { return static_cast<int>(diff_powers_.size()) - 1; }
  const Eigen::VectorXd& nodes() const { return nodes_; }

  /// d^k/dt^k on nodal values; k = 0 is the identity.
  const Eigen::MatrixXd& diff_power(int k) const;
  const Eigen::MatrixXd& diff() const { return diff_power(1); }

  /// L2(0,1) Gram matrix of the cardinal functions.
  const Eigen::MatrixXd& mass() const { return mass_; }

  /// Row functional evaluating the interpolant at t.
  Eigen::RowVectorXd eval_row(double t) const;

  /// Row functional of d^k/dt^k at the endpoint t = end (end in {0, 1}).
  Eigen::RowVectorXd endpoint_derivative_row(int end, int k) const;

  /// Values of the cardinal functions at the quadrature nodes (nq x M).
  const Eigen::MatrixXd& eval_at_quad() const { return eval_quad_; }
  const Quadrature& quadrature() const { return quad_; }

 private:
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;  // barycentric weights
  std::vector<Eigen::MatrixXd> diff_powers_;
  Eigen::MatrixXd mass_;
  Quadrature quad_;
  Eigen::MatrixXd eval_quad_;
};

}  // namespace rscale
