#include "rscale/normal_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace rscale {

Quadrature gauss_legendre_01(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes on
  // [-1, 1], weights are 2 * (first eigenvector component)^2.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  if (es.info() != Eigen::Success) throw std::runtime_error("gauss_legendre_01: eigensolver failure");
  Quadrature q;
  q.nodes = (es.eigenvalues().array() + 1.0) / 2.0;
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = es.eigenvectors()(0, i);
    q.weights[i] = v * v;  // 2 v^2 on [-1,1], halved by the affine map
  }
  return q;
}

NormalBasis::NormalBasis(int size, int max_derivative) {
  if (size < 4) throw std::invalid_argument("NormalBasis: need at least 4 nodes");
  if (max_derivative < 1 || max_derivative >= size)
    throw std::invalid_argument("NormalBasis: max_derivative must be in [1, size)");
  const int m = size;
  nodes_.resize(m);
  bary_.resize(m);
  for (int j = 0; j < m; ++j) {
    nodes_[j] = 0.5 * (1.0 - std::cos(M_PI * j / (m - 1)));
    bary_[j] = (j % 2 ? -1.0 : 1.0);
  }
  nodes_[0] = 0.0;
  nodes_[m - 1] = 1.0;
  bary_[0] *= 0.5;
  bary_[m - 1] *= 0.5;

  Eigen::MatrixXd d(m, m);
  for (int j = 0; j < m; ++j) {
    double row_sum = 0;
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      d(j, k) = (bary_[k] / bary_[j]) / (nodes_[j] - nodes_[k]);
      row_sum += d(j, k);
    }
    d(j, j) = -row_sum;  // negative sum trick
  }
  diff_powers_.resize(max_derivative + 1);
  diff_powers_[0] = Eigen::MatrixXd::Identity(m, m);
  diff_powers_[1] = d;
  for (int k = 2; k <= max_derivative; ++k) diff_powers_[k] = d * diff_powers_[k - 1];

  quad_ = gauss_legendre_01(m);
  eval_quad_.resize(m, m);
  for (int i = 0; i < m; ++i) eval_quad_.row(i) = eval_row(quad_.nodes[i]);
  mass_ = eval_quad_.transpose() * quad_.weights.asDiagonal() * eval_quad_;
  mass_ = 0.5 * (mass_ + mass_.transpose()).eval();
}

const Eigen::MatrixXd& NormalBasis::diff_power(int k) const {
  if (k < 0 || k >= static_cast<int>(diff_powers_.size()))
    throw std::out_of_range("NormalBasis::diff_power: derivative order " + std::to_string(k) +
                            " exceeds basis differentiability");
  return diff_powers_[k];
}

Eigen::RowVectorXd NormalBasis::eval_row(double t) const {
  const int m = size();
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    if (std::abs(t - nodes_[j]) < 1e-14) {
      row[j] = 1.0;
      return row;
    }
  }
  double denom = 0;
  for (int j = 0; j < m; ++j) {
    const double c = bary_[j] / (t - nodes_[j]);
    row[j] = c;
    denom += c;
  }
  row /= denom;
  return row;
}

Eigen::RowVectorXd NormalBasis::endpoint_derivative_row(int end, int k) const {
  if (end != 0 && end != 1) throw std::invalid_argument("endpoint_derivative_row: end in {0,1}");
  const Eigen::MatrixXd& dk = diff_power(k);
  return end == 0 ? dk.row(0) : dk.row(size() - 1);
}

}  // namespace rscale
