#include "rscale/hilbert_pair.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rscale {

namespace {

void require_symmetric(const Eigen::MatrixXd& g, const char* who) {
  if (g.rows() != g.cols()) throw std::invalid_argument(std::string(who) + ": matrix not square");
  const double scale = g.cwiseAbs().maxCoeff();
  if (scale == 0) throw std::invalid_argument(std::string(who) + ": zero matrix");
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale)
    throw std::invalid_argument(std::string(who) + ": matrix not Hermitian (defect " +
                                std::to_string(asym / scale) + ")");
}

void require_positive_definite(const Eigen::MatrixXd& g, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(who) + ": eigensolver failure");
  if (!(es.eigenvalues().minCoeff() > 0))
    throw std::invalid_argument(std::string(who) + ": form not positive definite");
}

Eigen::MatrixXd symmetrized(Eigen::MatrixXd g) {
  g = 0.5 * (g + g.transpose()).eval();
  return g;
}

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
  if (es.info() != Eigen::Success) throw std::runtime_error("sqrt_spd: eigensolver failure");
  return es.operatorSqrt();
}

}  // namespace

HilbertPair::HilbertPair(Eigen::MatrixXd gram0, Eigen::MatrixXd gram1)
    : gram0_(std::move(gram0)), gram1_(std::move(gram1)) {
  require_symmetric(gram0_, "HilbertPair gram0");
  require_symmetric(gram1_, "HilbertPair gram1");
  if (gram0_.rows() != gram1_.rows())
    throw std::invalid_argument("HilbertPair: dimension mismatch");
  gram0_ = symmetrized(std::move(gram0_));
  gram1_ = symmetrized(std::move(gram1_));
  require_positive_definite(gram0_, "HilbertPair gram0");
  require_positive_definite(gram1_, "HilbertPair gram1");

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(gram1_, gram0_,
                                                                Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("HilbertPair: generalized eigensolver failure");
  const double mu_min = ges.eigenvalues().minCoeff();
  if (!(mu_min > 0)) throw std::invalid_argument("HilbertPair: invalid pair, gram1 degenerate");
  if (mu_min < 1.0) {
    applied_scale_ = 1.0 / mu_min;
    gram1_ *= applied_scale_;
  }
}

HilbertPair HilbertPair::diagonal(const Eigen::VectorXd& w0, const Eigen::VectorXd& w1) {
  if (w0.size() != w1.size()) throw std::invalid_argument("HilbertPair::diagonal: size mismatch");
  return HilbertPair(w0.asDiagonal().toDenseMatrix(), w1.asDiagonal().toDenseMatrix());
}

double HilbertPair::norm0(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(gram0_ * u)));
}

double HilbertPair::norm1(const Eigen::VectorXd& u) const {
  return std::sqrt(std::max(0.0, u.dot(gram1_ * u)));
}

GeneratingOperator::GeneratingOperator(const HilbertPair& pair) : gram0_(pair.gram0()) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(pair.gram1(), pair.gram0());
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("GeneratingOperator: eigensolver failure");
  const Eigen::VectorXd mu = ges.eigenvalues();
  if (!(mu.minCoeff() > 0))
    throw std::runtime_error("GeneratingOperator: non-positive generalized eigenvalue");
  lambda_ = mu.cwiseSqrt();
  vectors_ = ges.eigenvectors();  // V with V^T gram0 V = I

  const Eigen::MatrixXd recon =
      gram0_ * vectors_ * mu.asDiagonal() * vectors_.transpose() * gram0_;
  residual_ = (recon - pair.gram1()).norm() / pair.gram1().norm();
  if (residual_ > 1e-10)
    throw std::runtime_error("GeneratingOperator: reconstruction residual " +
                             std::to_string(residual_));
}

Eigen::MatrixXd GeneratingOperator::matrix() const {
  return vectors_ * lambda_.asDiagonal() * vectors_.transpose() * gram0_;
}

Eigen::MatrixXd GeneratingOperator::interpolation_form(const FunctionParameter& psi) const {
  Eigen::VectorXd w(lambda_.size());
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    const double p = psi(lambda_[i]);
    w[i] = 1.0 + p * p;
  }
  return symmetrized(gram0_ * vectors_ * w.asDiagonal() * vectors_.transpose() * gram0_);
}

GeneratingOperator generating_operator(const HilbertPair& pair) {
  return GeneratingOperator(pair);
}

Eigen::MatrixXd interp_form(const HilbertPair& pair, const FunctionParameter& psi) {
  return GeneratingOperator(pair).interpolation_form(psi);
}

double form_operator_norm(const Eigen::MatrixXd& T, const Eigen::MatrixXd& gx,
                          const Eigen::MatrixXd& gy) {
  if (T.cols() != gx.rows() || T.rows() != gy.rows())
    throw std::invalid_argument("form_operator_norm: dimension mismatch");
  const Eigen::MatrixXd m = symmetrized(T.transpose() * gy * T);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(m, gx, Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("form_operator_norm: eigensolver failure");
  return std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
}

OperatorBounds interp_operator_bound(const HilbertPair& X, const HilbertPair& Y,
                                     const Eigen::MatrixXd& T, const FunctionParameter& psi) {
  if (T.cols() != X.dim() || T.rows() != Y.dim())
    throw std::invalid_argument("interp_operator_bound: dimension mismatch");
  if (!(psi.order() > 0.0) || !(psi.order() < 1.0))
    throw std::invalid_argument(
        "interp_operator_bound: psi must be regularly varying of order in (0,1)");
  OperatorBounds b;
  b.norm0 = form_operator_norm(T, X.gram0(), Y.gram0());
  b.norm1 = form_operator_norm(T, X.gram1(), Y.gram1());
  b.norm_psi = form_operator_norm(T, interp_form(X, psi), interp_form(Y, psi));
  const double endpoint = std::max(b.norm0, b.norm1);
  b.certificate = endpoint > 0 ? b.norm_psi / endpoint : 0.0;
  return b;
}

HilbertPair product_pair(std::span<const HilbertPair> factors) {
  if (factors.empty()) throw std::invalid_argument("product_pair: empty sequence");
  int n = 0;
  for (const HilbertPair& p : factors) n += p.dim();
  Eigen::MatrixXd g0 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd g1 = Eigen::MatrixXd::Zero(n, n);
  int at = 0;
  for (const HilbertPair& p : factors) {
    const int d = p.dim();
    g0.block(at, at, d, d) = p.gram0();
    g1.block(at, at, d, d) = p.gram1();
    at += d;
  }
  return HilbertPair(std::move(g0), std::move(g1));
}

ReiterationReport reiteration_check(const HilbertPair& pair, const FunctionParameter& zeta,
                                    const FunctionParameter& eta, const FunctionParameter& chi) {
  const GeneratingOperator J(pair);
  Eigen::MatrixXd g_zeta = J.interpolation_form(zeta);
  Eigen::MatrixXd g_eta = J.interpolation_form(eta);
  const HilbertPair inner(std::move(g_zeta), std::move(g_eta));
  const Eigen::MatrixXd outer = interp_form(inner, chi);

  const FunctionParameter psi = reiterate(zeta, eta, chi);
  const Eigen::MatrixXd direct = J.interpolation_form(psi);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(outer, direct,
                                                                Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success)
    throw std::runtime_error("reiteration_check: eigensolver failure");
  return ReiterationReport{ges.eigenvalues().minCoeff(), ges.eigenvalues().maxCoeff()};
}

namespace {

int rank_with_guard(const Eigen::VectorXd& sigma, double rel_zero, double rel_ambiguous) {
  const double smax = sigma.size() ? sigma.maxCoeff() : 0.0;
  if (smax == 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    const double rel = sigma[i] / smax;
    if (rel >= rel_zero) {
      ++rank;
    } else if (rel > rel_ambiguous) {
      throw std::runtime_error("fredholm_interp_check: rank decision ambiguous, sigma/sigma_max=" +
                               std::to_string(rel));
    }
  }
  return rank;
}

}  // namespace

FredholmReport fredholm_interp_check(const HilbertPair& X, const HilbertPair& Y,
                                     const Eigen::MatrixXd& T, const FunctionParameter& psi,
                                     double rel_zero, double rel_ambiguous) {
  if (T.cols() != X.dim() || T.rows() != Y.dim())
    throw std::invalid_argument("fredholm_interp_check: dimension mismatch");
  const int n = X.dim();
  const int m = Y.dim();

  const auto weighted_rank = [&](const Eigen::MatrixXd& gx, const Eigen::MatrixXd& gy) {
    // Singular values of gy^{1/2} T gx^{-1/2}.
    const Eigen::MatrixXd sx = sqrt_spd(gx);
    const Eigen::MatrixXd sy = sqrt_spd(gy);
    const Eigen::MatrixXd a = sy * T * sx.inverse();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    return rank_with_guard(svd.singularValues(), rel_zero, rel_ambiguous);
  };

  FredholmReport rep;
  const int r0 = weighted_rank(X.gram0(), Y.gram0());
  const int r1 = weighted_rank(X.gram1(), Y.gram1());
  const int rp = weighted_rank(interp_form(X, psi), interp_form(Y, psi));
  rep.kernel_dim0 = n - r0;
  rep.kernel_dim1 = n - r1;
  rep.kernel_dim_psi = n - rp;
  rep.codim0 = m - r0;
  rep.codim1 = m - r1;
  rep.codim_psi = m - rp;
  rep.index0 = rep.kernel_dim0 - rep.codim0;
  rep.index1 = rep.kernel_dim1 - rep.codim1;
  rep.index_psi = rep.kernel_dim_psi - rep.codim_psi;
  rep.consistent = (rep.kernel_dim0 == rep.kernel_dim1 && rep.kernel_dim1 == rep.kernel_dim_psi &&
                    rep.codim0 == rep.codim1 && rep.codim1 == rep.codim_psi);
  return rep;
}

}  // namespace rscale
