#include "rscale/cylinder.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rscale {

namespace {

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void check_omega_domain(const SpaceIndex& idx, const char* who) {
  if (idx.domain == Domain::Gamma || idx.domain == Domain::Lattice)
    throw std::invalid_argument(std::string(who) + ": index domain must be omega");
}

}  // namespace

CylinderElement& CylinderElement::operator+=(const CylinderElement& other) {
  if (other.trunc_ != trunc_ || other.values_.rows() != values_.rows())
    throw std::invalid_argument("CylinderElement: shape mismatch");
  values_ += other.values_;
  return *this;
}

CylinderElement& CylinderElement::operator-=(const CylinderElement& other) {
  if (other.trunc_ != trunc_ || other.values_.rows() != values_.rows())
    throw std::invalid_argument("CylinderElement: shape mismatch");
  values_ -= other.values_;
  return *this;
}

CylinderElement& CylinderElement::operator*=(std::complex<double> a) {
  values_ *= a;
  return *this;
}

CylinderGeometry::CylinderGeometry(int normal_size, int normal_cutoff, int max_derivative)
    : basis_(normal_size, max_derivative),
      cutoff_(normal_cutoff > 0 ? normal_cutoff : 5 * normal_size) {
  // Zero-extension coefficients against the orthonormal modes e^{i pi eta t}/sqrt(2)
  // of the circumference-2 circle: E[eta, j] = (1/sqrt 2) int_0^1 l_j e^{-i pi eta t}.
  const int m = basis_.size();
  const Quadrature quad = gauss_legendre_01(2 * m + 2 * cutoff_);
  Eigen::MatrixXd cardinal_at_quad(quad.nodes.size(), m);
  for (Eigen::Index i = 0; i < quad.nodes.size(); ++i)
    cardinal_at_quad.row(i) = basis_.eval_row(quad.nodes[i]);
  extension_.resize(cutoff_ + 1, m);
  for (int eta = 0; eta <= cutoff_; ++eta) {
    Eigen::VectorXcd phase(quad.nodes.size());
    for (Eigen::Index i = 0; i < quad.nodes.size(); ++i)
      phase[i] = std::exp(std::complex<double>(0, -M_PI * eta * quad.nodes[i])) * quad.weights[i];
    extension_.row(eta) = (cardinal_at_quad.transpose() * phase).transpose() / std::sqrt(2.0);
  }
}

double CylinderGeometry::torus_modulus(double abs_xi, int eta) const {
  return std::sqrt(1.0 + abs_xi * abs_xi + M_PI * M_PI * eta * eta);
}

const Eigen::MatrixXd& CylinderGeometry::cached(const std::string& key,
                                                const std::function<Eigen::MatrixXd()>& make) {
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Eigen::MatrixXd value = make();
  std::unique_lock lock(mutex_);
  return cache_.try_emplace(key, std::move(value)).first->second;
}

Eigen::MatrixXd CylinderGeometry::extension_factor(double abs_xi, double s,
                                                   const FunctionParameter& phi) const {
  // Real factor B with B^T B = E^H G^{-s-weights} E: the zero-extension rows
  // scaled by the square roots of the mode weights, +-eta folded into
  // real/imaginary parts.
  const int m = basis_.size();
  Eigen::MatrixXd b(2 * cutoff_ + 1, m);
  b.row(0) =
      std::sqrt(space_weight(s, phi, torus_modulus(abs_xi, 0))) * extension_.row(0).real();
  for (int eta = 1; eta <= cutoff_; ++eta) {
    const double amp = std::sqrt(2.0 * space_weight(s, phi, torus_modulus(abs_xi, eta)));
    b.row(2 * eta - 1) = amp * extension_.row(eta).real();
    b.row(2 * eta) = amp * extension_.row(eta).imag();
  }
  return b;
}

const Eigen::MatrixXd& CylinderGeometry::omega_gram(int abs_xi, double s,
                                                    const FunctionParameter& phi) {
  if (s <= -0.5)
    throw std::invalid_argument("omega_gram: quotient branch needs s > -1/2");
  const std::string key =
      "omega|" + std::to_string(abs_xi) + "|" + fmt_double(s) + "|" + phi.label();
  return cached(key, [&]() {
    // Minimum-norm extension with the restriction prescribed through the
    // L2(0,1) moments against the cardinal basis: the Gram on nodal values is
    // W (E^H G^{-1} E)^{-1} W. Assembled through the real factor B with
    // B^T B = E^H G^{-1} E and its SVD, which keeps the extreme directions
    // accurate at large |s| where the moment matrix is nearly rank deficient.
    const Eigen::MatrixXd b = extension_factor(abs_xi, -s, reciprocal(phi));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinV);
    const Eigen::VectorXd sigma = svd.singularValues();
    if (!(sigma.minCoeff() > 0) || sigma.maxCoeff() / sigma.minCoeff() > 3e9)
      throw std::runtime_error("omega_gram: ill-conditioned restriction map at s=" +
                               std::to_string(s) + " (extreme smoothness order)");
    const Eigen::MatrixXd wv = basis_.mass() * svd.matrixV();
    Eigen::MatrixXd gram = wv * sigma.cwiseAbs2().cwiseInverse().asDiagonal() * wv.transpose();
    gram = 0.5 * (gram + gram.transpose()).eval();
    return gram;
  });
}

const Eigen::MatrixXd& CylinderGeometry::dual_gram(int abs_xi, double s,
                                                   const FunctionParameter& phi) {
  if (!(s < 0)) throw std::invalid_argument("dual_gram: dual branch needs s < 0");
  // Finite-dimensional duality is exact here: the dual of the quotient space
  // at (-s, 1/phi) under the L2(Omega) pairing is the zero-extension form at
  // (s, phi). One code path serves both sides of the scale.
  return supported_gram(abs_xi, s, phi);
}

const Eigen::MatrixXd& CylinderGeometry::supported_gram(int abs_xi, double s,
                                                        const FunctionParameter& phi) {
  const std::string key =
      "supported|" + std::to_string(abs_xi) + "|" + fmt_double(s) + "|" + phi.label();
  return cached(key, [&]() {
    const Eigen::MatrixXd b = extension_factor(abs_xi, s, phi);
    Eigen::MatrixXd gram = b.transpose() * b;
    gram = 0.5 * (gram + gram.transpose()).eval();
    return gram;
  });
}

const Eigen::MatrixXd& CylinderGeometry::zero_branch_gram(int abs_xi, double s,
                                                          const FunctionParameter& phi) {
  return s >= 0 ? omega_gram(abs_xi, s, phi) : dual_gram(abs_xi, s, phi);
}

const Eigen::MatrixXd& CylinderGeometry::modified_gram(int abs_xi, double s,
                                                       const FunctionParameter& phi, int r) {
  if (r < 1) throw std::invalid_argument("modified_gram: r must be >= 1");
  if (r >= basis_.max_derivative())
    throw std::invalid_argument("modified_gram: r exceeds basis differentiability");
  const std::string key = "modified|" + std::to_string(abs_xi) + "|" + fmt_double(s) + "|" +
                          phi.label() + "|r=" + std::to_string(r);
  return cached(key, [&]() {
    Eigen::MatrixXd gram = zero_branch_gram(abs_xi, s, phi);
    const double h = std::sqrt(1.0 + static_cast<double>(abs_xi) * abs_xi);
    for (int k = 1; k <= r; ++k) {
      const double w = space_weight(s - k + 0.5, phi, h);
      for (int end = 0; end < 2; ++end) {
        const Eigen::RowVectorXd row = basis_.endpoint_derivative_row(end, k - 1);
        gram += w * (row.transpose() * row);
      }
    }
    return gram;
  });
}

const Eigen::MatrixXd& CylinderGeometry::critical_gram(int abs_xi, double s,
                                                       const FunctionParameter& phi, int r,
                                                       double eps) {
  if (!(eps > 0) || !(eps < 1))
    throw std::invalid_argument("critical_gram: eps must be in (0,1)");
  const std::string key = "critical|" + std::to_string(abs_xi) + "|" + fmt_double(s) + "|" +
                          phi.label() + "|r=" + std::to_string(r) + "|eps=" + fmt_double(eps);
  return cached(key, [&]() {
    const Eigen::MatrixXd g_lo = modified_gram(abs_xi, s - eps, phi, r);
    const Eigen::MatrixXd g_hi = modified_gram(abs_xi, s + eps, phi, r);
    const HilbertPair pair(g_lo, g_hi);
    return interp_form(pair, FunctionParameter::power(0.5));
  });
}

double form_norm(const Eigen::MatrixXd& gram, const Eigen::VectorXcd& v) {
  const std::complex<double> q = v.adjoint() * gram * v;
  return std::sqrt(std::max(0.0, q.real()));
}

namespace {

template <typename GramFn>
double accumulate_norm(const CylinderElement& u, GramFn&& gram_of) {
  double acc = 0;
  for (int xi = -u.truncation(); xi <= u.truncation(); ++xi) {
    const Eigen::VectorXcd v = u.mode(xi);
    if (v.isZero(0)) continue;
    const double n = form_norm(gram_of(std::abs(xi)), v);
    acc += n * n;
  }
  return std::sqrt(acc);
}

}  // namespace

double norm_omega(const CylinderElement& u, const SpaceIndex& idx, CylinderGeometry& geom) {
  check_omega_domain(idx, "norm_omega");
  if (idx.s < 0) throw std::invalid_argument("norm_omega: s must be >= 0 (use norm_dual)");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.omega_gram(a, idx.s, idx.phi);
  });
}

double norm_dual(const CylinderElement& u, const SpaceIndex& idx, CylinderGeometry& geom) {
  check_omega_domain(idx, "norm_dual");
  if (!(idx.s < 0)) throw std::invalid_argument("norm_dual: s must be < 0");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.dual_gram(a, idx.s, idx.phi);
  });
}

double norm_supported(const CylinderElement& u, const SpaceIndex& idx, CylinderGeometry& geom) {
  check_omega_domain(idx, "norm_supported");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.supported_gram(a, idx.s, idx.phi);
  });
}

double norm_zero_branch(const CylinderElement& u, const SpaceIndex& idx, CylinderGeometry& geom) {
  check_omega_domain(idx, "norm_zero_branch");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.zero_branch_gram(a, idx.s, idx.phi);
  });
}

double norm_modified(const CylinderElement& u, const SpaceIndex& idx, CylinderGeometry& geom) {
  check_omega_domain(idx, "norm_modified");
  if (idx.r < 1) throw std::invalid_argument("norm_modified: index must carry r >= 1");
  if (idx.is_critical())
    throw std::invalid_argument("norm_modified: s lies in E_r, use interp_modified");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.modified_gram(a, idx.s, idx.phi, idx.r);
  });
}

double interp_modified(const CylinderElement& u, double s, const FunctionParameter& phi, int r,
                       double eps, CylinderGeometry& geom) {
  if (!(eps > 0) || !(eps < 1))
    throw std::invalid_argument("interp_modified: eps must be in (0,1)");
  SpaceIndex idx{s, phi, Domain::Omega, r};
  if (!idx.is_critical())
    throw std::invalid_argument("interp_modified: s must lie in E_r");
  return accumulate_norm(u, [&](int a) -> const Eigen::MatrixXd& {
    return geom.critical_gram(a, s, phi, r, eps);
  });
}

double norm_l2(const CylinderElement& u, CylinderGeometry& geom) {
  return accumulate_norm(u, [&](int) -> const Eigen::MatrixXd& { return geom.basis().mass(); });
}

std::complex<double> pairing_omega(const CylinderElement& u, const CylinderElement& v,
                                   CylinderGeometry& geom) {
  if (u.truncation() != v.truncation() || u.normal_size() != v.normal_size())
    throw std::invalid_argument("pairing_omega: shape mismatch");
  const Eigen::MatrixXd& w = geom.basis().mass();
  std::complex<double> acc = 0;
  for (int xi = -u.truncation(); xi <= u.truncation(); ++xi)
    acc += v.mode(xi).dot(w * u.mode(xi).eval());  // dot conjugates v
  return acc;
}

BoundaryElement trace(const CylinderElement& u, int k, CylinderGeometry& geom) {
  if (k < 1) throw std::invalid_argument("trace: k must be >= 1");
  const int K = u.truncation();
  BoundaryElement g(K);
  // D_nu = i d/dnu; inward normal is +t at t=0 and -t at t=1.
  const std::complex<double> phase0 = std::pow(std::complex<double>(0, 1), k - 1);
  const std::complex<double> phase1 = std::pow(std::complex<double>(0, -1), k - 1);
  const Eigen::RowVectorXd row0 = geom.basis().endpoint_derivative_row(0, k - 1);
  const Eigen::RowVectorXd row1 = geom.basis().endpoint_derivative_row(1, k - 1);
  for (int xi = -K; xi <= K; ++xi) {
    g.at(0, xi) = phase0 * (row0 * u.mode(xi).eval())(0);
    g.at(1, xi) = phase1 * (row1 * u.mode(xi).eval())(0);
  }
  return g;
}

std::complex<double> evaluate(const CylinderElement& u, double theta, double t,
                              CylinderGeometry& geom) {
  const Eigen::RowVectorXd row = geom.basis().eval_row(t);
  std::complex<double> acc = 0;
  for (int xi = -u.truncation(); xi <= u.truncation(); ++xi) {
    const std::complex<double> profile = (row * u.mode(xi).eval())(0);
    acc += profile * std::exp(std::complex<double>(0, xi * theta));
  }
  return acc;
}

CylinderElement sample_cylinder(int truncation, CylinderGeometry& geom,
                                const std::function<std::complex<double>(double, double)>& fn) {
  const int K = truncation;
  const int n = 2 * K + 1;
  const int m = geom.normal_size();
  CylinderElement u(K, m);
  Eigen::MatrixXcd values(m, n);
  for (int col = 0; col < n; ++col) {
    const double theta = 2.0 * M_PI * col / n;
    for (int j = 0; j < m; ++j) values(j, col) = fn(theta, geom.basis().nodes()[j]);
  }
  for (int xi = -K; xi <= K; ++xi) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
    for (int col = 0; col < n; ++col) {
      const double theta = 2.0 * M_PI * col / n;
      acc += values.col(col) * std::exp(std::complex<double>(0, -xi * theta));
    }
    u.mode(xi) = acc / static_cast<double>(n);
  }
  return u;
}

CylinderElement multiply_tangential(const CylinderElement& u, const Eigen::VectorXcd& chi_hat,
                                    bool extend) {
  if (chi_hat.size() % 2 == 0)
    throw std::invalid_argument("multiply_tangential: coefficient vector must have odd length");
  const int K = u.truncation();
  const int Kc = static_cast<int>(chi_hat.size() / 2);
  const int Kout = extend ? K + Kc : K;
  CylinderElement out(Kout, u.normal_size());
  for (int xi = -Kout; xi <= Kout; ++xi) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(u.normal_size());
    for (int nu = -Kc; nu <= Kc; ++nu) {
      const int mu = xi - nu;
      if (mu < -K || mu > K) continue;
      acc += chi_hat[nu + Kc] * u.mode(mu);
    }
    out.mode(xi) = acc;
  }
  return out;
}

}  // namespace rscale
