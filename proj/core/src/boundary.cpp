#include "rscale/boundary.hpp"

#include <cmath>
#include <stdexcept>

namespace rscale {

BoundaryElement& BoundaryElement::operator+=(const BoundaryElement& other) {
  if (other.trunc_ != trunc_) throw std::invalid_argument("BoundaryElement: truncation mismatch");
  data_[0] += other.data_[0];
  data_[1] += other.data_[1];
  return *this;
}

BoundaryElement& BoundaryElement::operator*=(double a) {
  data_[0] *= a;
  data_[1] *= a;
  return *this;
}

double norm_gamma(const BoundaryElement& g, const SpaceIndex& idx) {
  if (idx.domain != Domain::Gamma)
    throw std::invalid_argument("norm_gamma: index domain must be gamma");
  const int K = g.truncation();
  double acc = 0;
  for (int c = 0; c < 2; ++c) {
    for (int xi = -K; xi <= K; ++xi) {
      const double a = std::norm(g.at(c, xi));
      if (a == 0) continue;
      acc += space_weight(idx.s, idx.phi, circle_modulus(xi)) * a;
    }
  }
  return std::sqrt(acc);
}

std::complex<double> pairing_gamma(const BoundaryElement& g, const BoundaryElement& h) {
  if (g.truncation() != h.truncation())
    throw std::invalid_argument("pairing_gamma: truncation mismatch");
  std::complex<double> acc = 0;
  for (int c = 0; c < 2; ++c) acc += h.circle(c).dot(g.circle(c));  // dot conjugates h
  return acc;
}

namespace {

double smooth_step(double x) {
  // C-infinity step: 0 for x <= 0, 1 for x >= 1.
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double wrap_angle(double theta) {
  theta = std::fmod(theta, 2.0 * M_PI);
  if (theta > M_PI) theta -= 2.0 * M_PI;
  if (theta < -M_PI) theta += 2.0 * M_PI;
  return theta;
}

}  // namespace

CircleAtlas::CircleAtlas() = default;

double CircleAtlas::bump(int chart, double theta) const {
  // chi_0 is 1 on |theta| <= pi/4, rolls off to 0 at |theta| = 3pi/4;
  // chi_1 = 1 - chi_0 lives on the complementary arc.
  const double a = std::abs(wrap_angle(theta));
  double chi0;
  if (a <= M_PI / 4) {
    chi0 = 1.0;
  } else if (a >= 3 * M_PI / 4) {
    chi0 = 0.0;
  } else {
    chi0 = smooth_step((3 * M_PI / 4 - a) / (M_PI / 2));
  }
  if (chart == 0) return chi0;
  if (chart == 1) return 1.0 - chi0;
  throw std::invalid_argument("CircleAtlas::bump: chart must be 0 or 1");
}

Eigen::VectorXcd CircleAtlas::bump_coefficients(int chart, int cutoff) const {
  return tangential_coefficients([this, chart](double th) { return bump(chart, th); }, cutoff);
}

Eigen::VectorXcd tangential_coefficients(const std::function<std::complex<double>(double)>& fn,
                                         int cutoff, int oversample) {
  const int n = std::max(oversample, 2) * (2 * cutoff + 1) + 1;
  Eigen::VectorXcd values(n);
  for (int m = 0; m < n; ++m) values[m] = fn(2.0 * M_PI * m / n);
  Eigen::VectorXcd coeffs(2 * cutoff + 1);
  for (int xi = -cutoff; xi <= cutoff; ++xi) {
    std::complex<double> acc = 0;
    for (int m = 0; m < n; ++m)
      acc += values[m] * std::exp(std::complex<double>(0, -xi * 2.0 * M_PI * m / n));
    coeffs[xi + cutoff] = acc / static_cast<double>(n);
  }
  return coeffs;
}

Eigen::VectorXcd circle_multiply(const Eigen::VectorXcd& g_hat, const Eigen::VectorXcd& chi_hat,
                                 bool extend) {
  if (g_hat.size() % 2 == 0 || chi_hat.size() % 2 == 0)
    throw std::invalid_argument("circle_multiply: coefficient vectors must have odd length");
  const int K = static_cast<int>(g_hat.size() / 2);
  const int Kc = static_cast<int>(chi_hat.size() / 2);
  const int Kout = extend ? K + Kc : K;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * Kout + 1);
  for (int xi = -Kout; xi <= Kout; ++xi) {
    std::complex<double> acc = 0;
    for (int nu = -Kc; nu <= Kc; ++nu) {
      const int mu = xi - nu;
      if (mu < -K || mu > K) continue;
      acc += chi_hat[nu + Kc] * g_hat[mu + K];
    }
    out[xi + Kout] = acc;
  }
  return out;
}

double norm_gamma_atlas(const BoundaryElement& g, const SpaceIndex& idx,
                        const CircleAtlas& atlas) {
  if (idx.domain != Domain::Gamma)
    throw std::invalid_argument("norm_gamma_atlas: index domain must be gamma");
  const int K = g.truncation();
  // Extended cutoff captures the bandwidth of the smooth product.
  const int Ke = 2 * K + 16;
  const SpaceIndex ext{idx.s, idx.phi, Domain::Gamma, 0};
  double acc = 0;
  for (int chart = 0; chart < 2; ++chart) {
    const Eigen::VectorXcd chi = atlas.bump_coefficients(chart, Ke);
    for (int c = 0; c < 2; ++c) {
      // Product at the extended cutoff: embed g's coefficients, convolve.
      Eigen::VectorXcd wide = Eigen::VectorXcd::Zero(2 * Ke + 1);
      wide.segment(Ke - K, 2 * K + 1) = g.circle(c);
      const Eigen::VectorXcd prod = circle_multiply(wide, chi);
      for (int xi = -Ke; xi <= Ke; ++xi) {
        const double a = std::norm(prod[xi + Ke]);
        if (a == 0) continue;
        acc += space_weight(ext.s, ext.phi, circle_modulus(xi)) * a;
      }
    }
  }
  return std::sqrt(acc);
}

}  // namespace rscale
