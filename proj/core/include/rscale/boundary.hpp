#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>

#include "rscale/space_index.hpp"

namespace rscale {

/// Distribution on the boundary Gamma of the cylinder: two circles (t = 0 and
/// t = 1), each carried by Fourier coefficients against e^{i xi theta} with
/// |xi| <= K, normalized so the constant 1 has coefficient 1 at xi = 0.
class BoundaryElement {
 public:
  explicit BoundaryElement(int truncation)
      : trunc_(truncation),
        data_{Eigen::VectorXcd::Zero(2 * truncation + 1),
              Eigen::VectorXcd::Zero(2 * truncation + 1)} {}

  int truncation() const { return trunc_; }
  Eigen::VectorXcd& circle(int c) { return data_.at(c); }
  const Eigen::VectorXcd& circle(int c) const { return data_.at(c); }
  std::complex<double>& at(int c, int xi) { return data_.at(c)[xi + trunc_]; }
  std::complex<double> at(int c, int xi) const { return data_.at(c)[xi + trunc_]; }

  BoundaryElement& operator+=(const BoundaryElement& other);
  BoundaryElement& operator*=(double a);

 private:
  int trunc_;
  std::array<Eigen::VectorXcd, 2> data_;
};

/// <xi> on a boundary circle.
inline double circle_modulus(int xi) { return std::sqrt(1.0 + static_cast<double>(xi) * xi); }

/// Direct Fourier-weighted norm, summed over the two boundary circles.
double norm_gamma(const BoundaryElement& g, const SpaceIndex& idx);

/// L2(Gamma) pairing (g, h) = sum_circles sum_xi g conj(h).
std::complex<double> pairing_gamma(const BoundaryElement& g, const BoundaryElement& h);

/// Two-chart atlas of a circle: arcs (-3pi/4, 3pi/4) and (pi/4, 7pi/4) with a
/// smooth bump partition of unity; chart maps are arc-length identifications.
class CircleAtlas {
 public:
  CircleAtlas();

  /// Partition-of-unity value of chart j in {0, 1} at angle theta.
  double bump(int chart, double theta) const;

  /// Fourier coefficients of the chart-j bump, |xi| <= cutoff.
  Eigen::VectorXcd bump_coefficients(int chart, int cutoff) const;
};

/// Atlas realization of the Gamma norm: sum over charts and circles of the
/// weighted norm of (chi_j g) expanded at an extended cutoff.
double norm_gamma_atlas(const BoundaryElement& g, const SpaceIndex& idx,
                        const CircleAtlas& atlas = CircleAtlas());

/// Naive DFT: coefficients (|xi| <= cutoff) of a 2pi-periodic callable
/// sampled on an oversampled uniform grid.
Eigen::VectorXcd tangential_coefficients(const std::function<std::complex<double>(double)>& fn,
                                         int cutoff, int oversample = 4);

/// Pointwise multiplication on a circle: coefficients of (chi * g), truncated
/// back to the truncation of g unless extend keeps the full bandwidth.
/// chi_hat spans |xi| <= (size-1)/2.
Eigen::VectorXcd circle_multiply(const Eigen::VectorXcd& g_hat, const Eigen::VectorXcd& chi_hat,
                                 bool extend = false);

}  // namespace rscale
