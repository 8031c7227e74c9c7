#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <vector>

#include "rscale/space_index.hpp"

namespace rscale {

/// Truncated integer frequency lattice Z^d, modes xi with |xi_i| <= K, with a
/// cached table of the smoothed modulus <xi> = (1 + |xi|^2)^{1/2}.
class FrequencyLattice {
 public:
  FrequencyLattice(int dim, int per_axis_truncation);

  int dim() const { return dim_; }
  int truncation() const { return trunc_; }
  int size() const { return size_; }

  /// Mode of a flat index as per-axis integers in [-K, K].
  std::vector<int> mode(int index) const;
  int flat_index(std::span<const int> mode) const;

  double abs2(int index) const { return abs2_[index]; }
  double smoothed_modulus(int index) const { return modulus_[index]; }

 private:
  int dim_, trunc_, size_;
  std::vector<double> abs2_, modulus_;
};

/// Finite vector of Fourier-type coefficients over a truncated lattice.
class SpectralElement {
 public:
  explicit SpectralElement(const FrequencyLattice& lattice, bool conjugate_symmetric = false)
      : lattice_(&lattice),
        coeffs_(Eigen::VectorXcd::Zero(lattice.size())),
        conjugate_symmetric_(conjugate_symmetric) {}

  const FrequencyLattice& lattice() const { return *lattice_; }
  Eigen::VectorXcd& coefficients() { return coeffs_; }
  const Eigen::VectorXcd& coefficients() const { return coeffs_; }
  std::complex<double>& at(std::span<const int> mode) {
    return coeffs_[lattice_->flat_index(mode)];
  }
  bool conjugate_symmetric() const { return conjugate_symmetric_; }

 private:
  const FrequencyLattice* lattice_;
  Eigen::VectorXcd coeffs_;
  bool conjugate_symmetric_;
};

/// ( sum_xi <xi>^{2s} phi(<xi>)^2 |u^(xi)|^2 )^{1/2} on the lattice.
double norm_lattice(const SpectralElement& u, const SpaceIndex& idx);

enum class IntegralVerdict { Converges, Diverges, Undecided };

const char* verdict_name(IntegralVerdict v);

struct HoermanderReport {
  double integral = 0;  // quadrature of int_1^{t_max} dt / (t phi(t)^2)
  double tail = 0;      // extrapolated remainder (infinite when divergent)
  IntegralVerdict verdict = IntegralVerdict::Undecided;
};

/// Convergence of int_1^inf dt/(t phi^2(t)), decided in closed form for the
/// log-power family and by increment trend otherwise. Requires phi in class M.
HoermanderReport hoermander_condition(const FunctionParameter& phi, double t_max = 1e8);

struct EmbeddingReport {
  double max_sample_ratio = 0;  // max |u|_lo / |u|_hi over the sample
  double max_mode_ratio = 0;    // max per-mode weight ratio sqrt(w_lo/w_hi)
  double mode_ratio_at_cut = 0; // per-mode ratio at the largest modulus
  double mode_ratio_mid = 0;    // per-mode ratio at mid modulus
  bool ratio_vanishes = false;  // compactness surrogate: tail ratio decays
};

/// Empirical embedding constants of H^{hi} into H^{lo} on the lattice.
/// Throws on hypothesis violation (lo.s > hi.s, or equal s with phi_lo not
/// dominated by phi_hi along the sampled tail).
EmbeddingReport embedding_constants(const SpaceIndex& hi, const SpaceIndex& lo,
                                    const FrequencyLattice& lattice,
                                    std::span<const SpectralElement> sample);

}  // namespace rscale
